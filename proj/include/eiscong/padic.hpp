#pragma once

// Unramified p-adic arithmetic with explicit precision bookkeeping.
//
// A context fixes (p, cap M, monic modulus h of degree d irreducible mod p);
// the ring is Z_q/p^M with q = p^d.  An element is p^v * u where u is a unit
// (or zero) known modulo p^{prec-v}; `prec` is the absolute precision, which
// every operation propagates pessimistically and never inflates.  p = 2 is
// rejected (exp would need special casing); odd p is fully supported.
//
// The context also performs deterministic root finding (roots in F_q by
// equal-degree splitting with a seeded generator, sorted and Newton-lifted),
// which is how cyclotomic and Hecke-field data gets embedded p-adically.

#include "eiscong/cyclotomic.hpp"
#include "eiscong/residue.hpp"

#include <memory>
#include <optional>
#include <sstream>

namespace eiscong {

struct ZqContext;
using ZqPtr = std::shared_ptr<const ZqContext>;

struct ZqContext : std::enable_shared_from_this<ZqContext> {
  Int p;
  long M;   // absolute precision cap
  Int pM;   // p^M
  MPoly h;  // monic, irreducible mod p, integer coefficients
  long d;
  Int q;  // p^d

  ZqContext(Int p_, long M_, MPoly h_) : p(std::move(p_)), M(M_), h(std::move(h_)) {
    if (p == 2) throw Error("ZqContext: p = 2 not supported");
    pM = int_pow(p, static_cast<unsigned long>(M));
    d = poly_deg(h);
    q = int_pow(p, static_cast<unsigned long>(d));
  }
};

struct UnramifiedPadic {
  ZqPtr ctx;
  long v = 0;     // value = p^v * unit(c)
  long prec = 0;  // absolute: value known mod p^prec
  MPoly c;        // empty <=> zero mod p^prec; else contains a p-unit coeff

  bool is_zero_at_prec() const { return c.empty(); }
};

inline bool is_zero(const UnramifiedPadic& x) { return x.is_zero_at_prec(); }

namespace detail {

inline UnramifiedPadic zq_make(const ZqPtr& ctx, long v, long prec, MPoly c) {
  UnramifiedPadic r;
  r.ctx = ctx;
  r.prec = std::min(prec, ctx->M);
  long rel = r.prec - v;
  if (rel <= 0) {
    r.v = r.prec;
    return r;
  }
  Int mod = int_pow(ctx->p, static_cast<unsigned long>(rel));
  c = mp_mod(mp_reduce(std::move(c), mod), ctx->h, mod);
  long w = rel;
  for (const auto& co : c) w = std::min(w, valuation(co, ctx->p));
  if (w >= rel || c.empty()) {
    r.v = r.prec;
    return r;
  }
  if (w > 0) {
    Int pw = int_pow(ctx->p, static_cast<unsigned long>(w));
    for (auto& co : c) co /= pw;
    Int m2 = int_pow(ctx->p, static_cast<unsigned long>(rel - w));
    c = mp_reduce(std::move(c), m2);
  }
  r.v = v + w;
  r.c = std::move(c);
  return r;
}

}  // namespace detail

inline UnramifiedPadic zq_zero(const ZqPtr& ctx, long prec = -1) {
  UnramifiedPadic r;
  r.ctx = ctx;
  r.prec = prec < 0 ? ctx->M : std::min(prec, ctx->M);
  r.v = r.prec;
  return r;
}

inline UnramifiedPadic zq_from_int(const ZqPtr& ctx, const Int& z, long prec = -1) {
  long P = prec < 0 ? ctx->M : prec;
  return detail::zq_make(ctx, 0, P, MPoly{z});
}

inline UnramifiedPadic zq_from_rat(const ZqPtr& ctx, const Rat& x, long prec = -1) {
  long P = prec < 0 ? ctx->M : prec;
  if (is_zero(x)) return zq_zero(ctx, P);
  long v = valuation(x, ctx->p);
  Rat u = x / rat_pow(Rat(ctx->p), v);
  Int rel_mod = int_pow(ctx->p, static_cast<unsigned long>(std::max(0L, std::min(P, ctx->M) - v)));
  if (rel_mod == 1) return zq_zero(ctx, P);
  UnramifiedPadic r;
  r.ctx = ctx;
  r.prec = std::min(P, ctx->M);
  r.v = v;
  r.c = MPoly{rat_mod(u, rel_mod)};
  return r;
}

inline UnramifiedPadic zq_from_poly(const ZqPtr& ctx, const MPoly& cc, long prec = -1) {
  long P = prec < 0 ? ctx->M : prec;
  return detail::zq_make(ctx, 0, P, cc);
}

// valuation; for zero returns the precision (a lower bound)
inline long zq_val(const UnramifiedPadic& x) { return x.c.empty() ? x.prec : x.v; }

inline UnramifiedPadic operator+(const UnramifiedPadic& a, const UnramifiedPadic& b) {
  const ZqPtr& ctx = a.ctx ? a.ctx : b.ctx;
  long prec = std::min(a.prec, b.prec);
  long base = std::min(zq_val(a), zq_val(b));
  if (base >= prec) return zq_zero(ctx, prec);
  long rel = prec - base;
  Int mod = int_pow(ctx->p, static_cast<unsigned long>(rel));
  MPoly s;
  auto acc = [&](const UnramifiedPadic& x, int sign) {
    if (x.c.empty()) return;
    Int shift = int_pow(ctx->p, static_cast<unsigned long>(x.v - base));
    MPoly t = mp_scale(x.c, sign > 0 ? shift : -shift, mod);
    s = mp_add(s, t, mod);
  };
  acc(a, +1);
  acc(b, +1);
  return detail::zq_make(ctx, base, prec, std::move(s));
}

inline UnramifiedPadic operator-(const UnramifiedPadic& a) {
  UnramifiedPadic r = a;
  if (r.c.empty()) return r;
  Int mod = int_pow(r.ctx->p, static_cast<unsigned long>(r.prec - r.v));
  r.c = mp_sub(MPoly{}, r.c, mod);
  return r;
}

inline UnramifiedPadic operator-(const UnramifiedPadic& a, const UnramifiedPadic& b) {
  return a + (-b);
}

inline UnramifiedPadic operator*(const UnramifiedPadic& a, const UnramifiedPadic& b) {
  const ZqPtr& ctx = a.ctx ? a.ctx : b.ctx;
  if (a.c.empty() || b.c.empty()) {
    long prec = std::min(zq_val(a) + zq_val(b), static_cast<long>(ctx->M));
    return zq_zero(ctx, prec);
  }
  long v = a.v + b.v;
  long prec = std::min(a.prec + b.v, b.prec + a.v);
  long rel = prec - v;
  if (rel <= 0) return zq_zero(ctx, std::max(0L, prec));
  Int mod = int_pow(ctx->p, static_cast<unsigned long>(rel));
  MPoly prod = mp_mod(mp_mul(a.c, b.c, mod), ctx->h, mod);
  return detail::zq_make(ctx, v, prec, std::move(prod));
}

inline bool zq_is_unit(const UnramifiedPadic& x) { return !x.c.empty() && x.v == 0; }

inline UnramifiedPadic zq_inverse(const UnramifiedPadic& x) {
  if (x.c.empty()) throw NotAUnit("zq_inverse: zero at working precision");
  const auto& C = *x.ctx;
  long rel = x.prec - x.v;
  Int mod = int_pow(C.p, static_cast<unsigned long>(rel));
  MPoly hp = mp_reduce(C.h, C.p);
  auto [g, u, w] = mp_xgcd(mp_reduce(x.c, C.p), hp, C.p);
  if (poly_deg(g) != 0) throw NotAUnit("zq_inverse: not invertible mod p");
  MPoly y = mp_scale(u, int_invmod(g[0], C.p), C.p);
  Int pk = C.p;
  while (pk < mod) {
    pk = pk * pk;
    if (pk > mod) pk = mod;
    y = mp_mod(mp_mul(y, mp_sub(MPoly{Int(2)}, mp_mod(mp_mul(x.c, y, pk), C.h, pk), pk), pk),
               C.h, pk);
  }
  UnramifiedPadic r;
  r.ctx = x.ctx;
  r.v = -x.v;
  r.prec = rel - x.v;  // relative precision preserved
  r.c = std::move(y);
  return r;
}

inline UnramifiedPadic operator/(const UnramifiedPadic& a, const UnramifiedPadic& b) {
  return a * zq_inverse(b);
}

inline UnramifiedPadic zq_pow(const UnramifiedPadic& x, const Int& e) {
  if (sgn(e) < 0) return zq_pow(zq_inverse(x), -e);
  UnramifiedPadic r = zq_from_int(x.ctx, 1, x.prec);
  UnramifiedPadic b = x;
  Int k = e;
  while (sgn(k) > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = r * b;
    k >>= 1;
    if (sgn(k) > 0) b = b * b;
  }
  return r;
}

// v_p(a - b) >= k ?
inline bool zq_congruent(const UnramifiedPadic& a, const UnramifiedPadic& b, long k) {
  UnramifiedPadic d = a - b;
  if (d.prec < k) throw PrecisionExhausted("zq_congruent: insufficient precision");
  return zq_val(d) >= k;
}

// Teichmueller lift of the reduction of x: the unique (q-1)-st root of unity
// congruent to x mod p.  Iterating Frobenius x -> x^q gains one digit per step.
inline UnramifiedPadic zq_teichmuller(const UnramifiedPadic& x) {
  if (!zq_is_unit(x)) throw NotAUnit("teichmuller: not a unit");
  const auto& C = *x.ctx;
  UnramifiedPadic t = x;
  for (long i = 0; i <= C.M + 1; ++i) {
    UnramifiedPadic t2 = zq_pow(t, C.q);
    if (zq_congruent(t2, t, t.prec)) return t2;
    t = t2;
  }
  return t;
}

// log on units: log(u) = log(u^{q-1})/(q-1); series on 1 + pZ_q.
// Worst-case precision loss: floor(log_p K) digits from the /k divisions.
inline UnramifiedPadic zq_log_unit(const UnramifiedPadic& u) {
  if (!zq_is_unit(u)) throw NotAUnit("zq_log_unit: valuation != 0");
  const auto& C = *u.ctx;
  long M = u.prec;
  if (M <= 1) throw PrecisionExhausted("zq_log_unit: no digits available");
  UnramifiedPadic w = zq_pow(u, C.q - 1);  // in 1 + pZq
  UnramifiedPadic z = w - zq_from_int(u.ctx, 1, w.prec);
  if (!z.c.empty() && z.v < 1) throw Error("zq_log_unit: u^{q-1} not a one-unit");
  // sum (-1)^{k+1} z^k / k while k * v(z) - v_p(k) < M
  long K = M;
  while (K - static_cast<long>(valuation(Int(K), C.p)) < M) ++K;
  long loss = 0;
  for (long k = 1; k <= K; ++k) loss = std::max(loss, valuation(Int(k), C.p));
  UnramifiedPadic acc = zq_zero(u.ctx, M);
  UnramifiedPadic zk = zq_from_int(u.ctx, 1, M);
  for (long k = 1; k <= K; ++k) {
    zk = zk * z;
    if (zk.c.empty() && zq_val(zk) >= M) break;
    UnramifiedPadic term = zk * zq_from_rat(u.ctx, make_rat(Int((k % 2) ? 1 : -1), Int(k)), M);
    acc = acc + term;
  }
  acc = acc * zq_from_rat(u.ctx, make_rat(Int(1), C.q - 1), M);
  acc.prec = std::min(acc.prec, M - loss);
  return detail::zq_make(u.ctx, acc.v, acc.prec, acc.c);
}

// exp on p^1-divisible arguments (p odd).
inline UnramifiedPadic zq_exp(const UnramifiedPadic& x) {
  const auto& C = *x.ctx;
  long M = x.prec;
  if (!x.c.empty() && x.v < 1) throw Error("zq_exp: argument must be divisible by p");
  UnramifiedPadic acc = zq_from_int(x.ctx, 1, M);
  UnramifiedPadic xk = zq_from_int(x.ctx, 1, M);
  Rat kfac(1);
  long loss = 0;
  for (long k = 1;; ++k) {
    xk = xk * x;
    kfac *= Rat(k);
    long vk = valuation(Int(kfac.get_num()), C.p);
    loss = std::max(loss, vk);
    if (zq_val(xk) - vk >= M) break;
    acc = acc + xk * zq_from_rat(x.ctx, Rat(1) / kfac, M);
    if (k > 4 * M + 20) throw PrecisionExhausted("zq_exp: series did not terminate");
  }
  acc.prec = std::min(acc.prec, M - loss);
  return detail::zq_make(x.ctx, acc.v, acc.prec, acc.c);
}

// <a>^s = exp(s log a) for a one-unit a; s any p-adic integer.
inline UnramifiedPadic zq_power_oneunit(const UnramifiedPadic& a, const Int& s) {
  if (!zq_is_unit(a)) throw NotOneUnit("zq_power_oneunit: not a unit");
  UnramifiedPadic am1 = a - zq_from_int(a.ctx, 1, a.prec);
  if (!am1.c.empty() && am1.v < 1) throw NotOneUnit("zq_power_oneunit: not congruent to 1 mod p");
  return zq_exp(zq_log_unit(a) * zq_from_int(a.ctx, s, a.prec));
}

inline std::string zq_str(const UnramifiedPadic& x) {
  std::ostringstream os;
  if (x.c.empty()) {
    os << "O(" << x.ctx->p.get_str() << "^" << x.prec << ")";
    return os.str();
  }
  os << x.ctx->p.get_str() << "^" << x.v << "*[";
  for (size_t i = 0; i < x.c.size(); ++i) {
    if (i) os << ",";
    os << x.c[i].get_str();
  }
  os << "] + O(" << x.ctx->p.get_str() << "^" << x.prec << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Residue-field elements (t = 1 view of a ZqContext) and root finding.

struct FqElem {
  ZqPtr ctx;  // null: integer scalar
  MPoly c;

  FqElem() = default;
  FqElem(long v) {  // NOLINT implicit scalar
    if (v != 0) c = {Int(v)};
  }
  FqElem(ZqPtr x, MPoly cc) : ctx(std::move(x)) {
    c = mp_mod(mp_reduce(std::move(cc), ctx->p), ctx->h, ctx->p);
  }
};

inline bool is_zero(const FqElem& x) {
  if (!x.ctx) return x.c.empty() || sgn(x.c[0]) == 0;
  return x.c.empty();
}

namespace detail {
inline ZqPtr fq_ctx(const FqElem& a, const FqElem& b) { return a.ctx ? a.ctx : b.ctx; }
}

inline FqElem operator+(const FqElem& a, const FqElem& b) {
  auto ctx = detail::fq_ctx(a, b);
  if (!ctx) {
    FqElem r;
    Int v = (a.c.empty() ? Int(0) : a.c[0]) + (b.c.empty() ? Int(0) : b.c[0]);
    if (sgn(v)) r.c = {v};
    return r;
  }
  return FqElem(ctx, mp_add(mp_reduce(a.c, ctx->p), mp_reduce(b.c, ctx->p), ctx->p));
}

inline FqElem operator-(const FqElem& a) {
  FqElem r = a;
  for (auto& v : r.c) v = -v;
  if (r.ctx) r.c = mp_reduce(std::move(r.c), r.ctx->p);
  return r;
}

inline FqElem operator-(const FqElem& a, const FqElem& b) { return a + (-b); }

inline FqElem operator*(const FqElem& a, const FqElem& b) {
  auto ctx = detail::fq_ctx(a, b);
  if (!ctx) {
    FqElem r;
    Int v = (a.c.empty() ? Int(0) : a.c[0]) * (b.c.empty() ? Int(0) : b.c[0]);
    if (sgn(v)) r.c = {v};
    return r;
  }
  return FqElem(ctx, mp_mul(mp_reduce(a.c, ctx->p), mp_reduce(b.c, ctx->p), ctx->p));
}

inline FqElem inverse(const FqElem& x) {
  if (!x.ctx) {
    Int v = x.c.empty() ? Int(0) : x.c[0];
    if (abs(v) != 1) throw NotAUnit("FqElem scalar inverse");
    return x;
  }
  auto [g, u, w] = mp_xgcd(x.c, mp_reduce(x.ctx->h, x.ctx->p), x.ctx->p);
  if (poly_deg(g) != 0) throw NotAUnit("FqElem: not invertible");
  return FqElem(x.ctx, mp_scale(u, int_invmod(g[0], x.ctx->p), x.ctx->p));
}

inline bool fq_less(const FqElem& a, const FqElem& b) { return mp_less(a.c, b.c); }

// All roots in F_q of a polynomial with FqElem coefficients, sorted by
// coefficient tuple; deterministic via the seeded generator.
inline std::vector<FqElem> fq_roots(PolyV<FqElem> f, const ZqPtr& ctx, Rng& rng) {
  poly_trim(f);
  if (poly_deg(f) < 1) return {};
  // keep only the part that splits into linear factors
  PolyV<FqElem> x{FqElem(0), FqElem(1)};
  PolyV<FqElem> xq = x;
  for (long i = 0; i < ctx->d; ++i) xq = poly_powmod(xq, ctx->p, f);
  PolyV<FqElem> lin = poly_gcd(poly_sub(xq, x), f);
  std::vector<FqElem> roots;
  std::vector<PolyV<FqElem>> stack;
  if (poly_deg(lin) >= 1) stack.push_back(poly_monic(lin));
  Int e = (ctx->q - 1) / 2;
  while (!stack.empty()) {
    PolyV<FqElem> g = stack.back();
    stack.pop_back();
    if (poly_deg(g) == 1) {
      roots.push_back(-g[0] * inverse(g[1]));
      continue;
    }
    // random shift split: gcd((x+delta)^{(q-1)/2} - 1, g)
    for (;;) {
      MPoly dc(static_cast<size_t>(ctx->d));
      for (auto& co : dc) co = Int(static_cast<unsigned long>(rng.below(mpz_get_ui(ctx->p.get_mpz_t()))));
      FqElem delta(ctx, std::move(dc));
      PolyV<FqElem> base{delta, FqElem(1)};
      PolyV<FqElem> w = poly_powmod(base, e, g);
      w = poly_sub(w, PolyV<FqElem>{FqElem(1)});
      PolyV<FqElem> h = poly_gcd(w, g);
      long dh = poly_deg(h);
      if (dh >= 1 && dh < poly_deg(g)) {
        stack.push_back(poly_monic(h));
        stack.push_back(poly_monic(poly_divmod(g, h).first));
        break;
      }
    }
  }
  std::sort(roots.begin(), roots.end(), fq_less);
  return roots;
}

inline std::vector<FqElem> fq_roots_of_int_poly(const IPoly& f, const ZqPtr& ctx, Rng& rng) {
  PolyV<FqElem> g;
  g.reserve(f.size());
  for (const auto& c : f) g.push_back(FqElem(ctx, MPoly{c}));
  return fq_roots(std::move(g), ctx, rng);
}

// Newton-lift a simple mod-p root of an integer polynomial to precision M.
inline UnramifiedPadic zq_lift_root(const ZqPtr& ctx, const IPoly& f, const FqElem& root0) {
  MPoly x = root0.c;
  IPoly df_i;
  {
    QPoly d = poly_derivative(ipoly_to_q(f));
    df_i.resize(d.size());
    for (size_t i = 0; i < d.size(); ++i) df_i[i] = d[i].get_num();
  }
  auto eval_at = [&](const IPoly& poly, const MPoly& at, const Int& mod) {
    MPoly r;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
      r = mp_mul(r, at, mod);
      r = mp_add(r, MPoly{*it}, mod);
      r = mp_mod(r, ctx->h, mod);
    }
    return r;
  };
  Int pk = ctx->p;
  long kexp = 1;
  while (pk < ctx->pM) {
    pk = pk * pk;
    kexp *= 2;
    if (pk > ctx->pM) {
      pk = ctx->pM;
      kexp = ctx->M;
    }
    MPoly fx = eval_at(f, x, pk);
    MPoly dfx = eval_at(df_i, x, pk);
    // x -= f(x)/f'(x): f'(x) is a unit since the root is simple mod p
    UnramifiedPadic num = zq_from_poly(ctx, fx, kexp);
    UnramifiedPadic den = zq_from_poly(ctx, dfx, kexp);
    UnramifiedPadic corr = num * zq_inverse(den);
    MPoly cm = corr.c;
    if (!cm.empty()) {
      Int shift = int_pow(ctx->p, static_cast<unsigned long>(corr.v));
      cm = mp_scale(cm, shift, pk);
      x = mp_sub(x, cm, pk);
    }
  }
  MPoly check = eval_at(f, x, ctx->pM);
  if (!check.empty()) throw Error("zq_lift_root: Newton iteration failed");
  return zq_from_poly(ctx, x);
}

// Deterministic monic irreducible polynomial of degree d over F_p.
inline MPoly find_irreducible_modp(const Int& p, long d, std::uint64_t seed = 1) {
  if (d == 1) return MPoly{Int(0), Int(1)};
  Rng rng(seed ^ fnv1a64("irr" + p.get_str() + "," + std::to_string(d)));
  for (;;) {
    MPoly f(static_cast<size_t>(d) + 1);
    f[static_cast<size_t>(d)] = 1;
    for (long i = 0; i < d; ++i)
      f[static_cast<size_t>(i)] = Int(static_cast<unsigned long>(rng.below(mpz_get_ui(p.get_mpz_t()))));
    // irreducible iff x^{p^d} = x mod f and gcd(x^{p^{d/l}} - x, f) = 1
    MPoly x{Int(0), Int(1)};
    MPoly xp = x;
    std::vector<MPoly> powers;  // x^{p^i} mod f
    powers.push_back(x);
    bool ok = true;
    for (long i = 1; i <= d; ++i) {
      xp = mp_powmod(xp, p, f, p);
      powers.push_back(xp);
    }
    if (mp_sub(powers[static_cast<size_t>(d)], x, p) != MPoly{}) continue;
    for (auto [l, e] : factor_long(d)) {
      (void)e;
      MPoly diff = mp_sub(powers[static_cast<size_t>(d / l)], x, p);
      if (poly_deg(mp_gcd(diff, f, p)) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) return f;
  }
}

inline ZqPtr make_context(const Int& p, long M, long degree, std::uint64_t seed = 1) {
  return std::make_shared<ZqContext>(p, M, find_irreducible_modp(p, degree, seed));
}

// Reduce to a residue ring living on the same modulus (t <= prec).
inline ResidueElement zq_to_residue(const UnramifiedPadic& x, const ResidueRingPtr& ring) {
  if (!(ring->ghat == mp_reduce(x.ctx->h, ring->pt)))
    throw Error("zq_to_residue: modulus mismatch");
  if (x.prec < ring->t) throw PrecisionExhausted("zq_to_residue: insufficient precision");
  if (x.v < 0) throw Error("zq_to_residue: negative valuation");
  if (x.c.empty()) return ResidueElement(ring, MPoly{});
  Int shift = int_pow(x.ctx->p, static_cast<unsigned long>(x.v));
  return ResidueElement(ring, mp_scale(x.c, shift, ring->pt));
}

}  // namespace eiscong
