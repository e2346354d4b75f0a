#pragma once

// Elements of Q[x]/(g) for a monic irreducible integer polynomial g: the
// coefficient fields of eigenform packets.  A null field pointer marks a
// plain rational scalar, which promotes on contact (so F(0)/F(1) work inside
// the generic polynomial and matrix templates).

#include "eiscong/linalg.hpp"

#include <memory>

namespace eiscong {

struct NumberField {
  IPoly g;  // monic irreducible over Z
  QPoly gq;
  explicit NumberField(IPoly g_) : g(std::move(g_)), gq(ipoly_to_q(g)) {
    if (g.empty() || g.back() != 1) throw Error("NumberField: g must be monic");
  }
  long degree() const { return poly_deg(g); }
};

using NFPtr = std::shared_ptr<const NumberField>;

struct NFElem {
  NFPtr F;  // null: rational scalar held in c (deg <= 0)
  QPoly c;

  NFElem() = default;
  NFElem(long v) {  // NOLINT implicit scalar promotion
    if (v != 0) c = {Rat(v)};
  }
  explicit NFElem(const Rat& v) {
    if (!eiscong::is_zero(v)) c = {v};
  }
  NFElem(NFPtr f, QPoly cc) : F(std::move(f)), c(poly_mod(std::move(cc), F->gq)) {}

  bool is_rational() const { return poly_deg(c) <= 0; }
  Rat rational_value() const {
    if (!is_rational()) throw Error("NFElem: not rational");
    return c.empty() ? Rat(0) : c[0];
  }
};

inline bool is_zero(const NFElem& x) { return x.c.empty(); }

namespace detail {
inline NFPtr nf_ctx(const NFElem& a, const NFElem& b) {
  if (a.F && b.F && a.F != b.F && !(a.F->g == b.F->g))
    throw Error("NFElem: mixed fields");
  return a.F ? a.F : b.F;
}
}  // namespace detail

inline NFElem operator+(const NFElem& a, const NFElem& b) {
  NFElem r;
  r.F = detail::nf_ctx(a, b);
  r.c = poly_add(a.c, b.c);
  if (r.F) r.c = poly_mod(std::move(r.c), r.F->gq);
  return r;
}

inline NFElem operator-(const NFElem& a) {
  NFElem r = a;
  r.c = poly_neg(std::move(r.c));
  return r;
}

inline NFElem operator-(const NFElem& a, const NFElem& b) { return a + (-b); }

inline NFElem operator*(const NFElem& a, const NFElem& b) {
  NFElem r;
  r.F = detail::nf_ctx(a, b);
  r.c = poly_mul(a.c, b.c);
  if (r.F) r.c = poly_mod(std::move(r.c), r.F->gq);
  return r;
}

inline bool operator==(const NFElem& a, const NFElem& b) { return is_zero(a - b); }
inline bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }

inline NFElem inverse(const NFElem& x) {
  if (is_zero(x)) throw NotAUnit("NFElem: inverse of zero");
  if (!x.F) {
    NFElem r;
    r.c = {inverse(x.c[0])};
    return r;
  }
  auto [g, u, v] = poly_xgcd(x.c, x.F->gq);
  if (poly_deg(g) != 0) throw NotAUnit("NFElem: not invertible");
  return NFElem(x.F, poly_scale(u, inverse(g[0])));
}

inline NFElem operator/(const NFElem& a, const NFElem& b) { return a * inverse(b); }

inline NFElem nf_make(const NFPtr& F, QPoly c) { return NFElem(F, std::move(c)); }

inline NFElem nf_gen(const NFPtr& F) { return NFElem(F, QPoly{Rat(0), Rat(1)}); }

inline NFElem nf_pow(NFElem x, long e) {
  if (e < 0) return nf_pow(inverse(x), -e);
  NFElem r(1);
  while (e) {
    if (e & 1) r = r * x;
    x = x * x;
    e >>= 1;
  }
  return r;
}

// minimal polynomial of x over Q (monic, integer after denominator clearing
// is the caller's business); computed by linear algebra on powers of x
inline QPoly nf_min_poly(const NFElem& x) {
  if (!x.F) return QPoly{x.c.empty() ? Rat(0) : -x.c[0], Rat(1)};
  long d = x.F->degree();
  // find the first linear dependency among 1, x, x^2, ...
  Mat<Rat> rows;
  NFElem p(1);
  for (long k = 0; k <= d; ++k) {
    Vec<Rat> row(static_cast<size_t>(d), Rat(0));
    for (size_t i = 0; i < p.c.size(); ++i) row[i] = p.c[i];
    rows.push_back(row);
    // test dependency among rows via kernel of transpose
    Mat<Rat> m = rows;
    auto piv = mat_rref(m);
    if (static_cast<long>(piv.size()) < static_cast<long>(rows.size())) {
      // dependency: solve rows^T y = 0 with y_k = 1 as the last coefficient
      Mat<Rat> sys = mat_zero<Rat>(static_cast<size_t>(d), rows.size());
      for (size_t r = 0; r < rows.size(); ++r)
        for (long i = 0; i < d; ++i) sys[static_cast<size_t>(i)][r] = rows[r][static_cast<size_t>(i)];
      Mat<Rat> ker = mat_kernel(sys);
      // pick the kernel vector with nonzero top coefficient, normalize monic
      for (auto& v : ker) {
        if (is_zero(v.back())) continue;
        QPoly mp(v.begin(), v.end());
        poly_trim(mp);
        return poly_monic(mp);
      }
      throw Error("nf_min_poly: dependency without monic witness");
    }
    p = p * x;
  }
  throw Error("nf_min_poly: no dependency found");
}

}  // namespace eiscong
