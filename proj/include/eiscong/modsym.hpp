#pragma once

// Weight-2 modular symbols for Gamma_1(N) with nebentype, in the Manin
// presentation: generators are normalized P^1(Z/N) classes, relations are the
// two- and three-term Manin relations twisted by theta, the boundary map
// lands in the theta-twisted cusp space, and Hecke operators act through
// Merel's universal matrices (terms whose bottom row becomes non-coprime to
// N vanish).  All linear algebra is exact over the character value field.

#include "eiscong/linalg.hpp"
#include "eiscong/qexp.hpp"

#include <array>
#include <map>

namespace eiscong {

struct P1Table {
  long N = 1;
  std::vector<std::pair<long, long>> reps;
  std::vector<long> index_of;   // c*N+d -> rep index, -1 if gcd(c,d,N)>1
  std::vector<long> scalar_of;  // (c,d) = scalar * rep

  long size() const { return static_cast<long>(reps.size()); }
  std::pair<long, long> lookup(long c, long d) const {
    c = mod_long(c, N);
    d = mod_long(d, N);
    long key = c * N + d;
    return {index_of[static_cast<size_t>(key)], scalar_of[static_cast<size_t>(key)]};
  }
};

inline P1Table build_p1(long N) {
  P1Table t;
  t.N = N;
  t.index_of.assign(static_cast<size_t>(N * N), -1);
  t.scalar_of.assign(static_cast<size_t>(N * N), 0);
  std::vector<long> units;
  for (long u = 0; u < N; ++u)
    if (gcd_long(u, N) == 1) units.push_back(u);
  for (long c = 0; c < N; ++c) {
    for (long d = 0; d < N; ++d) {
      if (gcd_long(gcd_long(c, d), N) != 1) continue;
      long key = c * N + d;
      if (t.index_of[static_cast<size_t>(key)] != -1) continue;
      long bc = -1, bd = -1;
      for (long u : units) {
        long cc = mulmod_long(u, c, N), dd = mulmod_long(u, d, N);
        if (bc == -1 || cc < bc || (cc == bc && dd < bd)) {
          bc = cc;
          bd = dd;
        }
      }
      long idx = t.size();
      t.reps.emplace_back(bc, bd);
      for (long u : units) {
        long k = mulmod_long(u, bc, N) * N + mulmod_long(u, bd, N);
        t.index_of[static_cast<size_t>(k)] = idx;
        t.scalar_of[static_cast<size_t>(k)] = u;
      }
    }
  }
  return t;
}

// Merel's universal Hecke matrices of determinant n: [a b; c d] with
// a > b >= 0, d > c >= 0, ad - bc = n.
inline const std::vector<std::array<long, 4>>& merel_matrices(long n) {
  static std::map<long, std::vector<std::array<long, 4>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::array<long, 4>> out;
  for (long a = 1; a <= n; ++a) {
    for (long d = 1; d <= n; ++d) {
      long K = a * d - n;
      if (K < 0) continue;
      if (K == 0) {
        for (long c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        for (long b = 1; b < a; ++b) out.push_back({a, b, 0, d});
      } else {
        for (long b = 1; b < a; ++b) {
          if (K % b != 0) continue;
          long c = K / b;
          if (c < d) out.push_back({a, b, c, d});
        }
      }
    }
  }
  return cache.emplace(n, std::move(out)).first->second;
}

struct Cusp {
  long p = 1, q = 0;  // lowest terms, q >= 0; infinity = (1,0)
};

inline Cusp cusp_normalize(long p, long q) {
  if (q == 0) return {1, 0};
  long g = gcd_long(p, q);
  p /= g;
  q /= g;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

// +-Gamma_1(N) equivalence: exists s = +-1, t with q' = s q (mod N),
// p' = s p + t q (mod gcd(q, N)).
inline bool cusps_equivalent(const Cusp& A, const Cusp& B, long N) {
  for (long s : {1L, -1L}) {
    if (mod_long(B.q - s * A.q, N) != 0) continue;
    long g = std::max(gcd_long(A.q, N), 1L);
    if (mod_long(B.p - s * A.p, g) == 0) return true;
  }
  return false;
}

// canonical class invariant: lexicographic minimum of (s q mod N, s p mod g)
// over s = +-1, where g = gcd(q, N); two cusps are equivalent iff keys match
inline std::pair<long, long> cusp_class_key(const Cusp& c, long N) {
  long qm = mod_long(c.q, N);
  long g = std::max(gcd_long(qm, N), 1L);  // gcd(0, N) = N
  std::pair<long, long> a{qm, mod_long(c.p, g)};
  std::pair<long, long> b{mod_long(-c.q, N), mod_long(-c.p, g)};
  return std::min(a, b);
}

// a small representative cusp of a class key (coordinates bounded by ~N^2)
inline Cusp cusp_from_key(std::pair<long, long> key, long N) {
  long q = key.first == 0 ? N : key.first;
  long g = std::max(gcd_long(key.first, N), 1L);
  long p = key.second;
  long guard = 0;
  while (gcd_long(p, q) != 1) {
    p += g;
    if (++guard > 4 * N + 4) throw Error("cusp_from_key: no coprime lift");
  }
  return {p, q};
}

namespace detail {

// lift (c,d) mod N to a coprime integer pair congruent to it
inline std::pair<long, long> lift_coprime(long c, long d, long N) {
  c = mod_long(c, N);
  d = mod_long(d, N);
  if (c == 0) {
    if (gcd_long(d, N) != 1) throw Error("lift_coprime: bad pair");
    return {N, d};
  }
  for (long k = 0; k <= 8 * N + 8; ++k) {
    long dd = d + k * N;
    if (gcd_long(c, dd) == 1) return {c, dd};
  }
  throw Error("lift_coprime: no lift found");
}

// [a b; c d] in SL_2(Z) with the given coprime bottom row
inline std::array<long, 4> complete_sl2(long c, long d) {
  long old_r = c, r = d, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long q = old_r / r;
    long tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  long g = old_r, u = old_s, v = old_t;
  if (g == -1) {
    u = -u;
    v = -v;
  } else if (g != 1) {
    throw Error("complete_sl2: row not coprime");
  }
  // u c + v d = 1  ->  [v, -u; c, d] has det v d + u c = 1
  return {v, -u, c, d};
}

inline long ipow_long(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

// Cohen-Oesterle dimension of S_2(N, chi); 0 for odd chi.
inline long dim_s2_oracle(long N, const DirichletCharacter& chi) {
  if (!chi.is_even()) return 0;
  long f = chi.conductor();
  long idx = N;
  for (auto& [p, e] : factor_long(N)) {
    (void)e;
    idx = idx / p * (p + 1);
  }
  Rat dim = make_rat(Int(idx), Int(12));
  Rat lam(1);
  for (auto& [p, r] : factor_long(N)) {
    long s = 0, ff = f;
    while (ff % p == 0) {
      ff /= p;
      ++s;
    }
    long l;
    if (2 * s <= r)
      l = (r % 2 == 0) ? detail::ipow_long(p, r / 2) + detail::ipow_long(p, r / 2 - 1)
                       : 2 * detail::ipow_long(p, (r - 1) / 2);
    else
      l = 2 * detail::ipow_long(p, r - s);
    lam *= l;
  }
  dim -= lam / 2;
  Cyclo s4(0), s3(0);
  for (long x = 0; x < N; ++x) {
    if (mod_long(x * x + 1, N) == 0) s4 = s4 + chi.value(x);
    if (mod_long(x * x + x + 1, N) == 0) s3 = s3 + chi.value(x);
  }
  Cyclo total = Cyclo(dim) + s4 * Cyclo(make_rat(Int(-1), Int(4))) +
                s3 * Cyclo(make_rat(Int(-1), Int(3)));
  if (chi.is_trivial()) total = total + Cyclo(1);
  if (!total.is_scalar()) throw Error("dim_s2_oracle: non-rational value");
  Rat v = total.scalar();
  if (v.get_den() != 1) throw Error("dim_s2_oracle: non-integral value");
  return std::max(to_long(Int(v.get_num())), 0L);
}

// genus of X_1(N): independent cross-check for the dimension oracle
inline long genus_x1(long N) {
  if (N <= 4) return 0;
  long mu = psl2_index_gamma1(N);
  long cusps = 0;
  for (long d = 1; d <= N; ++d)
    if (N % d == 0) cusps += euler_phi_long(d) * euler_phi_long(N / d);
  cusps /= 2;
  Rat g = Rat(1) + make_rat(Int(mu), Int(12)) - make_rat(Int(cusps), Int(2));
  if (g.get_den() != 1) throw Error("genus_x1: non-integral");
  return to_long(Int(g.get_num()));
}

struct SymbolSpace {
  long N = 1;
  DirichletCharacter theta;  // extended to modulus N, even
  long order_m = 1;
  P1Table p1;
  long D = 0;
  std::vector<long> basis_gen;
  Mat<Cyclo> gen2basis;  // row per generator: coordinates in the basis
  // boundary data
  std::vector<Cusp> cusp_reps;
  std::vector<long> cusp_root;
  std::vector<Cyclo> cusp_weight;  // zero weight = killed by the theta-twist
  long boundary_dim = 0;
  Mat<Cyclo> boundary;         // boundary_dim x D
  Mat<Cyclo> cusp_basis_rows;  // Dc kernel vectors of length D
  long Dc = 0;
  mutable std::map<long, Mat<Cyclo>> hecke_cache;

  Cyclo theta_of(long u) const { return theta.value(u); }

  Vec<Cyclo> symbol_vec(long c, long d) const {
    auto [idx, sc] = p1.lookup(c, d);
    if (idx < 0) return Vec<Cyclo>(static_cast<size_t>(D), Cyclo(0));
    Vec<Cyclo> v = gen2basis[static_cast<size_t>(idx)];
    Cyclo w = theta_of(sc);
    for (auto& x : v) x = x * w;
    return v;
  }
};

inline SymbolSpace build_space(long N, const DirichletCharacter& theta_in) {
  if (N < 3) throw Error("build_space: level must be at least 3");
  DirichletCharacter theta = theta_in.modulus == N ? theta_in : char_extend(theta_in, N);
  if (!theta.is_even()) throw OddCharacter("build_space: weight-2 space needs even theta");

  SymbolSpace S;
  S.N = N;
  S.theta = theta;
  S.order_m = std::max<long>(theta.order(), 1);
  S.p1 = build_p1(N);
  long ng = S.p1.size();

  // Manin relations: x + x sigma = 0 and x + x tau + x tau^2 = 0 with
  // (c,d) sigma = (d, -c), (c,d) tau = (d, -c-d), (c,d) tau^2 = (-c-d, c).
  Mat<Cyclo> rel;
  auto term = [&](Vec<Cyclo>& row, long c, long d) {
    auto [idx, sc] = S.p1.lookup(c, d);
    if (idx < 0) throw Error("build_space: relation hit a non-coprime pair");
    row[static_cast<size_t>(idx)] = row[static_cast<size_t>(idx)] + S.theta_of(sc);
  };
  for (long i = 0; i < ng; ++i) {
    auto [c, d] = S.p1.reps[static_cast<size_t>(i)];
    Vec<Cyclo> r1(static_cast<size_t>(ng), Cyclo(0));
    term(r1, c, d);
    term(r1, d, -c);
    rel.push_back(std::move(r1));
    Vec<Cyclo> r2(static_cast<size_t>(ng), Cyclo(0));
    term(r2, c, d);
    term(r2, d, -c - d);
    term(r2, -c - d, c);
    rel.push_back(std::move(r2));
  }
  auto pivots = mat_rref(rel);
  std::vector<char> is_pivot(static_cast<size_t>(ng), 0);
  for (size_t p : pivots) is_pivot[p] = 1;
  std::vector<long> col_to_basis(static_cast<size_t>(ng), -1);
  for (long i = 0; i < ng; ++i) {
    if (!is_pivot[static_cast<size_t>(i)]) {
      col_to_basis[static_cast<size_t>(i)] = S.D++;
      S.basis_gen.push_back(i);
    }
  }
  S.gen2basis = mat_zero<Cyclo>(static_cast<size_t>(ng), static_cast<size_t>(S.D));
  for (long i = 0; i < ng; ++i)
    if (col_to_basis[static_cast<size_t>(i)] >= 0)
      S.gen2basis[static_cast<size_t>(i)]
                 [static_cast<size_t>(col_to_basis[static_cast<size_t>(i)])] = Cyclo(1);
  for (size_t r = 0; r < pivots.size(); ++r) {
    size_t pc = pivots[r];
    for (long j = 0; j < ng; ++j) {
      if (is_pivot[static_cast<size_t>(j)]) continue;
      Cyclo v = rel[r][static_cast<size_t>(j)];
      if (!is_zero(v))
        S.gen2basis[pc][static_cast<size_t>(col_to_basis[static_cast<size_t>(j)])] = -v;
    }
  }

  // ---- boundary ----
  std::map<std::pair<long, long>, long> class_index;
  auto classify_grow = [&](const Cusp& c) -> long {
    auto key = cusp_class_key(c, N);
    auto it = class_index.find(key);
    if (it != class_index.end()) return it->second;
    long idx = static_cast<long>(S.cusp_reps.size());
    class_index.emplace(key, idx);
    S.cusp_reps.push_back(cusp_from_key(key, N));  // small canonical rep
    return idx;
  };
  std::vector<std::pair<long, long>> gen_bnd(static_cast<size_t>(ng));
  for (long i = 0; i < ng; ++i) {
    auto [c0, d0] = S.p1.reps[static_cast<size_t>(i)];
    auto [c, d] = detail::lift_coprime(c0, d0, N);
    auto m = detail::complete_sl2(c, d);
    long plus = classify_grow(cusp_normalize(m[0], m[2]));   // gamma(oo) = a/c
    long minus = classify_grow(cusp_normalize(m[1], m[3]));  // gamma(0) = b/d
    gen_bnd[static_cast<size_t>(i)] = {plus, minus};
  }
  // close the class set under the diamond action (boundary images alone can
  // miss classes that only arise as diamond translates)
  const auto& G = unit_group(N);
  auto diamond_cusp = [&](long u, const Cusp& cu) {
    // gamma_u = [x y; N w] with w = u (mod N), det 1
    long w = u;
    long x = invmod_long(w, N);
    long y = (x * w - 1) / N;
    return cusp_normalize(x * cu.p + y * cu.q, N * cu.p + w * cu.q);
  };
  for (size_t k = 0; k < S.cusp_reps.size(); ++k)
    for (long u : G.gens) classify_grow(diamond_cusp(u, S.cusp_reps[k]));
  long nclasses = static_cast<long>(S.cusp_reps.size());
  auto find_class = [&](const Cusp& c) -> long {
    auto it = class_index.find(cusp_class_key(c, N));
    if (it == class_index.end())
      throw Error("build_space: diamond action left the cusp class set");
    return it->second;
  };
  S.cusp_root.assign(static_cast<size_t>(nclasses), -1);
  S.cusp_weight.assign(static_cast<size_t>(nclasses), Cyclo(0));
  for (long start = 0; start < nclasses; ++start) {
    if (S.cusp_root[static_cast<size_t>(start)] != -1) continue;
    std::vector<long> stack{start}, orbit{start};
    S.cusp_root[static_cast<size_t>(start)] = start;
    S.cusp_weight[static_cast<size_t>(start)] = Cyclo(1);
    bool dead = false;
    while (!stack.empty()) {
      long k = stack.back();
      stack.pop_back();
      for (long u : G.gens) {
        Cusp img = diamond_cusp(u, S.cusp_reps[static_cast<size_t>(k)]);
        long k2 = find_class(img);
        Cyclo w2 = S.theta_of(u) * S.cusp_weight[static_cast<size_t>(k)];
        if (S.cusp_root[static_cast<size_t>(k2)] == -1) {
          S.cusp_root[static_cast<size_t>(k2)] = start;
          S.cusp_weight[static_cast<size_t>(k2)] = w2;
          stack.push_back(k2);
          orbit.push_back(k2);
        } else if (!(S.cusp_weight[static_cast<size_t>(k2)] == w2)) {
          dead = true;
        }
      }
    }
    if (dead)
      for (long k : orbit) S.cusp_weight[static_cast<size_t>(k)] = Cyclo(0);
  }
  std::map<long, long> root_row;
  for (long k = 0; k < nclasses; ++k) {
    if (is_zero(S.cusp_weight[static_cast<size_t>(k)])) continue;
    long r = S.cusp_root[static_cast<size_t>(k)];
    if (!root_row.count(r)) root_row[r] = S.boundary_dim++;
  }
  S.boundary = mat_zero<Cyclo>(static_cast<size_t>(S.boundary_dim), static_cast<size_t>(S.D));
  for (long j = 0; j < S.D; ++j) {
    long gen = S.basis_gen[static_cast<size_t>(j)];
    auto add_cusp = [&](long cls, int sign) {
      if (is_zero(S.cusp_weight[static_cast<size_t>(cls)])) return;
      long row = root_row[S.cusp_root[static_cast<size_t>(cls)]];
      S.boundary[static_cast<size_t>(row)][static_cast<size_t>(j)] =
          S.boundary[static_cast<size_t>(row)][static_cast<size_t>(j)] +
          S.cusp_weight[static_cast<size_t>(cls)] * Cyclo(sign);
    };
    add_cusp(gen_bnd[static_cast<size_t>(gen)].first, +1);
    add_cusp(gen_bnd[static_cast<size_t>(gen)].second, -1);
  }
  {
    Mat<Cyclo> b = S.boundary;
    S.cusp_basis_rows = mat_kernel(b);
    S.Dc = static_cast<long>(S.cusp_basis_rows.size());
  }

  long s2 = dim_s2_oracle(N, theta);
  long eis = static_cast<long>(eisenstein_triples(N, theta).size());
  if (S.D != 2 * s2 + eis)
    throw Error("build_space: dim " + std::to_string(S.D) + " != 2*" + std::to_string(s2) +
                " + " + std::to_string(eis) + " at N=" + std::to_string(N) + " " +
                character_token(theta));
  if (S.Dc != 2 * s2) throw Error("build_space: cuspidal dimension mismatch");
  return S;
}

// star involution (c:d) -> (-c:d), acting on column vectors
inline Mat<Cyclo> star_matrix(const SymbolSpace& S) {
  Mat<Cyclo> m = mat_zero<Cyclo>(static_cast<size_t>(S.D), static_cast<size_t>(S.D));
  for (long j = 0; j < S.D; ++j) {
    auto [c, d] = S.p1.reps[static_cast<size_t>(S.basis_gen[static_cast<size_t>(j)])];
    Vec<Cyclo> v = S.symbol_vec(-c, d);
    for (long i = 0; i < S.D; ++i)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v[static_cast<size_t>(i)];
  }
  return m;
}

// T_l (U_l for l | N) acting on column vectors of the quotient; cached.
inline const Mat<Cyclo>& hecke_matrix(const SymbolSpace& S, long l) {
  auto it = S.hecke_cache.find(l);
  if (it != S.hecke_cache.end()) return it->second;
  Mat<Cyclo> m = mat_zero<Cyclo>(static_cast<size_t>(S.D), static_cast<size_t>(S.D));
  const auto& heil = merel_matrices(l);
  for (long j = 0; j < S.D; ++j) {
    auto [c, d] = S.p1.reps[static_cast<size_t>(S.basis_gen[static_cast<size_t>(j)])];
    for (const auto& M : heil) {
      long c2 = c * M[0] + d * M[2];
      long d2 = c * M[1] + d * M[3];
      auto [idx, sc] = S.p1.lookup(c2, d2);
      if (idx < 0) continue;
      Cyclo w = S.theta_of(sc);
      const auto& row = S.gen2basis[static_cast<size_t>(idx)];
      for (long i = 0; i < S.D; ++i)
        if (!is_zero(row[static_cast<size_t>(i)]))
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              m[static_cast<size_t>(i)][static_cast<size_t>(j)] + w * row[static_cast<size_t>(i)];
    }
  }
  return S.hecke_cache.emplace(l, std::move(m)).first->second;
}

// dual operator T*_l = <l>^{-1} T_l for l coprime to N (scalar theta(l)^{-1}
// on the theta-isotypic space)
inline Mat<Cyclo> dual_hecke_matrix(const SymbolSpace& S, long l) {
  Mat<Cyclo> m = hecke_matrix(S, l);
  if (gcd_long(l, S.N) != 1) return m;
  Cyclo tw = inverse(S.theta_of(l));
  for (auto& row : m)
    for (auto& x : row) x = x * tw;
  return m;
}

// modular symbol {oo -> a/c} in the quotient basis, via continued-fraction
// convergents: {oo -> a/c} = sum_k gamma_k {0 -> oo} with gamma_k built from
// consecutive convergents, i.e. Manin symbols ((-1)^{k-1} q_k : q_{k-1}).
inline Vec<Cyclo> path_symbol(const SymbolSpace& S, long a, long c) {
  Vec<Cyclo> out(static_cast<size_t>(S.D), Cyclo(0));
  if (c < 0) {
    a = -a;
    c = -c;
  }
  if (c == 0) return out;  // {oo -> oo} = 0
  std::vector<long> quots;
  long num = a, den = c;
  while (den != 0) {
    long q = (num >= 0) ? num / den : -((-num + den - 1) / den);
    quots.push_back(q);
    long r = num - q * den;
    num = den;
    den = r;
  }
  long pprev = 1, qprev = 0;
  long pcur = quots[0], qcur = 1;
  for (size_t k = 0;; ++k) {
    long sgn = (k % 2 == 0) ? -1 : 1;  // (-1)^{k-1}
    Vec<Cyclo> v = S.symbol_vec(mod_long(sgn * qcur, S.N), mod_long(qprev, S.N));
    for (long i = 0; i < S.D; ++i)
      out[static_cast<size_t>(i)] = out[static_cast<size_t>(i)] + v[static_cast<size_t>(i)];
    if (k + 1 == quots.size()) break;
    long pn = quots[k + 1] * pcur + pprev;
    long qn = quots[k + 1] * qcur + qprev;
    pprev = pcur;
    qprev = qcur;
    pcur = pn;
    qcur = qn;
  }
  return out;
}

}  // namespace eiscong
