#pragma once

// Polynomial factorization: squarefree factorization over F_p
// (distinct-degree + Cantor-Zassenhaus), Hensel lifting of a mod-p
// factorization to mod p^t, and factorization of monic squarefree integer
// polynomials (Zassenhaus: factor mod p, lift past the Landau-Mignotte
// bound, recombine).  All randomized splitting draws from an explicitly
// seeded generator and all factor lists are returned in a canonical order
// (degree, then coefficient tuple), so results are reproducible.

#include "eiscong/poly.hpp"

#include <algorithm>
#include <map>

namespace eiscong {

// symmetric representative in (-m/2, m/2]
inline Int int_mod_sym(const Int& x, const Int& m) {
  Int r = int_mod(x, m);
  if (2 * r > m) r -= m;
  return r;
}

inline bool mp_less(const MPoly& a, const MPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

// Equal-degree splitting of a monic squarefree product of degree-d
// irreducibles over F_p, p odd.
inline void mp_equal_degree_split(const MPoly& f, long d, const Int& p, Rng& rng,
                                  std::vector<MPoly>& out) {
  long n = poly_deg(f);
  if (n == d) {
    out.push_back(f);
    return;
  }
  Int exponent = (int_pow(p, static_cast<unsigned long>(d)) - 1) / 2;
  for (;;) {
    MPoly a(static_cast<size_t>(n), Int(0));
    for (auto& c : a) c = Int(static_cast<unsigned long>(rng.below(mpz_get_ui(p.get_mpz_t()))));
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
    if (poly_deg(a) < 1) continue;
    MPoly b = mp_powmod(a, exponent, f, p);
    if (b.empty()) continue;
    b[0] = int_mod(b[0] - 1, p);
    while (!b.empty() && sgn(b.back()) == 0) b.pop_back();
    MPoly g = mp_gcd(b, f, p);
    long dg = poly_deg(g);
    if (dg <= 0 || dg == n) continue;
    mp_equal_degree_split(g, d, p, rng, out);
    mp_equal_degree_split(mp_divmod(f, g, p).first, d, p, rng, out);
    return;
  }
}

// Monic irreducible factors of a squarefree monic f over F_p (p odd prime).
inline std::vector<MPoly> mp_factor_squarefree(MPoly f, const Int& p, Rng& rng) {
  f = mp_monic(mp_reduce(std::move(f), p), p);
  std::vector<MPoly> factors;
  MPoly x{Int(0), Int(1)};
  MPoly h = x;  // x^{p^d} mod f as d advances
  long d = 0;
  while (poly_deg(f) > 0) {
    ++d;
    if (2 * d > poly_deg(f)) {
      factors.push_back(f);
      break;
    }
    h = mp_powmod(h, p, f, p);
    MPoly g = mp_gcd(mp_sub(h, x, p), f, p);
    if (poly_deg(g) > 0) {
      mp_equal_degree_split(g, d, p, rng, factors);
      f = mp_divmod(f, g, p).first;
      h = mp_mod(h, f, p);
    }
  }
  std::sort(factors.begin(), factors.end(), mp_less);
  return factors;
}

// One linear Hensel step: given monic f with f = g*h (mod p^k), g monic,
// and g,h coprime mod p, returns (g', h') with f = g'*h' (mod p^{k+1}),
// g' = g, h' = h (mod p^k).
inline std::pair<MPoly, MPoly> hensel_step(const MPoly& f, const MPoly& g, const MPoly& h,
                                           const Int& p, const Int& pk) {
  Int pk1 = pk * p;
  MPoly e = mp_sub(mp_reduce(f, pk1), mp_mul(g, h, pk1), pk1);
  for (auto& c : e) {
    assert(c % pk == 0);
    c /= pk;
  }
  e = mp_reduce(std::move(e), p);
  auto [one, u, v] = mp_xgcd(g, h, p);
  if (poly_deg(one) != 0) throw Error("hensel_step: factors not coprime mod p");
  // s*h + r*g = e (mod p) with deg s < deg g
  auto [q, s] = mp_divmod(mp_mul(v, e, p), g, p);
  MPoly r = mp_add(mp_mul(u, e, p), mp_mul(q, h, p), p);
  MPoly g1 = mp_add(g, mp_scale(s, pk, pk1), pk1);
  MPoly h1 = mp_add(h, mp_scale(r, pk, pk1), pk1);
  return {g1, h1};
}

// Lift a pairwise-coprime monic factorization of monic f from mod p to
// mod p^t (t >= 1).
inline std::vector<MPoly> hensel_lift_factors(const MPoly& f_in, std::vector<MPoly> factors,
                                              const Int& p, long t) {
  Int pt = int_pow(p, static_cast<unsigned long>(t));
  MPoly f = mp_reduce(f_in, pt);
  if (factors.size() == 1) return {mp_monic(f, pt)};
  // peel one factor at a time
  std::vector<MPoly> lifted;
  MPoly rest_target = f;
  for (size_t i = 0; i + 1 < factors.size(); ++i) {
    MPoly g = factors[i];
    MPoly h{Int(1)};
    for (size_t j = i + 1; j < factors.size(); ++j) h = mp_mul(h, factors[j], p);
    Int pk = p;
    while (pk < pt) {
      std::tie(g, h) = hensel_step(rest_target, g, h, p, pk);
      pk *= p;
    }
    lifted.push_back(mp_reduce(g, pt));
    rest_target = mp_divmod(rest_target, g, pt).first;
  }
  lifted.push_back(mp_monic(rest_target, pt));
  return lifted;
}

// Monic irreducible factors of monic f modulo p^t, each the Hensel lift of
// an irreducible factor of f mod p; requires f squarefree mod p.
inline std::vector<MPoly> hensel_irreducible_factors(const IPoly& f, const Int& p, long t,
                                                     std::uint64_t seed = 1) {
  if (f.empty() || f.back() != 1) throw Error("hensel_irreducible_factors: f must be monic");
  MPoly fp = mp_reduce(f, p);
  if (poly_deg(fp) != poly_deg(f)) throw Error("hensel_irreducible_factors: degree drop mod p");
  MPoly d = mp_derivative(fp, p);
  if (poly_deg(mp_gcd(fp, d, p)) != 0) throw NotSquarefreeModP();
  Rng rng(seed ^ fnv1a64("hensel" + p.get_str()));
  std::vector<MPoly> factors = mp_factor_squarefree(fp, p, rng);
  if (t == 1) return factors;
  auto lifted = hensel_lift_factors(mp_reduce(f, int_pow(p, t)), factors, p, t);
  std::sort(lifted.begin(), lifted.end(), mp_less);
  return lifted;
}

// ---------------------------------------------------------------------------
// Zassenhaus factorization of a monic squarefree integer polynomial.

inline IPoly ipoly_squarefree_part(const IPoly& f) {
  QPoly fq = ipoly_to_q(f);
  QPoly g = poly_gcd(fq, poly_derivative(fq));
  QPoly sf = poly_divmod(fq, g).first;
  return qpoly_to_i(sf).first;
}

// Irreducible monic factors over Z of a monic squarefree f.  Multiplicity-free
// input is the caller's responsibility (use ipoly_squarefree_part).
inline std::vector<IPoly> factor_monic_squarefree_Z(const IPoly& f, std::uint64_t seed = 1) {
  long n = poly_deg(f);
  if (n <= 0) return {};
  if (n == 1) return {f};
  if (f.empty() || f.back() != 1) throw Error("factor_monic_squarefree_Z: not monic");

  // pick an odd prime keeping f squarefree; among a few candidates prefer the
  // fewest modular factors
  Int best_p(0);
  std::vector<MPoly> best_factors;
  int tried = 0;
  for (Int p(3); tried < 4; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
    MPoly fp = mp_reduce(f, p);
    if (poly_deg(fp) != n) continue;
    if (poly_deg(mp_gcd(fp, mp_derivative(fp, p), p)) != 0) continue;
    Rng rng(seed ^ fnv1a64("zass" + p.get_str()));
    auto factors = mp_factor_squarefree(fp, p, rng);
    ++tried;
    if (best_factors.empty() || factors.size() < best_factors.size()) {
      best_p = p;
      best_factors = factors;
    }
    if (best_factors.size() == 1) break;
  }
  if (best_factors.size() == 1) return {f};

  // Landau-Mignotte: |coeff of any monic factor| <= 2^n * sqrt(n+1) * H(f)
  Int H = ipoly_max_abs(f);
  Int bound = (H + 1) * int_pow(Int(2), static_cast<unsigned long>(n + 1));
  {
    Int s = Int(n + 1), root;
    mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
    bound *= (root + 1);
  }
  long a = 1;
  Int pa = best_p;
  while (pa <= 2 * bound) {
    pa *= best_p;
    ++a;
  }
  std::vector<MPoly> lifted = hensel_lift_factors(mp_reduce(f, pa), best_factors, best_p, a);

  // recombination: try subsets by increasing cardinality
  std::vector<IPoly> result;
  IPoly rem = f;
  std::vector<MPoly> pool = lifted;
  auto try_subset = [&](const std::vector<size_t>& idx) -> bool {
    MPoly prod{Int(1)};
    for (size_t i : idx) prod = mp_mul(prod, pool[i], pa);
    IPoly cand(prod.size());
    for (size_t i = 0; i < prod.size(); ++i) cand[i] = int_mod_sym(prod[i], pa);
    if (ipoly_max_abs(cand) > bound) return false;
    QPoly q = ipoly_to_q(rem), c = ipoly_to_q(cand);
    auto [quot, r] = poly_divmod(q, c);
    if (!poly_is_zero(r)) return false;
    for (const auto& co : quot)
      if (co.get_den() != 1) return false;
    result.push_back(cand);
    IPoly newrem(quot.size());
    for (size_t i = 0; i < quot.size(); ++i) newrem[i] = quot[i].get_num();
    rem = newrem;
    std::vector<MPoly> np;
    for (size_t i = 0; i < pool.size(); ++i)
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) np.push_back(pool[i]);
    pool = np;
    return true;
  };

  size_t card = 1;
  while (!pool.empty() && card <= pool.size()) {
    if (2 * card > pool.size()) {
      if (poly_deg(rem) > 0) result.push_back(rem);
      rem = IPoly{Int(1)};
      pool.clear();
      break;
    }
    // enumerate cardinality-card subsets of the current pool
    std::vector<size_t> idx(card);
    for (size_t i = 0; i < card; ++i) idx[i] = i;
    bool advanced = false;
    for (;;) {
      if (try_subset(idx)) {
        advanced = true;
        break;  // pool changed; restart at same cardinality
      }
      long i = static_cast<long>(card) - 1;
      while (i >= 0 && idx[i] == pool.size() - card + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (size_t j = i + 1; j < card; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!advanced) ++card;
  }
  if (poly_deg(rem) > 0) throw Error("factor_monic_squarefree_Z: leftover factor");
  std::sort(result.begin(), result.end(), mp_less);
  return result;
}

// Factor an arbitrary monic integer polynomial: squarefree part, factor, and
// read off multiplicities by exact division.
inline std::vector<std::pair<IPoly, long>> factor_monic_Z(const IPoly& f, std::uint64_t seed = 1) {
  std::vector<std::pair<IPoly, long>> out;
  IPoly sf = ipoly_squarefree_part(f);
  auto irred = factor_monic_squarefree_Z(sf, seed);
  QPoly rem = ipoly_to_q(f);
  for (const auto& g : irred) {
    QPoly gq = ipoly_to_q(g);
    long mult = 0;
    for (;;) {
      auto [q, r] = poly_divmod(rem, gq);
      if (!poly_is_zero(r)) break;
      rem = q;
      ++mult;
    }
    out.emplace_back(g, mult);
  }
  if (poly_deg(rem) != 0) throw Error("factor_monic_Z: incomplete factorization");
  return out;
}

}  // namespace eiscong
