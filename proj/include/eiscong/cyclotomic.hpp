#pragma once

// Cyclotomic field arithmetic in the power basis 1, z, ..., z^{phi(m)-1}
// modulo the m-th cyclotomic polynomial.  The coefficient type is a template
// parameter: Rat gives the plain cyclotomic field Q(mu_m); a number-field
// coefficient type gives the compositum used for twisted L-values.
//
// Elements of different levels combine by embedding into the lcm level
// (z_m = z_{m'}^{m'/m}); level 1 elements act as plain scalars, which is how
// context-free constants (0, 1, small integers) are represented.

#include "eiscong/poly.hpp"

#include <map>
#include <sstream>

namespace eiscong {

inline const IPoly& cyclotomic_polynomial(long m) {
  static std::map<long, IPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // x^m - 1 divided by all lower-index cyclotomic polynomials
  QPoly num(static_cast<size_t>(m) + 1, Rat(0));
  num[0] = Rat(-1);
  num[static_cast<size_t>(m)] = Rat(1);
  for (long d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto [q, r] = poly_divmod(num, ipoly_to_q(cyclotomic_polynomial(d)));
    assert(poly_is_zero(r));
    num = q;
  }
  IPoly res(num.size());
  for (size_t i = 0; i < num.size(); ++i) {
    assert(num[i].get_den() == 1);
    res[i] = num[i].get_num();
  }
  return cache.emplace(m, std::move(res)).first->second;
}

template <class F>
struct CycloExt {
  long level = 1;
  std::vector<F> c{F(0)};  // size phi(level)

  CycloExt() = default;
  CycloExt(long v) : level(1), c{F(v)} {}                   // NOLINT implicit
  explicit CycloExt(const F& v) : level(1), c{v} {}
  CycloExt(long m, std::vector<F> coeffs) : level(m), c(std::move(coeffs)) {
    assert(static_cast<long>(c.size()) == euler_phi_long(level));
  }

  bool is_zero_elem() const {
    for (const auto& x : c)
      if (!is_zero(x)) return false;
    return true;
  }
  bool is_scalar() const {
    for (size_t i = 1; i < c.size(); ++i)
      if (!is_zero(c[i])) return false;
    return true;
  }
  const F& scalar() const {
    if (!is_scalar()) throw Error("CycloExt: not a scalar");
    return c[0];
  }
};

using Cyclo = CycloExt<Rat>;

template <class F>
bool is_zero(const CycloExt<F>& x) {
  return x.is_zero_elem();
}

namespace detail {

template <class F>
PolyV<F> cyclo_modulus(long m) {
  const IPoly& phi = cyclotomic_polynomial(m);
  PolyV<F> r(phi.size(), F(0));
  for (size_t i = 0; i < phi.size(); ++i) r[i] = F(to_long(phi[i]));
  return r;
}

// canonical representative of a raw polynomial in z_m
template <class F>
CycloExt<F> cyclo_from_poly(long m, PolyV<F> raw) {
  if (m == 1) {
    F v = raw.empty() ? F(0) : poly_eval(raw, F(1));
    return CycloExt<F>(v);
  }
  raw = poly_mod(std::move(raw), cyclo_modulus<F>(m));
  std::vector<F> c(static_cast<size_t>(euler_phi_long(m)), F(0));
  for (size_t i = 0; i < raw.size(); ++i) c[i] = raw[i];
  return CycloExt<F>(m, std::move(c));
}

}  // namespace detail

template <class F>
CycloExt<F> cyclo_embed(const CycloExt<F>& x, long m2) {
  if (x.level == m2) return x;
  assert(m2 % x.level == 0);
  long k = m2 / x.level;
  PolyV<F> raw(static_cast<size_t>(euler_phi_long(x.level) - 1) * k + 1, F(0));
  for (size_t i = 0; i < x.c.size(); ++i) raw[i * k] = x.c[i];
  return detail::cyclo_from_poly(m2, std::move(raw));
}

// zeta_m^k as an element of level m
template <class F = Rat>
CycloExt<F> cyclo_zeta(long m, long k = 1) {
  k = mod_long(k, m);
  PolyV<F> raw(static_cast<size_t>(k) + 1, F(0));
  raw[static_cast<size_t>(k)] = F(1);
  return detail::cyclo_from_poly(m, std::move(raw));
}

template <class F>
std::pair<CycloExt<F>, CycloExt<F>> cyclo_align(const CycloExt<F>& a, const CycloExt<F>& b) {
  long m = lcm_long(a.level, b.level);
  return {cyclo_embed(a, m), cyclo_embed(b, m)};
}

template <class F>
CycloExt<F> operator+(const CycloExt<F>& a, const CycloExt<F>& b) {
  auto [x, y] = cyclo_align(a, b);
  for (size_t i = 0; i < x.c.size(); ++i) x.c[i] = x.c[i] + y.c[i];
  return x;
}

template <class F>
CycloExt<F> operator-(const CycloExt<F>& a) {
  CycloExt<F> r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

template <class F>
CycloExt<F> operator-(const CycloExt<F>& a, const CycloExt<F>& b) {
  return a + (-b);
}

template <class F>
CycloExt<F> operator*(const CycloExt<F>& a, const CycloExt<F>& b) {
  auto [x, y] = cyclo_align(a, b);
  if (x.level == 1) return CycloExt<F>(x.c[0] * y.c[0]);
  PolyV<F> pa(x.c.begin(), x.c.end()), pb(y.c.begin(), y.c.end());
  poly_trim(pa);
  poly_trim(pb);
  return detail::cyclo_from_poly(x.level, poly_mul(pa, pb));
}

template <class F>
bool operator==(const CycloExt<F>& a, const CycloExt<F>& b) {
  auto [x, y] = cyclo_align(a, b);
  for (size_t i = 0; i < x.c.size(); ++i)
    if (!is_zero(x.c[i] - y.c[i])) return false;
  return true;
}

template <class F>
bool operator!=(const CycloExt<F>& a, const CycloExt<F>& b) {
  return !(a == b);
}

// Galois automorphism z -> z^b, gcd(b, level) = 1.
template <class F>
CycloExt<F> cyclo_galois(const CycloExt<F>& x, long b) {
  b = mod_long(b, x.level);
  if (x.level == 1 || b == 1) return x;
  assert(gcd_long(b, x.level) == 1);
  PolyV<F> raw(static_cast<size_t>(x.level), F(0));
  for (size_t i = 0; i < x.c.size(); ++i) {
    long e = mod_long(static_cast<long>(i) * b, x.level);
    raw[static_cast<size_t>(e)] = raw[static_cast<size_t>(e)] + x.c[i];
  }
  return detail::cyclo_from_poly(x.level, std::move(raw));
}

// complex conjugation z -> z^{-1}
template <class F>
CycloExt<F> cyclo_conj(const CycloExt<F>& x) {
  return cyclo_galois(x, x.level - 1);
}

template <class F>
CycloExt<F> inverse(const CycloExt<F>& x) {
  if (is_zero(x)) throw NotAUnit("inverse of zero cyclotomic element");
  if (x.level == 1) return CycloExt<F>(inverse(x.c[0]));
  PolyV<F> p(x.c.begin(), x.c.end());
  poly_trim(p);
  auto [g, u, v] = poly_xgcd(p, detail::cyclo_modulus<F>(x.level));
  if (poly_deg(g) != 0) throw NotAUnit("cyclotomic element not invertible");
  return detail::cyclo_from_poly(x.level, poly_scale(u, inverse(g[0])));
}

template <class F>
CycloExt<F> operator/(const CycloExt<F>& a, const CycloExt<F>& b) {
  return a * inverse(b);
}

template <class F>
CycloExt<F> cyclo_pow(const CycloExt<F>& x, long e) {
  if (e < 0) return cyclo_pow(inverse(x), -e);
  CycloExt<F> r(1), b = x;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

// Norm to the coefficient field: product over the Galois orbit.
template <class F>
F cyclo_norm(const CycloExt<F>& x) {
  if (x.level == 1) return x.c[0];
  CycloExt<F> prod(1);
  for (long b = 1; b < x.level; ++b) {
    if (gcd_long(b, x.level) != 1) continue;
    prod = prod * cyclo_galois(x, b);
  }
  return prod.scalar();
}

inline std::string cyclo_str(const Cyclo& x) {
  std::ostringstream os;
  os << "m" << x.level << ":[";
  for (size_t i = 0; i < x.c.size(); ++i) {
    if (i) os << ",";
    os << x.c[i].get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace eiscong
