#pragma once

// Dense polynomial arithmetic in the three flavours the library needs:
//   * generic coefficients from any exact field (used with Rat, cyclotomic
//     and number-field elements; coefficient type must provide +,-,*,
//     construction from long, is_zero() and inverse() where division is
//     requested),
//   * integer polynomials (content, primitive part),
//   * polynomials with Int coefficients modulo an explicit Int modulus
//     (the workhorse for Hensel lifting and finite-field factorization).
// Coefficient vectors are stored constant term first with no trailing zeros.

#include "eiscong/rational.hpp"

#include <algorithm>
#include <cassert>
#include <tuple>

namespace eiscong {

inline bool is_zero(const Int& x) { return sgn(x) == 0; }
inline Rat inverse(const Rat& x) {
  if (is_zero(x)) throw NotAUnit("inverse of zero rational");
  return Rat(1) / x;
}

template <class F>
using PolyV = std::vector<F>;

template <class F>
void poly_trim(PolyV<F>& a) {
  while (!a.empty() && is_zero(a.back())) a.pop_back();
}

template <class F>
long poly_deg(const PolyV<F>& a) {
  return static_cast<long>(a.size()) - 1;  // -1 for the zero polynomial
}

template <class F>
bool poly_is_zero(const PolyV<F>& a) {
  return a.empty();
}

template <class F>
PolyV<F> poly_add(const PolyV<F>& a, const PolyV<F>& b) {
  PolyV<F> r = a.size() >= b.size() ? a : b;
  const PolyV<F>& s = a.size() >= b.size() ? b : a;
  for (size_t i = 0; i < s.size(); ++i) r[i] = r[i] + s[i];
  poly_trim(r);
  return r;
}

template <class F>
PolyV<F> poly_neg(PolyV<F> a) {
  for (auto& c : a) c = -c;
  return a;
}

template <class F>
PolyV<F> poly_sub(const PolyV<F>& a, const PolyV<F>& b) {
  return poly_add(a, poly_neg(b));
}

template <class F>
PolyV<F> poly_mul(const PolyV<F>& a, const PolyV<F>& b) {
  if (a.empty() || b.empty()) return {};
  PolyV<F> r(a.size() + b.size() - 1, F(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  poly_trim(r);
  return r;
}

template <class F>
PolyV<F> poly_scale(PolyV<F> a, const F& s) {
  for (auto& c : a) c = c * s;
  poly_trim(a);
  return a;
}

template <class F>
F poly_eval(const PolyV<F>& a, const F& x) {
  if (a.empty()) return F(0);
  F r = a.back();
  for (size_t i = a.size() - 1; i-- > 0;) r = r * x + a[i];
  return r;
}

template <class F>
PolyV<F> poly_derivative(const PolyV<F>& a) {
  if (a.size() <= 1) return {};
  PolyV<F> r(a.size() - 1, F(0));
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * F(static_cast<long>(i));
  poly_trim(r);
  return r;
}

// Division with remainder; the divisor's leading coefficient must be a unit.
template <class F>
std::pair<PolyV<F>, PolyV<F>> poly_divmod(PolyV<F> a, const PolyV<F>& b) {
  if (b.empty()) throw Error("poly_divmod: division by zero polynomial");
  long db = poly_deg(b);
  if (poly_deg(a) < db) return {{}, a};
  F linv = inverse(b.back());
  PolyV<F> q(a.size() - b.size() + 1, F(0));
  for (long i = poly_deg(a); i >= db; --i) {
    if (is_zero(a[i])) continue;
    F c = a[i] * linv;
    q[i - db] = c;
    for (long j = 0; j <= db; ++j) a[i - db + j] = a[i - db + j] - c * b[j];
  }
  poly_trim(a);
  poly_trim(q);
  return {q, a};
}

template <class F>
PolyV<F> poly_mod(const PolyV<F>& a, const PolyV<F>& b) {
  return poly_divmod(a, b).second;
}

template <class F>
PolyV<F> poly_monic(PolyV<F> a) {
  if (a.empty()) return a;
  F linv = inverse(a.back());
  for (auto& c : a) c = c * linv;
  return a;
}

template <class F>
PolyV<F> poly_gcd(PolyV<F> a, PolyV<F> b) {
  while (!b.empty()) {
    PolyV<F> r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_is_zero(a) ? a : poly_monic(a);
}

// Extended gcd over a field: returns (g, u, v) with u*a + v*b = g, g monic.
template <class F>
std::tuple<PolyV<F>, PolyV<F>, PolyV<F>> poly_xgcd(PolyV<F> a, PolyV<F> b) {
  PolyV<F> u0{F(1)}, v0{}, u1{}, v1{F(1)};
  while (!b.empty()) {
    auto [q, r] = poly_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
    PolyV<F> u2 = poly_sub(u0, poly_mul(q, u1));
    PolyV<F> v2 = poly_sub(v0, poly_mul(q, v1));
    u0 = std::move(u1);
    v0 = std::move(v1);
    u1 = std::move(u2);
    v1 = std::move(v2);
  }
  if (!a.empty()) {
    F linv = inverse(a.back());
    a = poly_scale(a, linv);
    u0 = poly_scale(u0, linv);
    v0 = poly_scale(v0, linv);
  }
  return {a, u0, v0};
}

template <class F>
PolyV<F> poly_powmod(PolyV<F> base, Int e, const PolyV<F>& modulus) {
  PolyV<F> r{F(1)};
  base = poly_mod(base, modulus);
  while (sgn(e) > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(poly_mul(r, base), modulus);
    base = poly_mod(poly_mul(base, base), modulus);
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Integer polynomials.

using IPoly = PolyV<Int>;
using QPoly = PolyV<Rat>;

inline Int ipoly_content(const IPoly& a) {
  Int g(0);
  for (const auto& c : a) g = int_gcd(g, c);
  return g;
}

inline IPoly ipoly_primitive(IPoly a) {
  Int g = ipoly_content(a);
  if (sgn(g) == 0) return a;
  if (sgn(a.back()) < 0) g = -g;
  for (auto& c : a) c /= g;
  return a;
}

inline QPoly ipoly_to_q(const IPoly& a) {
  QPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
  return r;
}

// Clears denominators: returns (primitive integer polynomial g, scalar s)
// with a = s * g.
inline std::pair<IPoly, Rat> qpoly_to_i(const QPoly& a) {
  if (a.empty()) return {{}, Rat(0)};
  Int den(1);
  for (const auto& c : a) den = int_lcm(den, Int(c.get_den()));
  IPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    Rat t = a[i] * Rat(den);
    assert(t.get_den() == 1);
    r[i] = t.get_num();
  }
  Int cont = ipoly_content(r);
  if (sgn(r.back()) < 0) cont = -cont;
  for (auto& c : r) c /= cont;
  return {r, make_rat(cont, den)};
}

inline Int ipoly_max_abs(const IPoly& a) {
  Int m(0);
  for (const auto& c : a) {
    Int v = abs(c);
    if (v > m) m = v;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Polynomials with Int coefficients modulo an explicit modulus m (m need not
// be prime; division-style operations require invertible leading terms).

using MPoly = std::vector<Int>;

inline MPoly mp_reduce(MPoly a, const Int& m) {
  for (auto& c : a) c = int_mod(c, m);
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
  return a;
}

inline MPoly mp_add(const MPoly& a, const MPoly& b, const Int& m) {
  MPoly r = a.size() >= b.size() ? a : b;
  const MPoly& s = a.size() >= b.size() ? b : a;
  for (size_t i = 0; i < s.size(); ++i) r[i] += s[i];
  return mp_reduce(std::move(r), m);
}

inline MPoly mp_sub(const MPoly& a, const MPoly& b, const Int& m) {
  MPoly r = a;
  r.resize(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return mp_reduce(std::move(r), m);
}

inline MPoly mp_mul(const MPoly& a, const MPoly& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  MPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return mp_reduce(std::move(r), m);
}

inline MPoly mp_scale(MPoly a, const Int& s, const Int& m) {
  for (auto& c : a) c *= s;
  return mp_reduce(std::move(a), m);
}

inline std::pair<MPoly, MPoly> mp_divmod(MPoly a, const MPoly& b, const Int& m) {
  if (b.empty()) throw Error("mp_divmod: zero divisor");
  a = mp_reduce(std::move(a), m);
  long db = poly_deg(b);
  if (poly_deg(a) < db) return {{}, a};
  Int linv = int_invmod(b.back(), m);
  MPoly q(a.size() - b.size() + 1, Int(0));
  for (long i = poly_deg(a); i >= db; --i) {
    if (sgn(a[i]) == 0) continue;
    Int c = int_mod(a[i] * linv, m);
    q[i - db] = c;
    for (long j = 0; j <= db; ++j) a[i - db + j] = int_mod(a[i - db + j] - c * b[j], m);
  }
  while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
  while (!q.empty() && sgn(q.back()) == 0) q.pop_back();
  return {q, a};
}

inline MPoly mp_mod(const MPoly& a, const MPoly& b, const Int& m) {
  return mp_divmod(a, b, m).second;
}

inline MPoly mp_monic(MPoly a, const Int& m) {
  if (a.empty()) return a;
  Int linv = int_invmod(a.back(), m);
  return mp_scale(std::move(a), linv, m);
}

inline MPoly mp_derivative(const MPoly& a, const Int& m) {
  if (a.size() <= 1) return {};
  MPoly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<long>(i);
  return mp_reduce(std::move(r), m);
}

// gcd modulo a prime p
inline MPoly mp_gcd(MPoly a, MPoly b, const Int& p) {
  a = mp_reduce(std::move(a), p);
  b = mp_reduce(std::move(b), p);
  while (!b.empty()) {
    MPoly r = mp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : mp_monic(std::move(a), p);
}

inline std::tuple<MPoly, MPoly, MPoly> mp_xgcd(MPoly a, MPoly b, const Int& p) {
  MPoly u0{Int(1)}, v0{}, u1{}, v1{Int(1)};
  a = mp_reduce(std::move(a), p);
  b = mp_reduce(std::move(b), p);
  while (!b.empty()) {
    auto [q, r] = mp_divmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
    MPoly u2 = mp_sub(u0, mp_mul(q, u1, p), p);
    MPoly v2 = mp_sub(v0, mp_mul(q, v1, p), p);
    u0 = std::move(u1);
    v0 = std::move(v1);
    u1 = std::move(u2);
    v1 = std::move(v2);
  }
  if (!a.empty()) {
    Int linv = int_invmod(a.back(), p);
    a = mp_scale(std::move(a), linv, p);
    u0 = mp_scale(std::move(u0), linv, p);
    v0 = mp_scale(std::move(v0), linv, p);
  }
  return {a, u0, v0};
}

inline MPoly mp_powmod(MPoly base, Int e, const MPoly& modulus, const Int& m) {
  MPoly r{Int(1)};
  base = mp_mod(mp_reduce(std::move(base), m), modulus, m);
  while (sgn(e) > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mp_mod(mp_mul(r, base, m), modulus, m);
    base = mp_mod(mp_mul(base, base, m), modulus, m);
    e >>= 1;
  }
  return r;
}

inline Int mp_eval(const MPoly& a, const Int& x, const Int& m) {
  Int r(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = int_mod(r * x + *it, m);
  return r;
}

}  // namespace eiscong
