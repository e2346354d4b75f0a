#pragma once

// Exact rational layer.  mpq_class already guarantees the two invariants we
// rely on (lowest terms, positive denominator), so this header only adds the
// number-theoretic helpers the rest of the library needs: p-adic valuations,
// reduction of p-integral rationals into Z/p^M, Bernoulli data and
// integer-valued binomials.

#include "eiscong/base.hpp"

#include <cassert>
#include <map>
#include <vector>

namespace eiscong {

inline bool is_zero(const Rat& x) { return sgn(x) == 0; }

// mpq_class(num, den) does not canonicalize; always build fractions here.
inline Rat make_rat(const Int& num, const Int& den) {
  if (sgn(den) == 0) throw Error("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// v_p(z); v_p(0) is +infinity, reported as LONG_MAX/2 to keep arithmetic safe.
constexpr long kValInfinity = std::numeric_limits<long>::max() / 2;

inline long valuation(const Int& z, const Int& p) {
  if (sgn(z) == 0) return kValInfinity;
  Int a = z, q, r;
  long v = 0;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    if (sgn(r) != 0) return v;
    a = q;
    ++v;
  }
}

inline long valuation(const Rat& x, const Int& p) {
  if (is_zero(x)) return kValInfinity;
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

// Representative of a p-integral rational in [0, pM) where pM = p^M.
inline Int rat_mod(const Rat& x, const Int& pM) {
  Int num = x.get_num(), den = x.get_den(), inv, r;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pM.get_mpz_t()) == 0)
    throw NotAUnit("rat_mod: denominator not invertible modulo p^M");
  r = num * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pM.get_mpz_t());
  return r;
}

inline Int int_mod(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int int_invmod(const Int& x, const Int& m) {
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
    throw NotAUnit("int_invmod: not invertible");
  return inv;
}

inline Int int_powmod(const Int& b, const Int& e, const Int& m) {
  Int r;
  if (sgn(e) < 0) {
    Int ib = int_invmod(b, m), pe = -e;
    mpz_powm(r.get_mpz_t(), ib.get_mpz_t(), pe.get_mpz_t(), m.get_mpz_t());
  } else {
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  }
  return r;
}

inline Rat rat_pow(const Rat& x, long e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? x : Rat(1) / x;
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  Rat r(1);
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Bernoulli numbers B_0, B_1 = -1/2, B_2 = 1/6, ...  (standard convention;
// the +1/2 convention for characters enters via bernoulli_general, not here).
inline const Rat& bernoulli_number(unsigned n) {
  static std::vector<Rat> cache{Rat(1)};
  while (cache.size() <= n) {
    unsigned m = static_cast<unsigned>(cache.size());
    // B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k
    Rat s(0);
    for (unsigned k = 0; k < m; ++k) {
      Int c;
      mpz_bin_uiui(c.get_mpz_t(), m + 1, k);
      s += Rat(c) * cache[k];
    }
    cache.push_back(-s / Rat(m + 1));
  }
  return cache[n];
}

// Coefficients of the Bernoulli polynomial B_n(x) = sum_k C(n,k) B_{n-k} x^k,
// returned constant term first.
inline std::vector<Rat> bernoulli_polynomial(unsigned n) {
  std::vector<Rat> c(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    c[k] = Rat(b) * bernoulli_number(n - k);
  }
  return c;
}

inline Rat eval_poly(const std::vector<Rat>& coeffs, const Rat& x) {
  Rat r(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
  return r;
}

// C(z, k) for arbitrary integer z >= or < 0; integer valued.
inline Int binomial(const Int& z, unsigned long k) {
  if (k == 0) return Int(1);
  if (sgn(z) >= 0) {
    if (z < static_cast<long>(k)) {
      if (z.fits_ulong_p() && z.get_ui() < k) return Int(0);
    }
    Int r;
    mpz_bin_ui(r.get_mpz_t(), z.get_mpz_t(), k);
    return r;
  }
  // C(-m, k) = (-1)^k C(m+k-1, k)
  Int m = -z, r;
  Int top = m + static_cast<long>(k) - 1;
  mpz_bin_ui(r.get_mpz_t(), top.get_mpz_t(), k);
  if (k & 1) r = -r;
  return r;
}

}  // namespace eiscong
