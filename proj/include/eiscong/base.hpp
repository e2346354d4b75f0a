#pragma once

// Shared scalar aliases, error types and small deterministic utilities used
// across the library.  Everything is exact: big integers and rationals come
// from GMP, and all randomness is seeded explicitly.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eiscong {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define EISCONG_ERROR_TYPE(Name)                               \
  struct Name : Error {                                        \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

EISCONG_ERROR_TYPE(NotSquarefreeModP);
EISCONG_ERROR_TYPE(NotAUnit);
EISCONG_ERROR_TYPE(NotOneUnit);
EISCONG_ERROR_TYPE(PrecisionExhausted);
EISCONG_ERROR_TYPE(NotPrimitive);
EISCONG_ERROR_TYPE(TrivialOrOddCharacter);
EISCONG_ERROR_TYPE(TrivialCharacter);
EISCONG_ERROR_TYPE(ParityMismatch);
EISCONG_ERROR_TYPE(DegenerateTriple);
EISCONG_ERROR_TYPE(BothZero);
EISCONG_ERROR_TYPE(NonInvertibleLeadingTerm);
EISCONG_ERROR_TYPE(OddCharacter);
EISCONG_ERROR_TYPE(InsufficientSeparation);
EISCONG_ERROR_TYPE(SignMismatch);
EISCONG_ERROR_TYPE(NotOrdinary);
EISCONG_ERROR_TYPE(H1Violation);
EISCONG_ERROR_TYPE(ConflictingData);
EISCONG_ERROR_TYPE(TableMissing);
EISCONG_ERROR_TYPE(ConfigError);
EISCONG_ERROR_TYPE(CacheCorrupt);

#undef EISCONG_ERROR_TYPE

inline long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw Error("integer does not fit in long: " + z.get_str());
  return z.get_si();
}

inline Int int_pow(Int base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline long gcd_long(long a, long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { long t = a % b; a = b; b = t; }
  return a;
}

inline long lcm_long(long a, long b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_long(a, b) * b;
}

// a mod n in [0, n)
inline long mod_long(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

inline long mulmod_long(long a, long b, long n) {
  return static_cast<long>((static_cast<unsigned __int128>(mod_long(a, n)) *
                            static_cast<unsigned __int128>(mod_long(b, n))) % n);
}

inline long powmod_long(long a, long e, long n) {
  long r = 1 % n;
  a = mod_long(a, n);
  while (e > 0) {
    if (e & 1) r = mulmod_long(r, a, n);
    a = mulmod_long(a, a, n);
    e >>= 1;
  }
  return r;
}

inline long invmod_long(long a, long n) {
  // __int128 temporaries: q*nt can exceed 64 bits for moduli near 2^62
  __int128 t = 0, nt = 1, r = n, nr = mod_long(a, n);
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw NotAUnit("invmod_long: not invertible");
  long res = static_cast<long>(t % n);
  return mod_long(res, n);
}

inline long euler_phi_long(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline std::vector<std::pair<long, int>> factor_long(long n) {
  std::vector<std::pair<long, int>> f;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      f.emplace_back(p, e);
    }
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

// multiplicative order of a modulo n, gcd(a,n)=1
inline long mult_order_long(long a, long n) {
  if (n == 1) return 1;
  long r = mod_long(a, n), x = r, ord = 1;
  while (x != 1) {
    x = mulmod_long(x, r, n);
    ++ord;
    if (ord > n) throw Error("mult_order_long: not a unit");
  }
  return ord;
}

// SplitMix64: the fixed deterministic generator behind all randomized
// choices (equal-degree splitting, property-test sampling).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

// FNV-1a 64-bit; stable content digest for the on-disk cache.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace eiscong
