#pragma once

// Dirichlet characters as exponent vectors on a fixed generator list of
// (Z/NZ)^x, with values landing in the cyclotomic layer.  A character is
// identified by the stable token "chi_N.k" where k is its index in the
// deterministic mixed-radix enumeration; that token is the cache and report
// key everywhere downstream.

#include "eiscong/cyclotomic.hpp"

#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace eiscong {

struct UnitGroup {
  long N = 1;
  std::vector<long> gens;    // generators of (Z/N)^x as residues mod N
  std::vector<long> orders;  // cyclic orders; the group is the direct product
  std::vector<std::vector<long>> dlog;  // dlog[a] = exponent vector of a on gens
  std::vector<char> unit;               // unit[a] = 1 iff gcd(a, N) = 1

  long group_order() const {
    long o = 1;
    for (long n : orders) o *= n;
    return o;
  }
};

namespace detail {

inline long primitive_root_mod(long q, long l, int e) {
  // q = l^e, l odd prime
  long phi = q / l * (l - 1);
  auto fac = factor_long(phi);
  for (long g = 2; g < q; ++g) {
    if (gcd_long(g, q) != 1) continue;
    bool ok = true;
    for (auto& [pr, ex] : fac) {
      (void)ex;
      if (powmod_long(g, phi / pr, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error("primitive_root_mod: not found");
}

}  // namespace detail

inline const UnitGroup& unit_group(long N) {
  static std::map<long, UnitGroup> cache;
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;

  UnitGroup G;
  G.N = N;
  struct Local {
    long q;  // prime power
    std::vector<long> gens, orders;  // generators mod q
  };
  std::vector<Local> locals;
  for (auto& [l, e] : factor_long(N)) {
    Local L;
    L.q = 1;
    for (int i = 0; i < e; ++i) L.q *= l;
    if (l == 2) {
      if (e == 2) {
        L.gens = {3};  // -1 mod 4
        L.orders = {2};
      } else if (e >= 3) {
        L.gens = {L.q - 1, 5};
        L.orders = {2, L.q / 4};
      }
      // e == 1: trivial group, no generators
    } else {
      L.gens = {detail::primitive_root_mod(L.q, l, e)};
      L.orders = {L.q / l * (l - 1)};
    }
    locals.push_back(L);
  }
  // CRT the generators up to modulus N
  for (auto& L : locals) {
    long other = N / L.q;
    for (size_t i = 0; i < L.gens.size(); ++i) {
      long g;
      if (other == 1) {
        g = L.gens[i];
      } else {
        // g = gens[i] mod q, 1 mod other
        long inv_other = invmod_long(other, L.q);
        long inv_q = invmod_long(L.q, other);
        g = mod_long(L.gens[i] * other % N * inv_other % N + 1L * L.q % N * inv_q % N, N);
      }
      G.gens.push_back(g);
      G.orders.push_back(L.orders[i]);
    }
  }
  // discrete logs by enumerating the whole group as generator-power products
  G.dlog.assign(static_cast<size_t>(std::max(N, 1L)), {});
  G.unit.assign(static_cast<size_t>(std::max(N, 1L)), 0);
  std::vector<long> exps(G.gens.size(), 0);
  std::function<void(size_t, long)> rec = [&](size_t i, long cur) {
    if (i == G.gens.size()) {
      G.dlog[static_cast<size_t>(cur)] = exps;
      G.unit[static_cast<size_t>(cur)] = 1;
      return;
    }
    long v = 1;
    for (long k = 0; k < G.orders[i]; ++k) {
      exps[i] = k;
      rec(i + 1, mulmod_long(cur, v, N));
      v = mulmod_long(v, G.gens[i], N);
    }
  };
  if (N == 1) {
    G.unit[0] = 1;
  } else {
    rec(0, 1 % N);
  }
  return cache.emplace(N, std::move(G)).first->second;
}

struct DirichletCharacter {
  long modulus = 1;
  std::vector<long> exps;  // chi(g_i) = zeta_{orders[i]}^{exps[i]}

  const UnitGroup& group() const { return unit_group(modulus); }

  long order() const {
    const auto& G = group();
    long m = 1;
    for (size_t i = 0; i < exps.size(); ++i) {
      long n = G.orders[i];
      long o = n / gcd_long(n, exps[i]);
      m = lcm_long(m, o);
    }
    return m;
  }

  bool is_trivial() const {
    for (long e : exps)
      if (e != 0) return false;
    return true;
  }

  // exponent k in Z/order with chi(a) = zeta_order^k; nullopt when gcd(a,N)>1
  std::optional<long> exponent(long a) const {
    const auto& G = group();
    a = mod_long(a, std::max(modulus, 1L));
    if (modulus == 1) return 0;
    if (!G.unit[static_cast<size_t>(a)]) return std::nullopt;
    const auto& dl = G.dlog[static_cast<size_t>(a)];
    long m = order();
    long k = 0;
    for (size_t i = 0; i < exps.size(); ++i) {
      // chi(g_i) = zeta_{n_i}^{e_i} = zeta_m^{m e_i / n_i}
      long n = G.orders[i];
      long g = gcd_long(n, exps[i]);
      long contrib = mod_long((m / (n / g)) % m * ((exps[i] / g) % m), m);
      k = mod_long(k + contrib * dl[i], m);
    }
    return k;
  }

  Cyclo value(long a) const {
    auto k = exponent(a);
    if (!k) return Cyclo(0);
    return cyclo_zeta(order(), *k);
  }

  bool is_even() const {
    auto k = exponent(-1);
    long m = order();
    return mod_long(*k, m) == 0;
  }

  long conductor() const {
    const auto& G = group();
    long c = 1;
    size_t idx = 0;
    for (auto& [l, e] : factor_long(modulus)) {
      long q = 1;
      for (int i = 0; i < e; ++i) q *= l;
      if (l == 2) {
        if (e == 1) continue;
        long eps = exps[idx];            // component on <-1>
        long k5 = (e >= 3) ? exps[idx + 1] : 0;  // component on <5>
        long o5 = 1;
        if (e >= 3) {
          long n5 = G.orders[idx + 1];
          o5 = n5 / gcd_long(n5, k5);
        }
        long local = 1;
        if (o5 > 1) {
          long v = 0, t = o5;
          while (t % 2 == 0) { t /= 2; ++v; }
          local = 1;
          for (long i = 0; i < v + 2; ++i) local *= 2;
        } else if (eps % 2 != 0) {
          local = 4;
        }
        c *= local;
        idx += (e >= 3) ? 2 : 1;
      } else {
        long n = G.orders[idx];
        long o = n / gcd_long(n, exps[idx]);
        if (o > 1) {
          long v = 0, t = o;
          while (t % l == 0) { t /= l; ++v; }
          long local = l;
          for (long i = 0; i < v; ++i) local *= l;
          c *= local;
        }
        ++idx;
      }
    }
    return c;
  }

  bool is_primitive() const { return conductor() == modulus; }
};

inline bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
  return a.modulus == b.modulus && a.exps == b.exps;
}

// deterministic little-endian mixed-radix index
inline long character_index(const DirichletCharacter& chi) {
  const auto& G = chi.group();
  long k = 0, radix = 1;
  for (size_t i = 0; i < chi.exps.size(); ++i) {
    k += chi.exps[i] * radix;
    radix *= G.orders[i];
  }
  return k;
}

inline DirichletCharacter character_from_index(long N, long k) {
  const auto& G = unit_group(N);
  DirichletCharacter chi;
  chi.modulus = N;
  chi.exps.resize(G.orders.size());
  for (size_t i = 0; i < G.orders.size(); ++i) {
    chi.exps[i] = k % G.orders[i];
    k /= G.orders[i];
  }
  if (k != 0) throw ConfigError("character index out of range");
  return chi;
}

inline std::string character_token(const DirichletCharacter& chi) {
  return "chi_" + std::to_string(chi.modulus) + "." + std::to_string(character_index(chi));
}

inline DirichletCharacter character_from_token(const std::string& tok) {
  if (tok.rfind("chi_", 0) != 0) throw ConfigError("bad character token: " + tok);
  auto dot = tok.find('.', 4);
  if (dot == std::string::npos) throw ConfigError("bad character token: " + tok);
  long N = std::stol(tok.substr(4, dot - 4));
  long k = std::stol(tok.substr(dot + 1));
  if (N < 1) throw ConfigError("bad character modulus in token");
  return character_from_index(N, k);
}

enum class Parity { Even, Odd, All };

inline std::vector<DirichletCharacter> enumerate_characters(long N, Parity parity = Parity::All) {
  const auto& G = unit_group(N);
  std::vector<DirichletCharacter> out;
  long total = G.group_order();
  for (long k = 0; k < total; ++k) {
    DirichletCharacter chi = character_from_index(N, k);
    if (parity == Parity::Even && !chi.is_even()) continue;
    if (parity == Parity::Odd && chi.is_even()) continue;
    out.push_back(std::move(chi));
  }
  return out;
}

// character with given modulus agreeing with the exponent-in-Q/Z data of a
// value function; helper for products and restriction
namespace detail {
inline DirichletCharacter character_from_values(long N,
                                                const std::function<Rat(long)>& exp_qz) {
  // exp_qz(a) = exponent of chi(a) as element of Q/Z, gcd(a, N) = 1
  const auto& G = unit_group(N);
  DirichletCharacter chi;
  chi.modulus = N;
  chi.exps.resize(G.gens.size());
  for (size_t i = 0; i < G.gens.size(); ++i) {
    Rat r = exp_qz(G.gens[i]);
    // r = e / orders[i] mod 1
    Rat e = r * Rat(G.orders[i]);
    Int num = e.get_num(), den = e.get_den();
    if (den != 1) throw Error("character_from_values: value order does not divide group order");
    chi.exps[i] = mod_long(to_long(num), G.orders[i]);
  }
  return chi;
}
}  // namespace detail

// product of characters at modulus lcm(N1, N2)
inline DirichletCharacter char_mul(const DirichletCharacter& a, const DirichletCharacter& b) {
  long N = lcm_long(a.modulus, b.modulus);
  long ma = std::max<long>(a.order(), 1), mb = std::max<long>(b.order(), 1);
  return detail::character_from_values(N, [&](long g) {
    auto ka = a.exponent(g), kb = b.exponent(g);
    if (!ka || !kb) throw Error("char_mul: generator not coprime");
    Rat r = make_rat(Int(*ka), Int(ma)) + make_rat(Int(*kb), Int(mb));
    r -= Rat(mpz_class(r.get_num() / r.get_den()));  // mod 1 (towards zero ok: adjust)
    if (sgn(r) < 0) r += 1;
    return r;
  });
}

inline DirichletCharacter char_conj(const DirichletCharacter& a) {
  const auto& G = a.group();
  DirichletCharacter chi = a;
  for (size_t i = 0; i < chi.exps.size(); ++i)
    chi.exps[i] = mod_long(-chi.exps[i], G.orders[i]);
  return chi;
}

// the primitive character inducing chi
inline DirichletCharacter char_primitive(const DirichletCharacter& chi) {
  long c = chi.conductor();
  if (c == chi.modulus) return chi;
  long m = std::max<long>(chi.order(), 1);
  return detail::character_from_values(c, [&](long g) {
    // shift g by multiples of c until coprime to modulus
    long a = mod_long(g, c);
    while (gcd_long(a, chi.modulus) != 1) a += c;
    auto k = chi.exponent(a);
    return make_rat(Int(*k), Int(m));
  });
}

// chi viewed modulo a multiple N' of its modulus
inline DirichletCharacter char_extend(const DirichletCharacter& chi, long N2) {
  if (N2 == chi.modulus) return chi;
  if (N2 % chi.modulus != 0) throw Error("char_extend: modulus must be a multiple");
  long m = std::max<long>(chi.order(), 1);
  return detail::character_from_values(N2, [&](long g) {
    auto k = chi.exponent(g);
    if (!k) throw Error("char_extend: generator not coprime to old modulus");
    return make_rat(Int(*k), Int(m));
  });
}

// ---------------------------------------------------------------------------
// Gauss sums, generalized Bernoulli numbers, L-values, circular units.

inline Cyclo gauss_sum(const DirichletCharacter& chi) {
  if (!chi.is_primitive()) throw NotPrimitive("gauss_sum: character not primitive");
  long N = chi.modulus;
  if (N == 1) return Cyclo(1);
  long m = chi.order();
  long level = lcm_long(N, m);
  Cyclo s(0);
  for (long a = 1; a < N; ++a) {
    auto k = chi.exponent(a);
    if (!k) continue;
    s = s + cyclo_zeta(level, (level / m) * *k + 0) * cyclo_zeta(level, (level / N) * a);
  }
  return s;
}

// B_{n,chi} computed at an explicit modulus M (chi extended by zero):
// M^{n-1} sum_{a=1..M} chi(a) B_n(a/M).  With M = conductor this is the
// primitive generalized Bernoulli number; with M = level it carries the
// Euler factors prod_{l | M} (1 - chi(l) l^{n-1}).
inline Cyclo bernoulli_general_at(unsigned n, const DirichletCharacter& chi, long M) {
  auto Bn = bernoulli_polynomial(n);
  long m = std::max<long>(chi.order(), 1);
  Cyclo s(0);
  for (long a = 1; a <= M; ++a) {
    if (M > 1 && gcd_long(a, M) != 1) continue;  // chi extended by zero mod M
    auto k = chi.exponent(a);
    if (!k) continue;
    Rat val = eval_poly(Bn, make_rat(Int(a), Int(M)));
    s = s + cyclo_zeta(m, *k) * Cyclo(val);
  }
  Rat scale = rat_pow(Rat(M), static_cast<long>(n) - 1);
  return s * Cyclo(scale);
}

inline Cyclo bernoulli_general(unsigned n, const DirichletCharacter& chi) {
  if (!chi.is_primitive()) throw NotPrimitive("bernoulli_general: character not primitive");
  return bernoulli_general_at(n, chi, chi.modulus);
}

// L(chi, -k) = -B_{k+1,chi}/(k+1)
inline Cyclo dirichlet_L_negative(const DirichletCharacter& chi, unsigned k) {
  return -bernoulli_general(k + 1, chi) * Cyclo(make_rat(Int(1), Int(k + 1)));
}

struct CircularUnitRep {
  DirichletCharacter chi;
  // formal combination: pairs (a, chi(a)) for a in 1..N-1 coprime to N
  std::vector<std::pair<long, Cyclo>> terms;
  // exact product for quadratic chi (exponents +-1)
  std::optional<Cyclo> exact;
  long power = 1;  // represents c_chi^power (logarithm side scales linearly)
};

inline CircularUnitRep circular_unit(const DirichletCharacter& chi) {
  if (chi.is_trivial() || !chi.is_even())
    throw TrivialOrOddCharacter("circular_unit: need even nontrivial character");
  if (!chi.is_primitive()) throw NotPrimitive("circular_unit: character not primitive");
  long N = chi.modulus;
  CircularUnitRep rep;
  rep.chi = chi;
  for (long a = 1; a < N; ++a) {
    auto k = chi.exponent(a);
    if (!k) continue;
    rep.terms.emplace_back(a, chi.value(a));
  }
  if (chi.order() == 2) {
    Cyclo num(1), den(1);
    for (auto& [a, v] : rep.terms) {
      Cyclo factor = Cyclo(1) - cyclo_zeta(N, a);
      if (v == Cyclo(1))
        num = num * factor;
      else
        den = den * factor;
    }
    rep.exact = num / den;
  }
  return rep;
}

}  // namespace eiscong
