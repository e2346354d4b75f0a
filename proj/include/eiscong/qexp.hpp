#pragma once

// Truncated formal q-expansions with cyclotomic coefficients.
//
// A series is  q^lead * ( sum_{0 <= k < kmax} c[k] q^{k/g} + O(q^{kmax/g}) ):
// `grain` g fixes the exponent lattice, `lead` is an explicit fractional
// leading power (so the 1/12 of Siegel units never forces grain 12N), and
// kmax counts valid grain slots.  The spec-level truncation B is kmax/g.
// Validity is propagated pessimistically and never inflated.

#include "eiscong/dirichlet.hpp"

#include <map>

namespace eiscong {

struct QExpansion {
  long grain = 1;
  long kmax = 0;  // coefficients valid for slots k < kmax
  Rat lead = Rat(0);
  std::map<long, Cyclo> coeffs;  // key k: coefficient of q^{k/grain}

  long trunc() const { return kmax / grain; }  // B in integral q-powers
  Cyclo coeff(long k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? Cyclo(0) : it->second;
  }
  // coefficient of the integral power q^n of the full series q^lead * unit
  Cyclo coeff_q(long n) const {
    Rat e = (Rat(n) - lead) * grain;
    if (e.get_den() != 1) return Cyclo(0);
    if (sgn(e) < 0) return Cyclo(0);
    return coeff(to_long(Int(e.get_num())));
  }
  void set(long k, Cyclo v) {
    if (is_zero(v))
      coeffs.erase(k);
    else
      coeffs[k] = std::move(v);
  }
  // first nonzero slot; kmax when the visible part vanishes
  long order_slot() const {
    for (auto& [k, v] : coeffs)
      if (k < kmax && !is_zero(v)) return k;
    return kmax;
  }
  bool identically_zero_to_truncation() const { return order_slot() >= kmax; }
};

inline QExpansion qexp_zero(long B, long grain = 1) {
  QExpansion r;
  r.grain = grain;
  r.kmax = B * grain;
  return r;
}

inline QExpansion qexp_one(long B, long grain = 1) {
  QExpansion r = qexp_zero(B, grain);
  r.coeffs[0] = Cyclo(1);
  return r;
}

inline QExpansion qexp_regrain(const QExpansion& a, long g2) {
  if (a.grain == g2) return a;
  if (g2 % a.grain != 0) throw Error("qexp_regrain: grain must refine");
  long f = g2 / a.grain;
  QExpansion r;
  r.grain = g2;
  r.kmax = a.kmax * f;
  r.lead = a.lead;
  for (auto& [k, v] : a.coeffs) r.coeffs[k * f] = v;
  return r;
}

// rewrite with a smaller lead on the lattice of grain g
inline QExpansion qexp_align_lead(const QExpansion& a, const Rat& new_lead, long g) {
  QExpansion r = qexp_regrain(a, g);
  Rat delta = (r.lead - new_lead) * g;
  if (delta.get_den() != 1) throw Error("qexp_align_lead: lead not on lattice");
  long sh = to_long(Int(delta.get_num()));
  if (sh < 0) throw Error("qexp_align_lead: negative shift");
  if (sh == 0) return r;
  QExpansion out;
  out.grain = g;
  out.lead = new_lead;
  out.kmax = r.kmax + sh;
  for (auto& [k, v] : r.coeffs) out.coeffs[k + sh] = v;
  return out;
}

inline QExpansion operator+(const QExpansion& a, const QExpansion& b) {
  long g = lcm_long(a.grain, b.grain);
  Rat dl = a.lead - b.lead;
  g = lcm_long(g, to_long(Int(dl.get_den())));  // lead offset must sit on the lattice
  Rat lead = std::min(a.lead, b.lead);
  QExpansion x = qexp_align_lead(a, lead, g), y = qexp_align_lead(b, lead, g);
  QExpansion r;
  r.grain = g;
  r.lead = lead;
  r.kmax = std::min(x.kmax, y.kmax);
  for (auto& [k, v] : x.coeffs)
    if (k < r.kmax) r.set(k, v);
  for (auto& [k, v] : y.coeffs)
    if (k < r.kmax) r.set(k, r.coeff(k) + v);
  return r;
}

inline QExpansion operator-(const QExpansion& a) {
  QExpansion r = a;
  for (auto& [k, v] : r.coeffs) v = -v;
  return r;
}

inline QExpansion operator-(const QExpansion& a, const QExpansion& b) { return a + (-b); }

inline QExpansion operator*(const QExpansion& a, const QExpansion& b) {
  long g = lcm_long(a.grain, b.grain);
  QExpansion x = qexp_regrain(a, g), y = qexp_regrain(b, g);
  QExpansion r;
  r.grain = g;
  r.lead = x.lead + y.lead;
  r.kmax = std::min(x.kmax + y.order_slot(), y.kmax + x.order_slot());
  for (auto& [i, u] : x.coeffs) {
    if (i >= r.kmax) break;
    for (auto& [j, v] : y.coeffs) {
      if (i + j >= r.kmax) break;
      r.set(i + j, r.coeff(i + j) + u * v);
    }
  }
  return r;
}

inline QExpansion qexp_scale(QExpansion a, const Cyclo& s) {
  if (is_zero(s)) {
    a.coeffs.clear();
    return a;
  }
  for (auto& [k, v] : a.coeffs) v = v * s;
  return a;
}

// q u'/u including the lead contribution (dlog q^w = w); requires an
// invertible leading coefficient.
inline QExpansion qexp_dlog(const QExpansion& u) {
  auto it = u.coeffs.find(0);
  if (it == u.coeffs.end() || is_zero(it->second))
    throw NonInvertibleLeadingTerm("qexp_dlog: leading coefficient not invertible");
  long lim = u.kmax;
  Cyclo c0inv = inverse(it->second);
  // inverse of the unit part, term by term
  std::map<long, Cyclo> inv;
  inv[0] = c0inv;
  for (long k = 1; k < lim; ++k) {
    Cyclo s(0);
    for (auto& [j, v] : u.coeffs) {
      if (j == 0) continue;
      if (j > k) break;
      auto p = inv.find(k - j);
      if (p != inv.end()) s = s + v * p->second;
    }
    Cyclo val = -(s * c0inv);
    if (!is_zero(val)) inv[k] = val;
  }
  QExpansion invq;
  invq.grain = u.grain;
  invq.kmax = u.kmax;
  invq.coeffs = std::move(inv);
  // q A' in grain units: slot k carries factor k/grain
  QExpansion da;
  da.grain = u.grain;
  da.kmax = u.kmax;
  for (auto& [k, v] : u.coeffs)
    if (k > 0 && k < lim) da.set(k, v * Cyclo(make_rat(Int(k), Int(u.grain))));
  QExpansion r = da * invq;
  r.kmax = std::min(r.kmax, u.kmax);  // derivative/inverse both valid to kmax
  r.lead = Rat(0);
  r.set(0, r.coeff(0) + Cyclo(u.lead));
  return r;
}

// ---------------------------------------------------------------------------
// Eisenstein series of weight 2.

// E2(chi1, chi2, r): a0 + sum_n (sum_{d|n} chi1(n/d) chi2(d) d) q^{rn},
// with E2(1,1,r) = E2-series(q) - r E2-series(q^r) in the doubly-trivial case.
inline QExpansion eisenstein_E2(const DirichletCharacter& chi1, const DirichletCharacter& chi2,
                                long r, long B) {
  if (!chi1.is_primitive() || !chi2.is_primitive())
    throw NotPrimitive("eisenstein_E2: characters must be primitive");
  if (chi1.is_even() != chi2.is_even()) throw ParityMismatch("eisenstein_E2: parity mismatch");
  long N1 = chi1.modulus, N2 = chi2.modulus;
  if (r * N1 * N2 <= 1) throw DegenerateTriple("eisenstein_E2: r N1 N2 must exceed 1");
  QExpansion f = qexp_zero(B);
  if (chi1.is_trivial() && chi2.is_trivial()) {
    for (long n = 1; n < B; ++n) {
      Rat sig(0);
      for (long d = 1; d <= n; ++d)
        if (n % d == 0) sig += d;
      f.set(n, f.coeff(n) + Cyclo(sig));
      if (r * n < B) f.set(r * n, f.coeff(r * n) - Cyclo(sig * r));
    }
    return f;
  }
  if (chi1.is_trivial())
    f.set(0, dirichlet_L_negative(chi2, 1) * Cyclo(make_rat(Int(1), Int(2))));
  for (long n = 1; r * n < B; ++n) {
    Cyclo a(0);
    for (long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      a = a + chi1.value(n / d) * chi2.value(d) * Cyclo(d);
    }
    if (!is_zero(a)) f.set(r * n, a);
  }
  return f;
}

// Siegel unit u_{a,b;N} = q^w prod_{n>=0}(1-q^{n+a/N} z^b) prod_{n>=1}(1-q^{n-a/N} z^{-b}),
// w = 1/12 - a/N + a^2/(2N^2); grain-N expansion.
inline QExpansion siegel_unit(long a, long b, long N, long B) {
  if (a == 0 && b == 0) throw BothZero("siegel_unit: (a,b) = (0,0)");
  if (a < 0 || b < 0 || a >= N || b >= N) throw Error("siegel_unit: parameters out of range");
  QExpansion u = qexp_one(B, N);
  u.lead = make_rat(Int(1), Int(12)) - make_rat(Int(a), Int(N)) +
           make_rat(Int(a) * Int(a), Int(2) * Int(N) * Int(N));
  auto binom = [&](long kexp, const Cyclo& z) {
    QExpansion f = qexp_one(B, N);
    f.set(kexp, f.coeff(kexp) - z);  // kexp = 0 merges with the constant 1
    u = u * f;
  };
  long lim = B * N;
  for (long n = 0; n * N + a < lim; ++n) binom(n * N + a, cyclo_zeta(N, b));
  for (long n = 1; n * N - a < lim; ++n) binom(n * N - a, cyclo_zeta(N, -b));
  return u;
}

// Additive avatar of the modular unit attached to an even nontrivial
// primitive chi1:  (-1/(2 g(chibar1))) sum_b chibar1(b) dlog u_{0,b;N}, using
// dlog u_{0,b;N} = 1/12 - sum_{j>=1} q^j sum_{n|j} n (z^{b j/n} + z^{-b j/n}).
inline QExpansion modular_unit_dlog(const DirichletCharacter& chi1, long B) {
  if (chi1.is_trivial()) throw TrivialCharacter("modular_unit_dlog: trivial character");
  if (!chi1.is_primitive()) throw NotPrimitive("modular_unit_dlog: character not primitive");
  if (!chi1.is_even())
    throw ParityMismatch("modular_unit_dlog: odd character has no weight-2 partner");
  long N = chi1.modulus;
  auto chibar = char_conj(chi1);
  Cyclo scale = Cyclo(make_rat(Int(-1), Int(2))) * inverse(gauss_sum(chibar));
  QExpansion r = qexp_zero(B);
  Cyclo c0(0);
  for (long b = 1; b < N; ++b) c0 = c0 + chibar.value(b);
  r.set(0, scale * c0 * Cyclo(make_rat(Int(1), Int(12))));  // orthogonality makes this 0
  for (long j = 1; j < B; ++j) {
    Cyclo s(0);
    for (long n = 1; n <= j; ++n) {
      if (j % n != 0) continue;
      long e = (j / n) % N;
      Cyclo inner(0);
      for (long b = 1; b < N; ++b) {
        if (!chibar.exponent(b)) continue;
        inner = inner + chibar.value(b) * (cyclo_zeta(N, b * e) + cyclo_zeta(N, -b * e));
      }
      s = s + Cyclo(-n) * inner;
    }
    r.set(j, scale * s);
  }
  return r;
}

// Sturm bound for weight k on {±1}Gamma_1(N): ceil(k mu / 12) + 1; the level
// one case is pinned to 1.
inline long psl2_index_gamma1(long N) {
  if (N == 1) return 1;
  if (N == 2) return 3;
  long num = N * N;
  for (auto& [l, e] : factor_long(N)) {
    (void)e;
    num /= l * l;
    num *= (l - 1) * (l + 1);
  }
  return num / 2;
}

inline long sturm_bound(long N, long k = 2) {
  if (N == 1) return 1;
  long mu = psl2_index_gamma1(N);
  return (k * mu + 11) / 12 + 1;
}

// ---------------------------------------------------------------------------
// Eisenstein basis triples (chi1, chi2, r) of weight 2, level N, nebentype
// theta: chi1, chi2 primitive of conductors N1, N2, N1 N2 r | N, equal
// parity, chi1 chi2 inducing theta, r N1 N2 > 1.

struct EisTriple {
  DirichletCharacter chi1, chi2;
  long r = 1;
};

inline std::vector<EisTriple> eisenstein_triples(long N, const DirichletCharacter& theta) {
  std::vector<EisTriple> out;
  auto theta_prim = char_primitive(theta);
  for (long N1 = 1; N1 <= N; ++N1) {
    if (N % N1 != 0) continue;
    for (long N2 = 1; N1 * N2 <= N; ++N2) {
      if (N % (N1 * N2) != 0) continue;
      for (auto& chi1 : enumerate_characters(N1)) {
        if (!chi1.is_primitive()) continue;
        for (auto& chi2 : enumerate_characters(N2)) {
          if (!chi2.is_primitive()) continue;
          if (chi1.is_even() != chi2.is_even()) continue;
          auto prod = char_primitive(char_mul(chi1, chi2));
          if (!(prod == theta_prim)) continue;
          for (long r = 1; r * N1 * N2 <= N; ++r) {
            if (N % (r * N1 * N2) != 0) continue;
            if (r * N1 * N2 == 1) continue;
            out.push_back({chi1, chi2, r});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace eiscong
