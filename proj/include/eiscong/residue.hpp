#pragma once

// Residue rings O/pr^t realized as (Z/p^t)[x]/(ghat) with ghat monic and
// irreducible mod p.  Since ghat is irreducible mod p the local ring is
// unramified, so the maximal ideal is (p) and the valuation of an element is
// the minimal p-valuation of its coefficients (capped at t).

#include "eiscong/qfactor.hpp"

#include <memory>
#include <sstream>

namespace eiscong {

struct ResidueRing {
  Int p;
  long t = 1;
  Int pt;      // p^t
  MPoly ghat;  // monic modulus, coefficients reduced mod p^t
  ResidueRing(Int p_, long t_, MPoly g) : p(std::move(p_)), t(t_) {
    pt = int_pow(p, static_cast<unsigned long>(t));
    ghat = mp_reduce(std::move(g), pt);
    if (ghat.empty() || ghat.back() != 1) throw Error("ResidueRing: modulus must be monic");
  }
  long degree() const { return poly_deg(ghat); }
  bool operator==(const ResidueRing& o) const { return p == o.p && t == o.t && ghat == o.ghat; }
};

using ResidueRingPtr = std::shared_ptr<const ResidueRing>;

struct ResidueElement {
  ResidueRingPtr ring;  // null: context-free integer scalar held in c[0]
  MPoly c;

  ResidueElement() : c{} {}
  ResidueElement(long v) : c{} {  // NOLINT implicit: scalar promotion
    if (v != 0) c = {Int(v)};
  }
  ResidueElement(ResidueRingPtr r, MPoly cc) : ring(std::move(r)) {
    c = mp_mod(mp_reduce(std::move(cc), ring->pt), ring->ghat, ring->pt);
  }
  bool is_zero_elem() const { return c.empty(); }
};

inline bool is_zero(const ResidueElement& x) { return x.is_zero_elem(); }

namespace detail {
inline ResidueRingPtr res_ctx(const ResidueElement& a, const ResidueElement& b) {
  if (a.ring && b.ring) {
    if (!(*a.ring == *b.ring)) throw Error("ResidueElement: mixed rings");
    return a.ring;
  }
  return a.ring ? a.ring : b.ring;
}
}  // namespace detail

inline ResidueElement operator+(const ResidueElement& a, const ResidueElement& b) {
  auto r = detail::res_ctx(a, b);
  if (!r) {
    ResidueElement s;
    Int v = (a.c.empty() ? Int(0) : a.c[0]) + (b.c.empty() ? Int(0) : b.c[0]);
    if (sgn(v) != 0) s.c = {v};
    return s;
  }
  return ResidueElement(r, mp_add(a.c, b.c, r->pt));
}

inline ResidueElement operator-(const ResidueElement& a) {
  ResidueElement s = a;
  if (!s.ring) {
    for (auto& v : s.c) v = -v;
    return s;
  }
  s.c = mp_sub(MPoly{}, s.c, s.ring->pt);
  return s;
}

inline ResidueElement operator-(const ResidueElement& a, const ResidueElement& b) {
  return a + (-b);
}

inline ResidueElement operator*(const ResidueElement& a, const ResidueElement& b) {
  auto r = detail::res_ctx(a, b);
  if (!r) {
    ResidueElement s;
    Int v = (a.c.empty() ? Int(0) : a.c[0]) * (b.c.empty() ? Int(0) : b.c[0]);
    if (sgn(v) != 0) s.c = {v};
    return s;
  }
  return ResidueElement(r, mp_mod(mp_mul(mp_reduce(a.c, r->pt), mp_reduce(b.c, r->pt), r->pt),
                                  r->ghat, r->pt));
}

inline bool operator==(const ResidueElement& a, const ResidueElement& b) {
  return is_zero(a - b);
}

// valuation at the maximal ideal, capped at t (zero reports t)
inline long res_valuation(const ResidueElement& x) {
  if (!x.ring) throw Error("res_valuation: scalar without ring");
  if (x.c.empty()) return x.ring->t;
  long v = x.ring->t;
  for (const auto& co : x.c) v = std::min(v, valuation(co, x.ring->p));
  return v;
}

inline bool res_is_unit(const ResidueElement& x) {
  return x.ring && !x.c.empty() && res_valuation(x) == 0;
}

// Inverse of a unit: invert in the residue field, then Newton-lift
// y -> y(2 - ay) up to p^t.
inline ResidueElement res_inverse(const ResidueElement& x) {
  if (!res_is_unit(x)) throw NotAUnit("res_inverse: not a unit");
  const auto& R = *x.ring;
  MPoly gp = mp_reduce(R.ghat, R.p);
  auto [g, u, v] = mp_xgcd(mp_reduce(x.c, R.p), gp, R.p);
  if (poly_deg(g) != 0) throw NotAUnit("res_inverse: not invertible mod p");
  MPoly y = mp_scale(u, int_invmod(g[0], R.p), R.p);
  Int pk = R.p;
  while (pk < R.pt) {
    pk = pk * pk;
    if (pk > R.pt) pk = R.pt;
    MPoly two{Int(2)};
    y = mp_mod(mp_mul(y, mp_sub(two, mp_mod(mp_mul(x.c, y, pk), R.ghat, pk), pk), pk), R.ghat, pk);
  }
  return ResidueElement(x.ring, y);
}

inline ResidueElement res_from_rat(const ResidueRingPtr& r, const Rat& q) {
  return ResidueElement(r, MPoly{rat_mod(q, r->pt)});
}

inline std::string res_str(const ResidueElement& x) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < x.c.size(); ++i) {
    if (i) os << ",";
    os << x.c[i].get_str();
  }
  os << "]";
  if (x.ring) os << " mod (" << x.ring->p.get_str() << "^" << x.ring->t << ")";
  return os.str();
}

// One ring per irreducible factor of f mod p, Hensel-lifted to p^t and
// listed in a fixed order (degree, then coefficient tuple).
inline std::vector<ResidueRingPtr> residue_rings_of(const IPoly& f, const Int& p, long t,
                                                    std::uint64_t seed = 1) {
  auto factors = hensel_irreducible_factors(f, p, t, seed);
  std::vector<ResidueRingPtr> out;
  out.reserve(factors.size());
  for (auto& g : factors) out.push_back(std::make_shared<ResidueRing>(p, t, std::move(g)));
  return out;
}

}  // namespace eiscong
