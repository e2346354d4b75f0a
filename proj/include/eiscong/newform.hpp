#pragma once

// Eigenform packets from the symbol space.
//
// The theta-twisted quotient V is restricted to scalars (one Q-dimension per
// basis element and power of zeta_m), a generic integer combination
// B = L(T_{l0} + c M_zeta + ...) is formed, and its characteristic polynomial
// is computed exactly (Hessenberg mod word primes + CRT behind a Hadamard
// bound) and factored over Z.  Each irreducible factor g of multiplicity 2 in
// the cuspidal part is a Galois conjugacy class of newforms: its coefficient
// field is K = Q[x]/(g) and the class carries the image z of zeta_m, the
// eigenvalues a_l, and left eigenfunctionals split by the star involution.
// Functionals are produced by the Krylov identity lambda q(B, xbar) with
// q(y, x) = (g(x) - g(y))/(x - y), which needs no elimination over K, and
// are then verified exactly as eigenrows.
//
// The conjugate (dual) eigensystem a*_l = thetabar(l) a_l lives in the same
// factor; its functionals come from the same identity at the root
// x* = image of B's eigenvalue under z -> z^{-1}.

#include "eiscong/modsym.hpp"
#include "eiscong/numberfield.hpp"
#include "eiscong/qfactor.hpp"

namespace eiscong {

// ---------------------------------------------------------------------------
// charpoly of an integer matrix: Hessenberg mod word primes + CRT

namespace detail {

inline std::vector<long> charpoly_modp(std::vector<std::vector<long>> h, long p) {
  size_t n = h.size();
  auto sub = [&](long a, long b) { return mod_long(a - b, p); };
  for (size_t m = 1; m + 1 <= n; ++m) {
    size_t piv = m;
    while (piv < n && h[piv][m - 1] == 0) ++piv;
    if (piv == n) continue;
    if (piv != m) {
      std::swap(h[piv], h[m]);
      for (size_t i = 0; i < n; ++i) std::swap(h[i][piv], h[i][m]);
    }
    long inv = invmod_long(h[m][m - 1], p);
    for (size_t i = m + 1; i < n; ++i) {
      if (h[i][m - 1] == 0) continue;
      long u = mulmod_long(h[i][m - 1], inv, p);
      for (size_t j = 0; j < n; ++j) h[i][j] = sub(h[i][j], mulmod_long(u, h[m][j], p));
      for (size_t j = 0; j < n; ++j) h[j][m] = mod_long(h[j][m] + mulmod_long(u, h[j][i], p), p);
    }
  }
  std::vector<std::vector<long>> poly(n + 1);
  poly[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_i h[i-1][m-1] (prod subdiag) p_{i-1}
    std::vector<long> t(poly[m - 1].size() + 1, 0);
    for (size_t i = 0; i < poly[m - 1].size(); ++i) {
      t[i + 1] = mod_long(t[i + 1] + poly[m - 1][i], p);
      t[i] = sub(t[i], mulmod_long(h[m - 1][m - 1], poly[m - 1][i], p));
    }
    long prod = 1;
    for (size_t i = m - 1; i >= 1; --i) {
      prod = mulmod_long(prod, h[i][i - 1], p);
      if (prod == 0) break;
      long coef = mulmod_long(h[i - 1][m - 1], prod, p);
      if (coef == 0) continue;
      for (size_t j = 0; j < poly[i - 1].size(); ++j)
        t[j] = sub(t[j], mulmod_long(coef, poly[i - 1][j], p));
    }
    poly[m] = std::move(t);
  }
  return poly[n];
}

}  // namespace detail

inline IPoly charpoly_integer(const Mat<Int>& M) {
  size_t n = M.size();
  if (n == 0) return IPoly{Int(1)};
  Int H(1);
  for (auto& row : M)
    for (auto& x : row)
      if (abs(x) > H) H = abs(x);
  // coefficient bound: every coefficient is a sum of at most C(n,k) minors,
  // each at most (sqrt(n) H)^k in absolute value
  Int root_n;
  mpz_sqrt(root_n.get_mpz_t(), Int(n).get_mpz_t());
  Int bound = int_pow(2 * (root_n + 1) * (H + 1), static_cast<unsigned long>(n)) * 4;
  // CRT over word primes
  std::vector<long> primes;
  Int prodmod(1);
  {
    Int p("2305843009213693950");  // start near 2^61: residue sums stay in long
    while (prodmod <= 2 * bound) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      primes.push_back(to_long(p));
      prodmod *= p;
    }
  }
  std::vector<Int> coeffs(n + 1, Int(0));
  Int mod_so_far(1);
  for (long p : primes) {
    std::vector<std::vector<long>> mp(n, std::vector<long>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Int r = int_mod(M[i][j], Int(p));
        mp[i][j] = to_long(r);
      }
    auto cp = detail::charpoly_modp(std::move(mp), p);
    // CRT merge
    if (mod_so_far == 1) {
      for (size_t k = 0; k <= n; ++k) coeffs[k] = cp[k];
      mod_so_far = p;
    } else {
      Int pinv = int_invmod(mod_so_far, Int(p));
      for (size_t k = 0; k <= n; ++k) {
        Int delta = int_mod(Int(cp[k]) - coeffs[k], Int(p));
        coeffs[k] += mod_so_far * int_mod(delta * pinv, Int(p));
      }
      mod_so_far *= p;
    }
  }
  IPoly out(n + 1);
  for (size_t k = 0; k <= n; ++k) out[k] = int_mod_sym(coeffs[k], mod_so_far);
  if (out.back() != 1) throw Error("charpoly_integer: not monic after CRT");
  return out;
}

// ---------------------------------------------------------------------------
// flattening over Q

// regular representation of y acting on the power basis of Q(mu_m)
inline Mat<Rat> cyclo_regular_rep(const Cyclo& y_in, long m) {
  long phi = euler_phi_long(m);
  Cyclo y = cyclo_embed(y_in, m);
  Mat<Rat> R = mat_zero<Rat>(static_cast<size_t>(phi), static_cast<size_t>(phi));
  Cyclo cur = y;
  for (long j = 0; j < phi; ++j) {
    for (long i = 0; i < phi; ++i) R[static_cast<size_t>(i)][static_cast<size_t>(j)] = cur.c[static_cast<size_t>(i)];
    if (j + 1 < phi) cur = cur * cyclo_zeta(m, 1);
  }
  return R;
}

// flatten a K0-matrix to a rational matrix of size (rows*phi) x (cols*phi)
inline Mat<Rat> flatten_matrix(const Mat<Cyclo>& M, long m) {
  long phi = euler_phi_long(m);
  size_t R = M.size(), C = R ? M[0].size() : 0;
  Mat<Rat> out = mat_zero<Rat>(R * static_cast<size_t>(phi), C * static_cast<size_t>(phi));
  for (size_t r = 0; r < R; ++r)
    for (size_t c = 0; c < C; ++c) {
      if (is_zero(M[r][c])) continue;
      Mat<Rat> block = cyclo_regular_rep(M[r][c], m);
      for (long i = 0; i < phi; ++i)
        for (long j = 0; j < phi; ++j)
          out[r * phi + static_cast<size_t>(i)][c * phi + static_cast<size_t>(j)] =
              block[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  return out;
}

inline Mat<Rat> flatten_zeta(long dim, long m) {
  Mat<Cyclo> Z = mat_zero<Cyclo>(static_cast<size_t>(dim), static_cast<size_t>(dim));
  for (long i = 0; i < dim; ++i) Z[static_cast<size_t>(i)][static_cast<size_t>(i)] = cyclo_zeta(m, 1);
  return flatten_matrix(Z, m);
}

inline std::pair<Mat<Int>, Int> mat_clear_denominators(const Mat<Rat>& M) {
  Int L(1);
  for (auto& row : M)
    for (auto& x : row) L = int_lcm(L, Int(x.get_den()));
  Mat<Int> out(M.size(), Vec<Int>(M.empty() ? 0 : M[0].size()));
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) {
      Rat t = M[i][j] * Rat(L);
      out[i][j] = t.get_num();
    }
  return {out, L};
}

// sigma_z: substitute zeta_m -> z in a cyclotomic element (z a root of Phi_m)
inline NFElem cyclo_substitute(const Cyclo& y_in, const NFElem& z, long m) {
  Cyclo y = cyclo_embed(y_in, m);
  NFElem acc(0), zp(1);
  for (size_t i = 0; i < y.c.size(); ++i) {
    if (!eiscong::is_zero(y.c[i])) acc = acc + NFElem(y.c[i]) * zp;
    if (i + 1 < y.c.size()) zp = zp * z;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// eigenform classes

struct NewformClass {
  long N = 1;
  DirichletCharacter theta;  // modulus N
  long m = 1;                // order of theta
  IPoly g;                   // minimal polynomial of the B-eigenvalue
  NFPtr K;
  NFElem z;                  // image of zeta_m in K
  std::map<long, NFElem> a;  // Hecke eigenvalues at primes
  // left eigenfunctionals as D-rows over K; pairing with a symbol vector v
  // (coordinates in K0) is sum_j row[j] * sigma_z(v[j]) for f, and with
  // sigma_{z^{-1}} for the dual form
  Vec<NFElem> ePlus, eMinus;
  Vec<NFElem> dualPlus, dualMinus;
  NFElem dual_x;  // B-eigenvalue of the dual system (a root of g in K)
  long mult = 1;  // 1 = new; >1 = oldform copies (excluded from packets)

  NFElem theta_value(long l) const {
    auto k = theta.exponent(l);
    if (!k) return NFElem(0);
    return nf_pow(z, *k);
  }
  NFElem abar(long l) const {  // dual eigenvalue thetabar(l) a_l
    auto k = theta.exponent(l);
    if (!k) throw Error("abar: l divides N");
    return nf_pow(z, mod_long(-*k, std::max(m, 1L))) * a.at(l);
  }
};

struct OldClassInfo {
  IPoly g;
  long mult;  // number of oldform copies
};

struct EigenData {
  std::shared_ptr<SymbolSpace> space;
  Mat<Cyclo> star;
  std::vector<NewformClass> newclasses;
  std::vector<OldClassInfo> oldclasses;
  std::vector<long> hecke_primes;  // primes with exact a_l stored
};

namespace detail {

// v <- v * B + c * w  (exact integer row operation)
inline void row_muladd(Vec<Int>& v, const Mat<Int>& B, const Int& c, const Vec<Int>& w) {
  size_t n = v.size();
  Vec<Int> out(n, Int(0));
  for (size_t k = 0; k < n; ++k) {
    if (sgn(v[k]) == 0) continue;
    const auto& row = B[k];
    for (size_t j = 0; j < n; ++j)
      if (sgn(row[j]) != 0) out[j] += v[k] * row[j];
  }
  for (size_t j = 0; j < n; ++j) out[j] += c * w[j];
  v = std::move(out);
}

inline Vec<Int> row_poly_apply(const Vec<Int>& w, const Mat<Int>& B, const IPoly& h) {
  Vec<Int> v(w.size(), Int(0));
  for (size_t k = h.size(); k-- > 0;) row_muladd(v, B, h[k], w);
  return v;
}

inline Vec<Int> row_times(const Vec<Int>& v, const Mat<Int>& B) {
  Vec<Int> out(v.size(), Int(0));
  for (size_t k = 0; k < v.size(); ++k) {
    if (sgn(v[k]) == 0) continue;
    for (size_t j = 0; j < out.size(); ++j)
      if (sgn(B[k][j]) != 0) out[j] += v[k] * B[k][j];
  }
  return out;
}

}  // namespace detail

// exact division of monic integer polynomials
inline IPoly ipoly_exact_div(const IPoly& num, const IPoly& den) {
  auto [q, r] = poly_divmod(ipoly_to_q(num), ipoly_to_q(den));
  if (!poly_is_zero(r)) throw Error("ipoly_exact_div: not divisible");
  IPoly out(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i].get_den() != 1) throw Error("ipoly_exact_div: non-integer quotient");
    out[i] = q[i].get_num();
  }
  return out;
}

inline long ipoly_multiplicity(const IPoly& f, const IPoly& g) {
  long mult = 0;
  QPoly rem = ipoly_to_q(f), gq = ipoly_to_q(g);
  for (;;) {
    auto [q, r] = poly_divmod(rem, gq);
    if (!poly_is_zero(r)) return mult;
    rem = std::move(q);
    ++mult;
  }
}

inline EigenData eigen_decompose(long N, const DirichletCharacter& theta_in,
                                 long prime_bound = 20, std::uint64_t seed = 1) {
  EigenData E;
  E.space = std::make_shared<SymbolSpace>(build_space(N, theta_in));
  SymbolSpace& S = *E.space;
  E.star = star_matrix(S);
  long m = std::max<long>(S.order_m, 1);
  long phi = euler_phi_long(m);
  long n = S.D * phi;
  if (S.Dc == 0) return E;

  for (long p = 2; p <= std::max(prime_bound, 3L); ++p)
    if (is_prime_long(p)) E.hecke_primes.push_back(p);

  // cuspidal restriction over K0 (columns of the kernel as basis)
  Mat<Cyclo> cusp_cols;
  for (auto& v : S.cusp_basis_rows) cusp_cols.push_back(v);
  ColumnSolver<Cyclo> cusp_solver(cusp_cols);
  auto restrict_to_cusp = [&](const Mat<Cyclo>& T) {
    Mat<Cyclo> R = mat_zero<Cyclo>(cusp_cols.size(), cusp_cols.size());
    for (size_t k = 0; k < cusp_cols.size(); ++k) {
      auto img = mat_vec(T, cusp_cols[k]);
      auto x = cusp_solver.solve(img);
      for (size_t j = 0; j < cusp_cols.size(); ++j) R[j][k] = x[j];
    }
    return R;
  };

  // deterministic recipe ladder for the generic combination B
  std::vector<long> goodp;
  for (long l = 2; goodp.size() < 6; ++l)
    if (is_prime_long(l) && N % l != 0) goodp.push_back(l);

  for (long recipe = 0; recipe < 5; ++recipe) {
    std::vector<std::pair<long, long>> ops;  // (prime, weight); prime 0 = zeta
    ops.emplace_back(goodp[0], 1);
    ops.emplace_back(0, recipe + 1);
    for (long i = 1; i <= recipe; ++i) ops.emplace_back(goodp[static_cast<size_t>(i)], recipe + 1 + i);

    auto assemble = [&](bool cuspidal) {
      long dim = cuspidal ? S.Dc : S.D;
      Mat<Rat> acc = mat_zero<Rat>(static_cast<size_t>(dim * phi), static_cast<size_t>(dim * phi));
      for (auto& [l, wgt] : ops) {
        Mat<Rat> piece;
        if (l == 0) {
          piece = flatten_zeta(dim, m);
        } else {
          const Mat<Cyclo>& T = hecke_matrix(S, l);
          piece = flatten_matrix(cuspidal ? restrict_to_cusp(T) : T, m);
        }
        for (size_t i = 0; i < acc.size(); ++i)
          for (size_t j = 0; j < acc.size(); ++j) acc[i][j] += Rat(wgt) * piece[i][j];
      }
      return acc;
    };

    auto [Bc, Lc] = mat_clear_denominators(assemble(true));
    auto [Bf, Lf] = mat_clear_denominators(assemble(false));
    if (Lc != Lf) {
      // use a common scale so the two charpolys share eigenvalues
      Int L = int_lcm(Lc, Lf);
      if (L != Lc) {
        Int f = L / Lc;
        for (auto& row : Bc)
          for (auto& x : row) x *= f;
      }
      if (L != Lf) {
        Int f = L / Lf;
        for (auto& row : Bf)
          for (auto& x : row) x *= f;
      }
      Lc = Lf = L;
    }

    IPoly cp_c = charpoly_integer(Bc);
    IPoly cp_f = charpoly_integer(Bf);
    auto factors = factor_monic_Z(cp_c, seed);

    bool ok = true;
    std::vector<NewformClass> found;
    std::vector<OldClassInfo> old_found;

    for (auto& [g, e] : factors) {
      if (e % 2 != 0) {
        ok = false;
        break;
      }
      if (ipoly_multiplicity(cp_f, g) != e) {  // collision with the Eisenstein part
        ok = false;
        break;
      }
      if (e > 2) {
        // Oldform copies and an unseparated pair of systems look alike at the
        // charpoly level.  A genuine old class carries one eigensystem, so
        // the Krylov row must still be a joint eigenrow for M_zeta and every
        // good T_l; a mixture fails some proportionality and forces the next
        // recipe.
        NFPtr Kold = std::make_shared<NumberField>(g);
        long d = poly_deg(g);
        IPoly h = cp_f;
        for (long rep = 0; rep < e; ++rep) h = ipoly_exact_div(h, g);
        Rng wrng(seed ^ fnv1a64("old" + std::to_string(N) + character_token(S.theta)));
        bool verified = false;
        for (int attempt = 0; attempt < 4 && !verified; ++attempt) {
          Vec<Int> w(static_cast<size_t>(n));
          for (auto& x : w) x = Int(wrng.range(1, 19));
          Vec<Int> lam = detail::row_poly_apply(w, Bf, h);
          if (vec_is_zero(lam)) continue;
          if (!vec_is_zero(detail::row_poly_apply(lam, Bf, g)))
            throw Error("eigen_decompose: block not semisimple");
          std::vector<Vec<Int>> u{lam};
          for (long j = 1; j < d; ++j) u.push_back(detail::row_times(u.back(), Bf));
          auto entry = [&](long col) {
            QPoly cc(static_cast<size_t>(d), Rat(0));
            for (long k = 0; k < d; ++k) {
              Rat acc(0);
              for (long i = k + 1; i <= d; ++i)
                if (sgn(g[static_cast<size_t>(i)]) != 0)
                  acc += Rat(g[static_cast<size_t>(i)]) *
                         Rat(u[static_cast<size_t>(i - 1 - k)][static_cast<size_t>(col)]);
              cc[static_cast<size_t>(k)] = acc;
            }
            poly_trim(cc);
            return NFElem(Kold, std::move(cc));
          };
          Vec<NFElem> full(static_cast<size_t>(n), NFElem(0));
          for (long col = 0; col < n; ++col) full[static_cast<size_t>(col)] = entry(col);
          if (vec_is_zero(full)) continue;
          Mat<Rat> zf = flatten_zeta(S.D, m);
          Vec<NFElem> fullM(static_cast<size_t>(n), NFElem(0));
          for (size_t k = 0; k < static_cast<size_t>(n); ++k) {
            if (is_zero(full[k])) continue;
            for (size_t j = 0; j < static_cast<size_t>(n); ++j)
              if (!eiscong::is_zero(zf[k][j])) fullM[j] = fullM[j] + full[k] * NFElem(zf[k][j]);
          }
          long c0 = -1;
          for (long cix = 0; cix < n; ++cix)
            if (!is_zero(full[static_cast<size_t>(cix)])) {
              c0 = cix;
              break;
            }
          NFElem z = fullM[static_cast<size_t>(c0)] / full[static_cast<size_t>(c0)];
          bool prop = true;
          for (long cix = 0; cix < n && prop; ++cix)
            if (!(fullM[static_cast<size_t>(cix)] == z * full[static_cast<size_t>(cix)])) prop = false;
          if (!prop) break;  // unseparated: next recipe
          Vec<NFElem> row(static_cast<size_t>(S.D), NFElem(0));
          for (long j = 0; j < S.D; ++j) row[static_cast<size_t>(j)] = full[static_cast<size_t>(j * phi)];
          for (long l : E.hecke_primes) {
            if (N % l == 0) continue;
            Mat<NFElem> Tt = mat_zero<NFElem>(static_cast<size_t>(S.D), static_cast<size_t>(S.D));
            const Mat<Cyclo>& T = hecke_matrix(S, l);
            for (size_t i = 0; i < T.size(); ++i)
              for (size_t j = 0; j < T.size(); ++j)
                if (!is_zero(T[i][j])) Tt[i][j] = cyclo_substitute(T[i][j], z, m);
            Vec<NFElem> img = vec_mat(row, Tt);
            long cj = -1;
            for (long j = 0; j < S.D; ++j)
              if (!is_zero(row[static_cast<size_t>(j)])) {
                cj = j;
                break;
              }
            if (cj < 0) {
              prop = false;
              break;
            }
            NFElem al = img[static_cast<size_t>(cj)] / row[static_cast<size_t>(cj)];
            for (long j = 0; j < S.D && prop; ++j)
              if (!(img[static_cast<size_t>(j)] == al * row[static_cast<size_t>(j)])) prop = false;
            if (!prop) break;
          }
          if (prop) verified = true;
          else break;
        }
        if (!verified) {
          ok = false;
          break;
        }
        old_found.push_back(OldClassInfo{g, e / 2});
        continue;
      }
      // ---- a newform class ----
      NewformClass C;
      C.N = N;
      C.theta = S.theta;
      C.m = m;
      C.g = g;
      C.K = std::make_shared<NumberField>(g);
      long d = poly_deg(g);
      IPoly h = ipoly_exact_div(ipoly_exact_div(cp_f, g), g);  // cp_f / g^2

      Rng wrng(seed ^ fnv1a64("seed" + std::to_string(N) + character_token(S.theta) +
                              std::to_string(recipe)));
      bool class_ok = false;
      for (int attempt = 0; attempt < 4 && !class_ok; ++attempt) {
        Vec<Int> w(static_cast<size_t>(n));
        for (auto& x : w) x = Int(wrng.range(1, 19));
        Vec<Int> lam = detail::row_poly_apply(w, Bf, h);
        if (vec_is_zero(lam)) continue;
        // semisimplicity safeguard: lam g(Bf) = 0
        {
          Vec<Int> t = detail::row_poly_apply(lam, Bf, g);
          if (!vec_is_zero(t)) throw Error("eigen_decompose: block not semisimple");
        }
        // star projections
        Mat<Rat> star_f = flatten_matrix(E.star, m);
        auto star_apply = [&](const Vec<Int>& v) {
          Vec<Rat> vr(v.size());
          for (size_t i = 0; i < v.size(); ++i) vr[i] = Rat(v[i]);
          Vec<Rat> img = vec_mat(vr, star_f);
          Vec<Int> out(v.size());
          for (size_t i = 0; i < v.size(); ++i) {
            Rat t = img[i];
            if (t.get_den() != 1) throw Error("eigen_decompose: star not integral");
            out[i] = t.get_num();
          }
          return out;
        };
        Vec<Int> lam_star = star_apply(lam);
        Vec<Int> lam_plus(lam.size()), lam_minus(lam.size());
        for (size_t i = 0; i < lam.size(); ++i) {
          lam_plus[i] = lam[i] + lam_star[i];
          lam_minus[i] = lam[i] - lam_star[i];
        }
        if (vec_is_zero(lam_plus) || vec_is_zero(lam_minus)) continue;

        // Krylov rows u_j = lam B^j, j < d; the eigenrow is
        // Lambda = sum_k xbar^k sum_{i >= k+1} g_i u_{i-1-k}, entrywise
        auto krylov = [&](const Vec<Int>& lam0) {
          std::vector<Vec<Int>> u{lam0};
          for (long j = 1; j < d; ++j) u.push_back(detail::row_times(u.back(), Bf));
          return u;
        };
        auto lambda_entry = [&](const std::vector<Vec<Int>>& u, long col) {
          QPoly cc(static_cast<size_t>(d), Rat(0));
          for (long k = 0; k < d; ++k) {
            Rat acc(0);
            for (long i = k + 1; i <= d; ++i)
              if (sgn(g[static_cast<size_t>(i)]) != 0)
                acc += Rat(g[static_cast<size_t>(i)]) *
                       Rat(u[static_cast<size_t>(i - 1 - k)][static_cast<size_t>(col)]);
            cc[static_cast<size_t>(k)] = acc;
          }
          poly_trim(cc);
          return NFElem(C.K, std::move(cc));
        };
        auto up = krylov(lam_plus);
        auto um = krylov(lam_minus);
        // collapsed D-rows (the (j,0)-coordinates, valid once the zeta
        // eigenproperty below is verified)
        auto collapse = [&](const std::vector<Vec<Int>>& u) {
          Vec<NFElem> row(static_cast<size_t>(S.D), NFElem(0));
          for (long j = 0; j < S.D; ++j) row[static_cast<size_t>(j)] = lambda_entry(u, j * phi);
          return row;
        };
        Vec<NFElem> rp = collapse(up);
        Vec<NFElem> rm = collapse(um);
        if (vec_is_zero(rp) || vec_is_zero(rm)) continue;

        // sigma_z-twisted action of a K0 matrix on D-rows
        auto sub_matrix = [&](const Mat<Cyclo>& T, const NFElem& zz) {
          Mat<NFElem> out = mat_zero<NFElem>(T.size(), T.size());
          for (size_t i = 0; i < T.size(); ++i)
            for (size_t j = 0; j < T.size(); ++j)
              if (!is_zero(T[i][j])) out[i][j] = cyclo_substitute(T[i][j], zz, m);
          return out;
        };

        // z from the flattened zeta action on the full eigenrow
        Mat<Rat> zf = flatten_zeta(S.D, m);
        Vec<NFElem> Rp_full(static_cast<size_t>(n), NFElem(0));
        for (long col = 0; col < n; ++col) Rp_full[static_cast<size_t>(col)] = lambda_entry(up, col);
        // z := (Lambda M_zeta)_c / Lambda_c at the first nonzero column
        Vec<NFElem> RpM(static_cast<size_t>(n), NFElem(0));
        {
          for (size_t k = 0; k < static_cast<size_t>(n); ++k) {
            if (is_zero(Rp_full[k])) continue;
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
              if (eiscong::is_zero(zf[k][j])) continue;
              RpM[j] = RpM[j] + Rp_full[k] * NFElem(zf[k][j]);
            }
          }
        }
        long c0 = -1;
        for (long cix = 0; cix < n; ++cix)
          if (!is_zero(Rp_full[static_cast<size_t>(cix)])) {
            c0 = cix;
            break;
          }
        if (c0 < 0) continue;
        NFElem z = RpM[static_cast<size_t>(c0)] / Rp_full[static_cast<size_t>(c0)];
        // verify full proportionality and Phi_m(z) = 0
        bool zok = true;
        for (long cix = 0; cix < n && zok; ++cix)
          if (!(RpM[static_cast<size_t>(cix)] == z * Rp_full[static_cast<size_t>(cix)])) zok = false;
        if (!zok) continue;
        {
          const IPoly& phim = cyclotomic_polynomial(m);
          NFElem acc(0), zp(1);
          for (size_t i = 0; i < phim.size(); ++i) {
            acc = acc + NFElem(Rat(phim[i])) * zp;
            zp = zp * z;
          }
          if (!is_zero(acc)) throw Error("eigen_decompose: zeta image fails Phi_m");
        }
        C.z = z;

        // eigenvalues a_l for the stored primes, with full verification
        Mat<NFElem> Ttilde;
        bool prop_ok = true;
        for (long l : E.hecke_primes) {
          Ttilde = sub_matrix(hecke_matrix(S, l), C.z);
          Vec<NFElem> img = vec_mat(rp, Ttilde);
          long cj = -1;
          for (long j = 0; j < S.D; ++j)
            if (!is_zero(rp[static_cast<size_t>(j)])) {
              cj = j;
              break;
            }
          NFElem al = img[static_cast<size_t>(cj)] / rp[static_cast<size_t>(cj)];
          for (long j = 0; j < S.D && prop_ok; ++j)
            if (!(img[static_cast<size_t>(j)] == al * rp[static_cast<size_t>(j)])) prop_ok = false;
          if (!prop_ok) break;
          // the minus row must carry the same eigenvalue
          Vec<NFElem> img2 = vec_mat(rm, Ttilde);
          for (long j = 0; j < S.D && prop_ok; ++j)
            if (!(img2[static_cast<size_t>(j)] == al * rm[static_cast<size_t>(j)])) prop_ok = false;
          if (!prop_ok) break;
          C.a[l] = al;
        }
        if (!prop_ok) continue;

        C.ePlus = rp;
        C.eMinus = rm;

        // ---- dual system ----
        NFElem zinv = inverse(C.z);
        NFElem xstar(0);
        {
          // eigenvalue of B for the dual system, scaled like Bf
          NFElem acc(0);
          for (auto& [l, wgt] : ops) {
            if (l == 0)
              acc = acc + NFElem(Rat(wgt)) * zinv;
            else
              acc = acc + NFElem(Rat(wgt)) * C.abar(l);
          }
          xstar = acc * NFElem(Rat(Lf));
        }
        {
          NFElem gat(0), xp(1);
          for (size_t i = 0; i < g.size(); ++i) {
            gat = gat + NFElem(Rat(g[i])) * xp;
            xp = xp * xstar;
          }
          if (!is_zero(gat)) throw Error("eigen_decompose: dual eigenvalue not a root of g");
        }
        C.dual_x = xstar;
        // Lambda* = lambda q(B, x*), collapsed with powers of x*
        auto build_dual = [&](const std::vector<Vec<Int>>& u) {
          Vec<NFElem> row(static_cast<size_t>(S.D), NFElem(0));
          for (long j = 0; j < S.D; ++j) {
            NFElem acc(0), xk(1);
            for (long k = 0; k < d; ++k) {
              Rat coeff(0);
              for (long i = k + 1; i <= d; ++i)
                if (sgn(g[static_cast<size_t>(i)]) != 0)
                  coeff += Rat(g[static_cast<size_t>(i)]) *
                           Rat(u[static_cast<size_t>(i - 1 - k)][static_cast<size_t>(j * phi)]);
              acc = acc + NFElem(coeff) * xk;
              xk = xk * xstar;
            }
            row[static_cast<size_t>(j)] = acc;
          }
          return row;
        };
        Vec<NFElem> dp = build_dual(up);
        Vec<NFElem> dm = build_dual(um);
        if (vec_is_zero(dp) || vec_is_zero(dm)) continue;
        // verify dual eigenrows under sigma_{z^{-1}}
        bool dual_ok = true;
        for (long l : E.hecke_primes) {
          if (N % l == 0) continue;  // dual relation abar only for good primes
          Mat<NFElem> Td = sub_matrix(hecke_matrix(S, l), zinv);
          NFElem al = C.abar(l);
          Vec<NFElem> i1 = vec_mat(dp, Td), i2 = vec_mat(dm, Td);
          for (long j = 0; j < S.D && dual_ok; ++j) {
            if (!(i1[static_cast<size_t>(j)] == al * dp[static_cast<size_t>(j)])) dual_ok = false;
            if (!(i2[static_cast<size_t>(j)] == al * dm[static_cast<size_t>(j)])) dual_ok = false;
          }
          if (!dual_ok) break;
        }
        if (!dual_ok) continue;
        C.dualPlus = dp;
        C.dualMinus = dm;
        class_ok = true;
      }
      if (!class_ok) {
        ok = false;
        break;
      }
      C.mult = 1;
      found.push_back(std::move(C));
    }
    if (ok) {
      E.newclasses = std::move(found);
      E.oldclasses = std::move(old_found);
      // normalize functionals deterministically
      for (auto& C : E.newclasses) {
        auto normalize = [](Vec<NFElem>& row) {
          // first nonzero coordinate = 1, then integer content 1
          size_t j0 = 0;
          while (j0 < row.size() && is_zero(row[j0])) ++j0;
          if (j0 == row.size()) return;
          NFElem inv = inverse(row[j0]);
          for (auto& x : row) x = x * inv;
          Int den(1), num(0);
          for (auto& x : row)
            for (auto& cc : x.c) den = int_lcm(den, Int(cc.get_den()));
          for (auto& x : row)
            for (auto& cc : x.c) num = int_gcd(num, Int(cc.get_num() * den / cc.get_den()));
          if (sgn(num) == 0) num = 1;
          Rat scale = make_rat(den, num);
          for (auto& x : row)
            for (auto& cc : x.c) cc *= scale;
        };
        normalize(C.ePlus);
        normalize(C.eMinus);
        normalize(C.dualPlus);
        normalize(C.dualMinus);
      }
      return E;
    }
  }
  throw InsufficientSeparation("eigen_decompose: recipe ladder exhausted at N=" +
                               std::to_string(N));
}

// multiplicative extension of the eigenvalues
inline NFElem eigenvalue_an(const NewformClass& C, long nval) {
  if (nval <= 0) throw Error("eigenvalue_an: n must be positive");
  NFElem out(1);
  for (auto& [l, e] : factor_long(nval)) {
    NFElem al = C.a.at(l);
    // a_{l^k} recursion with nebentype
    NFElem prev(1), cur = al;
    for (int k = 2; k <= e; ++k) {
      NFElem next;
      if (C.N % l == 0)
        next = cur * al;
      else
        next = al * cur - C.theta_value(l) * NFElem(Rat(l)) * prev;
      prev = cur;
      cur = next;
    }
    out = out * (e == 0 ? NFElem(1) : cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// twisted L-value: sum_{a mod c} psibar(a) <e_sign, {oo -> a/c}> as an
// element of K(mu_{ord psi}); well-defined up to one global unit per
// (class, sign) from the functional normalization.
inline CycloExt<NFElem> twisted_lvalue(const EigenData& E, const NewformClass& C, bool dual,
                                       const DirichletCharacter& psi, int sign) {
  if (!psi.is_primitive()) throw NotPrimitive("twisted_lvalue: psi must be primitive");
  long c = psi.modulus;
  if (gcd_long(c, C.N) != 1) throw Error("twisted_lvalue: conductor must be prime to N");
  bool even = psi.is_even();
  if ((sign == +1) != even) throw SignMismatch("twisted_lvalue: sign must equal psi(-1)");
  const Vec<NFElem>& row = dual ? (sign > 0 ? C.dualPlus : C.dualMinus)
                                : (sign > 0 ? C.ePlus : C.eMinus);
  NFElem zz = dual ? inverse(C.z) : C.z;
  long mp = std::max<long>(psi.order(), 1);
  auto psibar = char_conj(psi);
  CycloExt<NFElem> total(NFElem(0));
  for (long aa = 0; aa < c; ++aa) {
    auto k = psibar.exponent(aa);
    if (!k && c > 1) continue;
    Vec<Cyclo> sym = path_symbol(*E.space, aa, c);
    NFElem val(0);
    for (long j = 0; j < E.space->D; ++j)
      if (!is_zero(sym[static_cast<size_t>(j)]))
        val = val + row[static_cast<size_t>(j)] * cyclo_substitute(sym[static_cast<size_t>(j)], zz, C.m);
    CycloExt<NFElem> term = cyclo_zeta<NFElem>(mp, k ? *k : 0);
    total = total + term * CycloExt<NFElem>(val);
  }
  return total;
}

}  // namespace eiscong
