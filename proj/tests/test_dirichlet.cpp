#include "eiscong/dirichlet.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace eiscong;

namespace {

DirichletCharacter quadratic_mod5() {
  for (auto& c : enumerate_characters(5, Parity::Even))
    if (!c.is_trivial()) return c;
  throw Error("unreachable");
}

}  // namespace

TEST_CASE("character enumeration") {
  CHECK(enumerate_characters(1).size() == 1);
  auto even5 = enumerate_characters(5, Parity::Even);
  REQUIRE(even5.size() == 2);
  CHECK(even5[0].is_trivial());
  CHECK(enumerate_characters(12).size() == 4);
  // deterministic order and token round trip
  for (long N = 1; N <= 20; ++N) {
    auto all = enumerate_characters(N);
    CHECK(static_cast<long>(all.size()) == euler_phi_long(N));
    for (auto& chi : all) {
      auto back = character_from_token(character_token(chi));
      CHECK(back == chi);
    }
  }
}

TEST_CASE("character structure") {
  auto chi5 = quadratic_mod5();
  CHECK(chi5.order() == 2);
  CHECK(chi5.conductor() == 5);
  CHECK(chi5.is_even());
  CHECK(chi5.value(2) == Cyclo(-1));
  CHECK(chi5.value(4) == Cyclo(1));
  CHECK(is_zero(chi5.value(10)));
  // multiplicativity on all pairs
  for (long N : {8L, 9L, 12L, 15L}) {
    for (auto& chi : enumerate_characters(N)) {
      for (long a = 1; a < N; ++a)
        for (long b = 1; b < N; ++b)
          CHECK(chi.value(a * b) == chi.value(a) * chi.value(b));
      // parity flag matches chi(-1)
      CHECK(chi.value(N - 1) == (chi.is_even() ? Cyclo(1) : Cyclo(-1)));
    }
  }
  // induced primitive character agrees on units of the bigger modulus
  auto ext = char_extend(quadratic_mod5(), 15);
  CHECK(ext.conductor() == 5);
  auto prim = char_primitive(ext);
  CHECK(prim == quadratic_mod5());
  for (long a = 1; a < 15; ++a)
    if (gcd_long(a, 15) == 1) CHECK(ext.value(a) == prim.value(a));
}

TEST_CASE("gauss sums") {
  DirichletCharacter triv1;
  triv1.modulus = 1;
  CHECK(gauss_sum(triv1) == Cyclo(1));

  auto chi5 = quadratic_mod5();
  Cyclo expect = cyclo_zeta(5, 1) + cyclo_zeta(5, 4) - cyclo_zeta(5, 2) - cyclo_zeta(5, 3);
  CHECK(gauss_sum(chi5) == expect);
  CHECK(gauss_sum(chi5) * gauss_sum(chi5) == Cyclo(5));

  // g(chi) g(chibar) = chi(-1) N, exactly, small conductors (the acceptance
  // suite runs the full N <= 50 sweep)
  for (long N = 2; N <= 24; ++N) {
    for (auto& chi : enumerate_characters(N)) {
      if (!chi.is_primitive()) continue;
      Cyclo lhs = gauss_sum(chi) * gauss_sum(char_conj(chi));
      CHECK(lhs == (chi.is_even() ? Cyclo(N) : Cyclo(-N)));
    }
  }
  CHECK_THROWS_AS(gauss_sum(char_extend(quadratic_mod5(), 15)), NotPrimitive);
}

TEST_CASE("generalized Bernoulli numbers") {
  DirichletCharacter triv1;
  triv1.modulus = 1;
  CHECK(bernoulli_general(2, triv1) == Cyclo(make_rat(Int(1), Int(6))));
  CHECK(bernoulli_general(1, triv1) == Cyclo(make_rat(Int(1), Int(2))));  // +1/2 convention

  auto chi5 = quadratic_mod5();
  CHECK(bernoulli_general(2, chi5) == Cyclo(make_rat(Int(4), Int(5))));

  // -2 L(chi,-1) = B_2(chi) for even primitive chi
  for (long N = 2; N <= 20; ++N) {
    for (auto& chi : enumerate_characters(N, Parity::Even)) {
      if (!chi.is_primitive()) continue;
      CHECK(Cyclo(-2) * dirichlet_L_negative(chi, 1) == bernoulli_general(2, chi));
    }
  }

  // parity vanishing: B_{n,chi} = 0 when chi(-1) != (-1)^n, n <= 4, cond <= 30
  for (long N = 1; N <= 30; ++N) {
    for (auto& chi : enumerate_characters(N)) {
      if (!chi.is_primitive()) continue;
      for (unsigned n = 1; n <= 4; ++n) {
        bool even_n = (n % 2 == 0);
        if (chi.is_even() != even_n && !(N == 1 && n == 1))
          CHECK(is_zero(bernoulli_general(n, chi)));
      }
    }
  }

  // denominator of B_2(chi) divides 6N
  for (long N = 2; N <= 20; ++N) {
    for (auto& chi : enumerate_characters(N, Parity::Even)) {
      if (!chi.is_primitive()) continue;
      Cyclo b = bernoulli_general(2, chi);
      Int lcm_den(1);
      for (auto& co : b.c) lcm_den = int_lcm(lcm_den, Int(co.get_den()));
      CHECK(Int(6 * N) % lcm_den == 0);
    }
  }

  // imprimitive extension carries Euler factors: trivial char mod 11
  CHECK(bernoulli_general_at(2, triv1, 11) == Cyclo(make_rat(Int(-5), Int(3))));
  // consistency: B_2(chi mod 15) = B_2(chi) (1 - chi(3) 3)
  auto chi5_15 = char_extend(chi5, 15);
  CHECK(bernoulli_general_at(2, chi5_15, 15) ==
        bernoulli_general(2, chi5) * (Cyclo(1) - chi5.value(3) * Cyclo(3)));
}

TEST_CASE("L-values at negative integers") {
  DirichletCharacter triv1;
  triv1.modulus = 1;
  CHECK(dirichlet_L_negative(triv1, 1) == Cyclo(make_rat(Int(-1), Int(12))));
  CHECK(dirichlet_L_negative(quadratic_mod5(), 1) == Cyclo(make_rat(Int(-2), Int(5))));
  for (auto& chi : enumerate_characters(5, Parity::Odd))
    if (chi.is_primitive()) CHECK(is_zero(dirichlet_L_negative(chi, 1)));
}

TEST_CASE("circular units") {
  auto chi5 = quadratic_mod5();
  auto cu = circular_unit(chi5);
  REQUIRE(cu.exact.has_value());
  // (1-z)(1-z^4)/((1-z^2)(1-z^3)) = (3-sqrt5)/2 = 1 - z - z^4
  Cyclo expect = Cyclo(1) - cyclo_zeta(5, 1) - cyclo_zeta(5, 4);
  CHECK(*cu.exact == expect);
  CHECK(cyclo_conj(*cu.exact) == *cu.exact);     // fixed by conjugation
  CHECK(cyclo_norm(*cu.exact) == Rat(1));        // unit of norm 1

  // Galois equivariance for quadratic chi: sigma_b(c) = c^{chi(b)}
  for (long b = 2; b <= 4; ++b) {
    Cyclo img = cyclo_galois(*cu.exact, b);
    if (chi5.value(b) == Cyclo(1))
      CHECK(img == *cu.exact);
    else
      CHECK(img == inverse(*cu.exact));
  }

  // quadratic even characters of conductor 8, 12, 13 also give exact units
  for (long N : {8L, 12L, 13L}) {
    for (auto& chi : enumerate_characters(N, Parity::Even)) {
      if (!chi.is_primitive() || chi.order() != 2) continue;
      auto u = circular_unit(chi);
      REQUIRE(u.exact.has_value());
      CHECK(cyclo_conj(*u.exact) == *u.exact);
      Rat nrm = cyclo_norm(*u.exact);
      CHECK((nrm == Rat(1) || nrm == Rat(-1)));
    }
  }

  DirichletCharacter triv1;
  triv1.modulus = 1;
  CHECK_THROWS_AS(circular_unit(triv1), TrivialOrOddCharacter);
  for (auto& chi : enumerate_characters(5, Parity::Odd))
    if (chi.is_primitive()) CHECK_THROWS_AS(circular_unit(chi), TrivialOrOddCharacter);
}

TEST_CASE("character products") {
  auto chi5 = quadratic_mod5();
  auto chi12 = character_from_token("chi_12.1");
  auto prod = char_mul(chi5, chi12);
  CHECK(prod.modulus == 60);
  for (long a = 1; a < 60; ++a)
    if (gcd_long(a, 60) == 1) CHECK(prod.value(a) == chi5.value(a) * chi12.value(a));
  auto cc = char_mul(chi5, char_conj(chi5));
  CHECK(cc.is_trivial());
}
