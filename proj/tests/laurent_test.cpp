#include <catch2/catch_amalgamated.hpp>

#include "plink/laurent.hpp"

using plink::LaurentPolynomial;

TEST_CASE("arithmetic basics") {
  auto A = LaurentPolynomial::monomial(1, 1);
  LaurentPolynomial one(1);
  CHECK((A * A).to_string() == "A^2");
  CHECK((A + A).to_string() == "2A");
  CHECK((A - A).is_zero());
  CHECK((one + A * A).coefficient(2) == 1);
  CHECK((one + A * A).coefficient(0) == 1);
}

TEST_CASE("printing") {
  CHECK(LaurentPolynomial{}.to_string() == "0");
  CHECK(LaurentPolynomial(1).to_string() == "1");
  auto p = LaurentPolynomial::monomial(2, 3) + LaurentPolynomial::monomial(-1, 0) +
           LaurentPolynomial::monomial(1, -4);
  CHECK(p.to_string() == "2A^3 - 1 + A^-4");
}

TEST_CASE("delta and (-A)^k") {
  auto d = plink::bracket_delta();
  CHECK(d.coefficient(2) == -1);
  CHECK(d.coefficient(-2) == -1);
  CHECK(d.coefficient(0) == 0);
  CHECK(plink::minus_a_power(0) == LaurentPolynomial(1));
  CHECK(plink::minus_a_power(3) == LaurentPolynomial::monomial(-1, 3));
  CHECK(plink::minus_a_power(-3) == LaurentPolynomial::monomial(-1, -3));
  CHECK(plink::minus_a_power(2) == LaurentPolynomial::monomial(1, 2));
  CHECK(plink::minus_a_power(-6) == LaurentPolynomial::monomial(1, -6));
}

TEST_CASE("mirror swaps A and A^-1") {
  auto p = LaurentPolynomial::monomial(2, 5) + LaurentPolynomial::monomial(3, -1);
  auto m = p.mirrored();
  CHECK(m.coefficient(-5) == 2);
  CHECK(m.coefficient(1) == 3);
  CHECK(m.mirrored() == p);
}

TEST_CASE("pow") {
  auto d = plink::bracket_delta();
  CHECK(d.pow(0) == LaurentPolynomial(1));
  CHECK(d.pow(2) == d * d);
  CHECK(d.pow(3) == d * d * d);
}

TEST_CASE("exponent congruence mod 4") {
  auto p = LaurentPolynomial::monomial(1, 4) + LaurentPolynomial::monomial(-2, -8) +
           LaurentPolynomial::monomial(5, 0);
  CHECK(plink::mod4_exponents_congruent(p));
  auto q = p + LaurentPolynomial::monomial(1, 3);
  CHECK_FALSE(plink::mod4_exponents_congruent(q));
  int e1 = 0, e2 = 0;
  REQUIRE(plink::mod4_violating_pair(q, e1, e2));
  CHECK(((e1 - e2) % 4 + 4) % 4 != 0);
  CHECK(plink::mod4_exponents_congruent(LaurentPolynomial{}));
}
