#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rc/params.hpp"

using rc::ModelParams;

TEST_CASE("q=25 closed forms") {
  auto p = ModelParams::from_q(25.0);
  CHECK(p.p_c == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK(p.beta_c == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  // c^2 = sqrt(q) + 2 = 7
  CHECK(p.c == doctest::Approx(std::sqrt(7.0)).epsilon(1e-13));
  // cross-check against lambda = arccosh(5/2)
  double lam = std::acosh(2.5);
  CHECK(p.c == doctest::Approx(std::exp(lam / 2) + std::exp(-lam / 2)).epsilon(1e-13));
  CHECK(p.c_b == doctest::Approx(std::exp(lam / 2)).epsilon(1e-13));
}

TEST_CASE("q <= 4 rejected") {
  CHECK_THROWS_AS(ModelParams::from_q(4.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams::from_q(2.0), std::domain_error);
  CHECK_THROWS_AS(ModelParams::from_q(-1.0), std::domain_error);
}

TEST_CASE("self-dual predicate") {
  auto p = ModelParams::from_q(25.0);
  CHECK(rc::check_selfdual(p.J, p.U, 1e-10));
  CHECK_FALSE(rc::check_selfdual(1.0, 0.0, 1e-10));
  // sign-convention regression: sinh 0 = 0 but e^0 = 1
  CHECK_FALSE(rc::check_selfdual(0.0, 0.0, 1e-10));
}

TEST_CASE("identities across a q grid") {
  double prev_lambda = 0, prev_c = 0, prev_u = 0, prev_j = 1e9;
  for (double q = 4.25; q <= 100.0; q += 0.25) {
    auto p = ModelParams::from_q(q);  // constructor validates to 1e-12
    double rq = std::sqrt(q);
    CHECK(std::fabs(rq - 2 * std::cosh(p.lambda)) <= 1e-10 * rq);
    CHECK(std::fabs(p.c * p.c - (rq + 2)) <= 1e-10 * p.c * p.c);
    CHECK(std::fabs(p.c_b + 1 / p.c_b - p.c) <= 1e-10 * p.c);
    CHECK(std::fabs(std::sinh(2 * p.J) - std::exp(-2 * p.U)) <= 1e-10);
    CHECK(p.lambda > prev_lambda);
    CHECK(p.c > prev_c);
    CHECK(p.U > prev_u);
    CHECK(p.J < prev_j);
    prev_lambda = p.lambda;
    prev_c = p.c;
    prev_u = p.U;
    prev_j = p.J;
  }
}

TEST_CASE("json round trip") {
  auto p = ModelParams::from_q(6.5);
  auto q = ModelParams::from_json(p.to_json());
  CHECK(q.q == doctest::Approx(p.q).epsilon(1e-15));
  CHECK(q.c == doctest::Approx(p.c).epsilon(1e-15));
}
