#include <doctest.h>

#include <cmath>
#include <numbers>

#include "maxpart/asymptotics.hpp"
#include "maxpart/exact_count.hpp"

using namespace maxpart;

TEST_CASE("exponents b and b1") {
  CHECK(exponent_b(ProfileSet({1})) == 1);
  CHECK(exponent_b(ProfileSet({1, 2})) == Rational(9, 4));
  CHECK(exponent_b(ProfileSet({0, 1})) == 1);
  CHECK(exponent_b1(ProfileSet({1})) == Rational(-1, 4));
  CHECK(exponent_b1(ProfileSet({2, 3})) == Rational(-1, 2));
  CHECK(exponent_b1(ProfileSet({0, 1})) == 0);
}

TEST_CASE("Hardy-Ramanujan prefactor") {
  const DualVector beta(ProfileSet({1}), {std::numbers::pi / std::sqrt(6.0)});
  const auto lattice = enumerate_qj(beta.set());
  const auto sigma = sigma_matrix(beta);
  CHECK(prefactor_c(beta, sigma, lattice) ==
        doctest::Approx(1.0 / (4.0 * std::sqrt(3.0))).epsilon(1e-9));
  CHECK(prefactor_c_from_c1(beta, sigma, lattice) ==
        doctest::Approx(prefactor_c(beta, sigma, lattice)).epsilon(1e-12));
}

TEST_CASE("leading estimate reproduces the Hardy-Ramanujan formula") {
  for (std::uint64_t n : {50, 500}) {
    const auto e = estimate_p(MomentVector(ProfileSet({1}), {1.0}), n, EstimateMode::Leading);
    const double x = static_cast<double>(n);
    const double hr = std::numbers::pi * std::sqrt(2.0 * x / 3.0) - std::log(4.0 * x * std::sqrt(3.0));
    CHECK(e.log_estimate == doctest::Approx(hr).epsilon(1e-9));
  }
}

TEST_CASE("refined estimate tracks p(n)") {
  double prev = 0.01;
  for (std::uint64_t n : {400, 1600}) {
    const auto e = estimate_p(MomentVector(ProfileSet({1}), {1.0}), n, EstimateMode::Refined);
    const double err = std::abs(e.log_estimate - std::log(count_pn(n).get_d()));
    CHECK(err < prev);
    prev = err;
    CHECK(e.beta_hat.has_value());
  }
}

TEST_CASE("an infeasible profile estimates to zero") {
  // N = (10, 31) has odd N_1 + N_2.
  const auto e = estimate_p(MomentVector(ProfileSet({1, 2}), {1.0, 1.0}), 10,
                            EstimateMode::Refined);
  CHECK_FALSE(e.feasible);
  REQUIRE(e.estimate.has_value());
  CHECK(*e.estimate == 0.0);
  CHECK(std::isinf(e.log_estimate));
}

TEST_CASE("LCLT factor for one constraint") {
  // |Q| (2 pi)^{-1/2} S^{-1/2}.
  GramMatrix s{ProfileSet({1}), Eigen::MatrixXd::Constant(1, 1, 4.0)};
  const auto lattice = enumerate_qj(s.set);
  CHECK(lclt_factor(s, lattice) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi))));
}

TEST_CASE("Euler-Maclaurin gap closes for a shifted polynomial") {
  const DualVector gamma(ProfileSet({0, 1}), {1.0, 1.0});
  double prev = INFINITY;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const auto r = em_sum_check(gamma, t);
    const double gap = std::abs(r.direct - r.asymptotic);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}
