#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "maxpart/error.hpp"
#include "maxpart/maxent_continuous.hpp"

using namespace maxpart;

namespace {

// int_0^inf x^j / (e^{b x^d} - 1) dx = Gamma(s) zeta(s) / (d b^s), s = (j+1)/d.
double monomial_moment(unsigned j, unsigned d, double b) {
  const double s = (j + 1.0) / d;
  return boost::math::tgamma(s) * boost::math::zeta(s) / (d * std::pow(b, s));
}

// int_0^inf x / (e^{a + b x} - 1) dx = Li_2(e^{-a}) / b^2, by its series.
double shifted_first_moment(double a, double b) {
  double li2 = 0.0;
  for (int k = 1; k < 2000; ++k) li2 += std::exp(-k * a) / (static_cast<double>(k) * k);
  return li2 / (b * b);
}

}  // namespace

TEST_CASE("moments of a single power match Gamma zeta") {
  for (unsigned d : {1u, 2u, 3u}) {
    for (double b : {0.3, 1.0, 2.5}) {
      const DualVector beta(ProfileSet({d}), {b});
      for (unsigned j = d; j <= d + 3; ++j) {
        CAPTURE(d);
        CAPTURE(j);
        CHECK(boltzmann_moment(beta, j) == doctest::Approx(monomial_moment(j, d, b)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("a constant term enters through the dilogarithm") {
  const DualVector beta(ProfileSet({0, 1}), {0.7, 1.3});
  CHECK(forward_map(beta)[1] == doctest::Approx(shifted_first_moment(0.7, 1.3)).epsilon(1e-10));
}

TEST_CASE("Sigma is minus the Jacobian of the forward map") {
  const DualVector beta(ProfileSet({1, 2, 3}), {1.2, 0.4, 0.1});
  const auto sigma = sigma_matrix(beta);
  const QuadratureOptions tight{1e-12, 1e-16, 4000};
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> up(beta.beta().begin(), beta.beta().end());
    std::vector<double> down = up;
    const double h = 1e-5 * std::abs(up[k]);
    up[k] += h;
    down[k] -= h;
    const auto fu = forward_map(DualVector(beta.set(), up), tight);
    const auto fd = forward_map(DualVector(beta.set(), down), tight);
    for (std::size_t i = 0; i < 3; ++i) {
      const double fd_entry = -(fu[i] - fd[i]) / (2 * h);
      CHECK(sigma.entries(i, k) == doctest::Approx(fd_entry).epsilon(1e-5));
    }
  }
  CHECK(sigma.entries.isApprox(sigma.entries.transpose()));
}

TEST_CASE("Hardy-Ramanujan solution and M scaling") {
  const ProfileSet J({1});
  for (double a : {0.25, 1.0, 4.0, 9.0}) {
    const auto r = solve_beta(MomentVector(J, {a}));
    REQUIRE(r.converged);
    CHECK(r.beta[0] == doctest::Approx(std::numbers::pi / std::sqrt(6.0 * a)).epsilon(1e-9));
    CHECK(m_alpha(r.beta) ==
          doctest::Approx(std::numbers::pi * std::sqrt(2.0 * a / 3.0)).epsilon(1e-9));
  }
}

TEST_CASE("forward then solve recovers beta") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> b1(0.5, 2.0);
  std::uniform_real_distribution<double> b2(0.05, 1.0);
  const ProfileSet J({1, 2});
  for (int seed = 0; seed < 10; ++seed) {
    const DualVector beta(J, {b1(gen), b2(gen)});
    const auto alpha = forward_map(beta);
    const auto r = solve_beta(alpha);
    REQUIRE(r.converged);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(r.beta[i] == doctest::Approx(beta[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("M equals alpha . beta plus the log partition at the optimum") {
  const ProfileSet J({1, 2, 3});
  const MomentVector alpha(J, {4.31168, 3.86652, 3.65774});
  const auto r = solve_beta(alpha);
  REQUIRE(r.converged);
  double dot = 0.0;
  for (std::size_t i = 0; i < 3; ++i) dot += alpha[i] * r.beta[i];
  CHECK(m_alpha(r.beta) ==
        doctest::Approx(dot + log_partition_continuous(r.beta)).epsilon(1e-8));
}

TEST_CASE("worked examples") {
  const auto five = solve_beta(
      MomentVector(ProfileSet({0, 1, 2, 3, 4}), {12.8748, 6.698, 4.66192, 3.72617, 3.15877}));
  REQUIRE(five.converged);
  const double expect5[] = {0.95, -10.1, 36.5, -49.5, 22.4};
  for (std::size_t i = 0; i < 5; ++i) CHECK(five.beta[i] == doctest::Approx(expect5[i]).epsilon(2e-2));
  const auto three =
      solve_beta(MomentVector(ProfileSet({1, 2, 3}), {4.31168, 3.86652, 3.65774}));
  REQUIRE(three.converged);
  const double expect3[] = {4.0, -8.5, 4.6};
  for (std::size_t i = 0; i < 3; ++i) CHECK(three.beta[i] == doctest::Approx(expect3[i]).epsilon(2e-2));
}

TEST_CASE("positivity on the half line") {
  const ProfileSet J({0, 1, 2});
  CHECK(is_positive_on_half_line(DualVector(J, {1.0, -1.0, 1.0})));
  CHECK_FALSE(is_positive_on_half_line(DualVector(J, {1.0, -3.0, 1.0})));
  CHECK_FALSE(is_positive_on_half_line(DualVector(J, {1.0, 1.0, -1.0})));
  // (x - 1)^2 touches zero at x = 1.
  CHECK_FALSE(is_positive_on_half_line(DualVector(J, {1.0, -2.0, 1.0})));
  CHECK(is_positive_on_half_line(DualVector(ProfileSet({1, 2, 3}), {4.0, -8.5, 4.6})));
  CHECK_THROWS_AS(require_positive(DualVector(ProfileSet({1}), {-1.0})), Error);
}

TEST_CASE("Hankel diagnosis") {
  // Exponential distribution: moments k!.
  const double expo[] = {1.0, 1.0, 2.0, 6.0, 24.0};
  CHECK(hankel_feasibility(expo, 4) == HankelDiagnosis::Feasible);
  // Point mass at 1.
  const double atom[] = {1.0, 1.0, 1.0};
  CHECK(hankel_feasibility(atom, 2) == HankelDiagnosis::Boundary);
  // Second moment below the squared mean.
  const double bad[] = {1.0, 1.0, 0.5};
  CHECK(hankel_feasibility(bad, 2) == HankelDiagnosis::Infeasible);
}

TEST_CASE("infeasible moments are reported, not thrown") {
  const auto r = solve_beta(MomentVector(ProfileSet({0, 1, 2}), {1.0, 1.0, 3.0}));
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.message.empty());
}
