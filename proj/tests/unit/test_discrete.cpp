#include <doctest.h>

#include <cmath>
#include <numbers>

#include "maxpart/error.hpp"
#include "maxpart/maxent_discrete.hpp"

using namespace maxpart;

namespace {

// Expanding 1/(e^{bk} - 1) = sum_m e^{-bkm} and summing over k first:
//   sum_k k / (e^{bk} - 1)        = sum_m q^m / (1 - q^m)^2,
//   -sum_k log(1 - e^{-bk})       = sum_m q^m / (m (1 - q^m)),   q = e^{-b}.
double first_moment_series(double b) {
  long double s = 0.0L;
  for (int m = 1; m < 4000; ++m) {
    const long double x = std::exp(-static_cast<long double>(b) * m);
    s += x / ((1.0L - x) * (1.0L - x));
  }
  return static_cast<double>(s);
}

double log_z_series(double b) {
  long double s = 0.0L;
  for (int m = 1; m < 4000; ++m) {
    const long double x = std::exp(-static_cast<long double>(b) * m);
    s += x / (m * (1.0L - x));
  }
  return static_cast<double>(s);
}

// Plain long-double sum of k^2 e^{p} / (e^{p} - 1)^2, far past any cutoff.
double s11_direct(double b) {
  long double s = 0.0L;
  for (int k = 1; k < 20000; ++k) {
    const long double e = std::expm1(static_cast<long double>(b) * k);
    s += static_cast<long double>(k) * k * (e + 1.0L) / (e * e);
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("series sums against double-series oracles") {
  for (double b : {0.5, 0.3}) {
    CAPTURE(b);
    const DiscreteDual dual(ProfileSet({1}), {b}, 1);
    const auto s = series_sums(dual, 1e-12);
    CHECK(s.moments[0] == doctest::Approx(first_moment_series(b)).epsilon(1e-11));
    CHECK(s.log_z == doctest::Approx(log_z_series(b)).epsilon(1e-11));
    CHECK(s.covariance(0, 0) == doctest::Approx(s11_direct(b)).epsilon(1e-11));
    CHECK(s.moment_tail[0] <= 1e-12 * s.moments[0]);
    // H = log Z + b * sum_k k f(k).
    CHECK(s.entropy == doctest::Approx(s.log_z + b * s.moments[0]).epsilon(1e-12));
  }
}

TEST_CASE("moments outside J use the same polynomial") {
  const DiscreteDual dual(ProfileSet({1}), {0.5}, 1);
  // sum_k 1/(e^{bk} - 1) = sum_m q^m / (1 - q^m).
  long double s = 0.0L;
  for (int m = 1; m < 4000; ++m) {
    const long double x = std::exp(-0.5L * m);
    s += x / (1.0L - x);
  }
  CHECK(discrete_moment(dual, 0) == doctest::Approx(static_cast<double>(s)).epsilon(1e-11));
}

TEST_CASE("p must stay positive on the positive integers") {
  CHECK_THROWS_AS(DiscreteDual(ProfileSet({1}), {-0.1}, 1), Error);
  // 1 - 3k + k^2 is negative at k = 1 and 2.
  CHECK_THROWS_AS(DiscreteDual(ProfileSet({0, 1, 2}), {1.0, -3.0, 1.0}, 1), Error);
  // 3 - 3.5k + k^2 is negative only between the integers 1 and 2.5, at k = 2.
  CHECK_THROWS_AS(DiscreteDual(ProfileSet({0, 1, 2}), {3.0, -3.5, 1.0}, 1), Error);
  // 2.1 - 3k + k^2 is negative on (1.05, 1.95), which holds no integer.
  CHECK_NOTHROW(DiscreteDual(ProfileSet({0, 1, 2}), {2.1, -3.0, 1.0}, 1));
}

TEST_CASE("solve_beta_hat matches the profile and approaches the continuous beta") {
  const ProfileSet J({1});
  const DualVector beta(J, {std::numbers::pi / std::sqrt(6.0)});
  double prev = 1.0;
  for (std::uint64_t n : {100, 1000, 10000}) {
    const Profile N(J, {BigInt(static_cast<unsigned long>(n))});
    const auto dual = solve_beta_hat(N, beta, n);
    CHECK(discrete_moment(dual, 1) == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
    const double gap = std::abs(dual[0] * std::sqrt(static_cast<double>(n)) - beta[0]);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("two constraints solve to the exact profile") {
  const ProfileSet J({1, 2});
  const DualVector beta(J, {1.18556345346, 0.0633142568461});
  const Profile N(J, {BigInt(400), BigInt(8000)});
  const auto dual = solve_beta_hat(N, beta, 400);
  const auto s = series_sums(dual);
  CHECK(s.moments[0] == doctest::Approx(400.0).epsilon(1e-9));
  CHECK(s.moments[1] == doctest::Approx(8000.0).epsilon(1e-9));
  CHECK(covariance_s(dual).log_det() == doctest::Approx(std::log(s.covariance.determinant())));
}
