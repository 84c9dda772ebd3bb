#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "maxpart/error.hpp"
#include "maxpart/exact_count.hpp"
#include "maxpart/sampler.hpp"

using namespace maxpart;

TEST_CASE("counter generator is reproducible and stream-separated") {
  CounterRng a(5, 1);
  CounterRng b(5, 1);
  CounterRng c(5, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
  CounterRng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform_open_closed();
    CHECK((v > 0.0 && v <= 1.0));
  }
}

TEST_CASE("multiplicities are geometric") {
  // J = {1}: E[Y_k] = 1/(e^{bk} - 1); check the mean total size.
  const DiscreteDual dual(ProfileSet({1}), {0.2}, 1);
  const double mean_size = discrete_moment(dual, 1);
  CounterRng rng(11);
  const int draws = 20000;
  double total = 0.0;
  double sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double s = profile_of(sample_mu(dual, rng), dual.set())[0].get_d();
    total += s;
    sq += s * s;
  }
  const double mean = total / draws;
  const double sd = std::sqrt((sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - mean_size) < 5 * sd);
}

TEST_CASE("uniform sampler only returns the target profile") {
  const ProfileSet J({1, 2});
  const Profile N(J, {BigInt(10), BigInt(30)});
  const auto dual = solve_beta_hat(N, DualVector(J, {1.18556345346, 0.0633142568461}), 10);
  CounterRng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto s = sample_uniform_exact(N, dual, rng, 1'000'000);
    const auto v = profile_of(s.partition, J);
    CHECK(v[0] == 10);
    CHECK(v[1] == 30);
  }
  CHECK_THROWS_AS(sample_uniform_exact(Profile(J, {BigInt(10), BigInt(31)}), dual, rng, 100),
                  Error);
}

TEST_CASE("limit shape for one constraint has a closed form") {
  const double b = std::numbers::pi / std::sqrt(6.0);
  const auto grid = linear_grid(0.01, 5.0, 50);
  const auto curve = limit_shape(DualVector(ProfileSet({1}), {b}), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve.values[i] == doctest::Approx(-std::log(-std::expm1(-b * grid[i])) / b).epsilon(1e-10));
  }
}

TEST_CASE("empirical shape and CSV") {
  const std::uint64_t parts[] = {4, 2, 2, 1};
  const auto grid = linear_grid(0.5, 2.0, 4);  // t sqrt(4) = 1, 2, 3, 4
  const auto s = empirical_shape(Partition::from_parts(parts), 4, grid);
  CHECK(s.values == std::vector<double>{2.0, 1.5, 0.5, 0.5});
  std::ostringstream out;
  write_shape_csv(out, s);
  CHECK(out.str() == "t,phi\n0.5,2\n1,1.5\n1.5,0.5\n2,0.5\n");
  CHECK_THROWS_AS(shape_distance(s, s, 0.1, 3.0), Error);
  CHECK(shape_distance(s, s, 0.5, 2.0) == 0.0);
}

TEST_CASE("Monte Carlo rate does not depend on the thread count") {
  const ProfileSet J({1});
  const Profile N(J, {BigInt(12)});
  const auto dual = solve_beta_hat(N, DualVector(J, {std::numbers::pi / std::sqrt(6.0)}), 12);
  setenv("MAXPART_THREADS", "1", 1);
  const auto one = mc_profile_probability(dual, N, 50000, CounterRng(4));
  setenv("MAXPART_THREADS", "4", 1);
  const auto four = mc_profile_probability(dual, N, 50000, CounterRng(4));
  unsetenv("MAXPART_THREADS");
  CHECK(one.hits == four.hits);
  // mu_n(N) = p(12) e^{-H}.
  const double exact = count_pn(12).get_d() * std::exp(-entropy_mu(dual));
  CHECK(std::abs(one.estimate - exact) < 5 * one.standard_error);
}
