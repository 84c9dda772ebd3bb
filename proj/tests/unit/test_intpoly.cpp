#include <doctest.h>

#include <algorithm>

#include "maxpart/exact_count.hpp"
#include "maxpart/intpoly.hpp"

using namespace maxpart;

namespace {

std::uint64_t factorial(unsigned d) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= d; ++i) f *= i;
  return f;
}

// Brute force over t_j = a / d! with a/d! in (-1/2, 1/2]: keeps those whose
// polynomial is integral at x = 0..2d+2 (enough to pin an integer-valued
// polynomial of degree <= d, and the denominators of Q_J divide d!).
std::size_t brute_force_qj_size(const ProfileSet& J) {
  const unsigned d = J.j_max();
  const auto D = static_cast<std::int64_t>(factorial(d));
  const std::int64_t lo = D % 2 == 0 ? -(D / 2) + 1 : -(D / 2);
  const std::int64_t hi = D / 2;
  std::vector<std::int64_t> a(J.size(), lo);
  std::size_t count = 0;
  while (true) {
    bool integral = true;
    for (std::int64_t x = 0; x <= 2 * d + 2 && integral; ++x) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < J.size(); ++i) {
        std::int64_t xp = 1;
        for (unsigned e = 0; e < J[i]; ++e) xp *= x;
        acc += a[i] * xp;
      }
      integral = acc % D == 0;
    }
    count += integral;
    std::size_t i = 0;
    while (i < a.size() && a[i] == hi) a[i++] = lo;
    if (i == a.size()) break;
    ++a[i];
  }
  return count;
}

}  // namespace

TEST_CASE("Stirling numbers of the first kind") {
  const auto s = stirling_first_kind(4);
  CHECK(s[4] == std::vector<std::int64_t>{0, -6, 11, -6, 1});
  CHECK(s[3][1] == 2);
  CHECK(s[0][0] == 1);
}

TEST_CASE("Q_J sizes agree with brute force") {
  for (const auto& J : {ProfileSet({1}), ProfileSet({2}), ProfileSet({1, 2}),
                        ProfileSet({1, 3}), ProfileSet({0, 2}), ProfileSet({1, 2, 3}),
                        ProfileSet({2, 3}), ProfileSet({1, 2, 3, 4})}) {
    CAPTURE(J.to_string());
    CHECK(enumerate_qj(J).cardinality() == brute_force_qj_size(J));
  }
}

TEST_CASE("every member of Q_J is integer valued with reduced coefficients") {
  const ProfileSet J({1, 2, 3, 4});
  const auto lattice = enumerate_qj(J);
  CHECK(lattice.cardinality() == 288);
  const Rational half(1, 2);
  for (const auto& q : lattice.polys()) {
    for (const auto& t : q.coeffs) {
      CHECK(t > -half);
      CHECK(t <= half);
    }
    for (int m = -5; m <= 5; ++m) CHECK(q.evaluate(J, m).get_den() == 1);
  }
  CHECK(lattice.denominator_lcm() == 24);
}

TEST_CASE("parity obstruction for J = {1, 2}") {
  const auto lattice = enumerate_qj(ProfileSet({1, 2}));
  const BigInt bad[] = {3, 4};
  const BigInt good[] = {4, 10};
  CHECK_FALSE(is_n_feasible(bad, lattice));
  CHECK(is_n_feasible(good, lattice));
  CHECK(nt_density(lattice, 50) == Rational(1, 2));
}

TEST_CASE("feasibility is necessary on exact counts") {
  // Every profile realized by a partition of n <= 12 passes, for J = {1, 3}.
  const ProfileSet J({1, 3});
  const auto lattice = enumerate_qj(J);
  const auto table = build_count_table(J, {12, 12 * 12 * 12});
  for (std::uint64_t n = 0; n <= 12; ++n) {
    for (std::uint64_t m = 0; m <= 12 * 12 * 12; ++m) {
      const std::uint64_t u[] = {n, m};
      if (table.at(u) == 0) continue;
      const BigInt v[] = {BigInt(static_cast<unsigned long>(n)),
                          BigInt(static_cast<unsigned long>(m))};
      CHECK(is_n_feasible(v, lattice));
    }
  }
}
