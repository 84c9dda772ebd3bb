#include <doctest.h>

#include "maxpart/domain.hpp"
#include "maxpart/error.hpp"

using namespace maxpart;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("profile sets must be strictly increasing with a positive power") {
  CHECK(kind_of([] { ProfileSet({}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ProfileSet({0}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ProfileSet({2, 1}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ProfileSet({1, 1}); }) == ErrorKind::InvalidArgument);
  const ProfileSet J({0, 1, 3});
  CHECK(J.j_star() == 0);
  CHECK(J.j_max() == 3);
  CHECK(J.index_of(3) == 2u);
  CHECK_FALSE(J.contains(2));
}

TEST_CASE("scaled profile floors alpha n^{(j+1)/2} exactly") {
  const ProfileSet J({1, 2});
  const Profile N = scaled_profile(MomentVector(J, {1.0, 1.0}), 100);
  CHECK(N[0] == 100);
  CHECK(N[1] == 1000);
  // 1.5 * 10^{3/2} = 47.43...
  const Profile M = scaled_profile(MomentVector(ProfileSet({2}), {1.5}), 10);
  CHECK(M[0] == 47);
  // The double nearest 0.3 is just below it, so 0.3 * 10 floors to 2.
  CHECK(scaled_profile(MomentVector(ProfileSet({1}), {0.3}), 10)[0] == 2);
  CHECK(kind_of([] { scaled_profile(MomentVector(ProfileSet({1}), {0.001}), 1); }) ==
        ErrorKind::ZeroEntry);
}

TEST_CASE("profile of a partition") {
  const std::uint64_t parts[] = {3, 1, 1};
  const Partition lambda = Partition::from_parts(parts);
  const auto v = profile_of(lambda, ProfileSet({0, 1, 2, 3}));
  CHECK(v[0] == 3);
  CHECK(v[1] == 5);
  CHECK(v[2] == 11);
  CHECK(v[3] == 29);
  CHECK(lambda.length() == 3);
  CHECK(lambda.parts_descending() == std::vector<std::uint64_t>{3, 1, 1});
  CHECK(profile_of(Partition(), ProfileSet({1}))[0] == 0);
}

TEST_CASE("exact powers do not overflow") {
  CHECK(power(10, 20) == BigInt("100000000000000000000"));
  CHECK(power(7, 0) == 1);
}
