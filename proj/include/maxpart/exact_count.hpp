#pragma once

// Exact counts of partitions with a prescribed profile, by dynamic
// programming over residual profiles, plus p(n) from the pentagonal
// recurrence as an independent check.

#include <cstdint>
#include <span>
#include <vector>

#include "maxpart/domain.hpp"

namespace maxpart {

inline constexpr std::uint64_t kDefaultMemoryCap = 100'000'000;

/// Counts for every profile u <= bounds (componentwise), from an unbounded
/// knapsack over part values 1..parts_processed. Dense, so only for small
/// boxes; entry u is p(u) once every part that fits has been processed.
class CountTable {
 public:
  const ProfileSet& set() const noexcept { return set_; }
  std::span<const std::uint64_t> bounds() const noexcept { return bounds_; }
  std::uint64_t parts_processed() const noexcept { return parts_processed_; }
  /// Count for the profile u; zero outside the box.
  const BigInt& at(std::span<const std::uint64_t> u) const;
  std::size_t entries() const noexcept { return counts_.size(); }

 private:
  friend CountTable build_count_table(const ProfileSet&, std::vector<std::uint64_t>,
                                      std::uint64_t);
  ProfileSet set_{{1}};
  std::vector<std::uint64_t> bounds_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t parts_processed_ = 0;
  std::vector<BigInt> counts_;
};

/// Throws MemoryCapExceeded when the box has more than memory_cap cells.
CountTable build_count_table(const ProfileSet& set, std::vector<std::uint64_t> bounds,
                             std::uint64_t memory_cap = kDefaultMemoryCap);

/// |P(N)|. Parts are processed from the largest down; a residual r is kept
/// only while parts <= x can still realize it, i.e. r_j <= r_j' <= x^{j'-j} r_j
/// for j < j' in J. Entries must fit in 62 bits. Throws MemoryCapExceeded
/// (with the reachable-state count) when the frontier grows past memory_cap.
BigInt count_exact(const Profile& N, std::uint64_t memory_cap = kDefaultMemoryCap);

/// Same, for raw values that may contain zeros.
BigInt count_exact(const ProfileSet& set, std::span<const BigInt> values,
                   std::uint64_t memory_cap = kDefaultMemoryCap);

/// p(n) via Euler's pentagonal number recurrence.
BigInt count_pn(std::uint64_t n);

/// Every partition with profile N, in increasing order. Throws CapExceeded
/// once more than cap would be listed.
std::vector<Partition> enumerate_profile_partitions(const Profile& N, std::uint64_t cap);

}  // namespace maxpart
