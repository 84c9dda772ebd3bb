#pragma once

// Core value types: profile sets J, integer profiles N, real moment vectors
// alpha, and partitions stored as multiplicity maps.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxpart {

using BigInt = mpz_class;

/// Finite set J of non-negative powers, kept strictly increasing. At least
/// one power must be positive.
class ProfileSet {
 public:
  explicit ProfileSet(std::vector<unsigned> powers);

  std::span<const unsigned> powers() const noexcept { return powers_; }
  std::size_t size() const noexcept { return powers_.size(); }
  unsigned operator[](std::size_t i) const { return powers_[i]; }
  unsigned j_star() const noexcept { return powers_.front(); }
  unsigned j_max() const noexcept { return powers_.back(); }
  bool contains(unsigned j) const noexcept { return index_of(j).has_value(); }
  std::optional<std::size_t> index_of(unsigned j) const noexcept;

  std::string to_string() const;

  friend bool operator==(const ProfileSet&, const ProfileSet&) = default;

 private:
  std::vector<unsigned> powers_;
};

/// Prescribed power sums N_j >= 1, aligned with the powers of J.
class Profile {
 public:
  Profile(ProfileSet set, std::vector<BigInt> values);

  const ProfileSet& set() const noexcept { return set_; }
  std::span<const BigInt> values() const noexcept { return values_; }
  const BigInt& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  ProfileSet set_;
  std::vector<BigInt> values_;
};

/// Scaled moments alpha_j > 0, aligned with the powers of J.
class MomentVector {
 public:
  MomentVector(ProfileSet set, std::vector<double> values);

  const ProfileSet& set() const noexcept { return set_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  ProfileSet set_;
  std::vector<double> values_;
};

/// A partition as a finitely supported map part -> multiplicity (>= 1).
class Partition {
 public:
  using Map = std::map<std::uint64_t, BigInt>;

  Partition() = default;
  explicit Partition(Map multiplicities);
  /// Builds from a list of parts, with repetition.
  static Partition from_parts(std::span<const std::uint64_t> parts);

  void add(std::uint64_t part, const BigInt& multiplicity = 1);
  const Map& multiplicities() const noexcept { return mult_; }
  bool empty() const noexcept { return mult_.empty(); }
  BigInt multiplicity(std::uint64_t part) const;
  /// Total number of parts counted with multiplicity.
  BigInt length() const;
  /// Parts in non-increasing order; only sensible for modest lengths.
  std::vector<std::uint64_t> parts_descending() const;

  /// Multiset union.
  friend Partition operator+(const Partition& a, const Partition& b);
  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.mult_ <=> b.mult_;
  }

 private:
  Map mult_;
};

/// (sum_k a_k k^j)_{j in J}; zero entries allowed (empty partition).
std::vector<BigInt> profile_of(const Partition& lambda, const ProfileSet& set);

/// N_j = floor(alpha_j * n^{(j+1)/2}), computed exactly from the binary
/// value of alpha_j. Throws ZeroEntry if any entry floors to 0.
Profile scaled_profile(const MomentVector& alpha, std::uint64_t n);

/// Exact k^j for a part value.
BigInt power(std::uint64_t k, unsigned j);

}  // namespace maxpart
