#pragma once

// Integer-valued polynomials supported on the powers of J with coefficients
// reduced into (-1/2, 1/2], and the number-theoretic feasibility they imply.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "maxpart/domain.hpp"

namespace maxpart {

using Rational = mpq_class;

/// sum_{j in J} t_j x^j with t_j in (-1/2, 1/2] and integer values on Z.
struct IntValuedPoly {
  std::vector<Rational> coeffs;  // aligned with the powers of J

  Rational evaluate(const ProfileSet& set, const BigInt& m) const;
  bool is_zero() const;
  friend bool operator==(const IntValuedPoly&, const IntValuedPoly&) = default;
};

struct QjOptions {
  unsigned degree_cap = 8;
  /// Upper bound on the size of the enumerated set; the DFS aborts beyond it.
  std::uint64_t max_size = 5'000'000;
};

/// The finite set Q_J.
class FeasibilityLattice {
 public:
  FeasibilityLattice(ProfileSet set, std::vector<IntValuedPoly> polys);

  const ProfileSet& set() const noexcept { return set_; }
  std::span<const IntValuedPoly> polys() const noexcept { return polys_; }
  std::size_t cardinality() const noexcept { return polys_.size(); }
  /// Least common multiple of every coefficient denominator.
  const BigInt& denominator_lcm() const noexcept { return lcm_; }

 private:
  ProfileSet set_;
  std::vector<IntValuedPoly> polys_;
  BigInt lcm_;
};

/// Enumerates Q_J through the binomial basis: every integer-valued
/// polynomial of degree <= j_max is sum_i s_i binom(x, i) with integer s_i,
/// and modulo integer-coefficient polynomials s_i only matters mod i!.
/// Candidates are expanded with Stirling numbers of the first kind, degree
/// by degree from the top, and pruned as soon as a power outside J gets a
/// non-integer coefficient.
FeasibilityLattice enumerate_qj(const ProfileSet& set, const QjOptions& opts = {});

/// True iff sum_j t_j N_j is an integer for every polynomial of Q_J.
bool is_n_feasible(std::span<const BigInt> values, const FeasibilityLattice& lattice);
bool is_n_feasible(const Profile& profile, const FeasibilityLattice& lattice);

/// Fraction of {0..box_side-1}^J that passes is_n_feasible.
Rational nt_density(const FeasibilityLattice& lattice, std::uint64_t box_side,
                    std::uint64_t cap = 10'000'000);

/// Signed Stirling numbers of the first kind s(i, p), 0 <= p <= i <= d.
std::vector<std::vector<std::int64_t>> stirling_first_kind(unsigned d);

}  // namespace maxpart
