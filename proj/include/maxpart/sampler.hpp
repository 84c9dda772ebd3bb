#pragma once

// Sampling from mu_n (independent geometric multiplicities), exact uniform
// samples on P(N) by rejection, and limit shapes.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "maxpart/domain.hpp"
#include "maxpart/maxent_continuous.hpp"
#include "maxpart/maxent_discrete.hpp"
#include "maxpart/numeric.hpp"

namespace maxpart {

/// Y_k = floor(E / p(k)) with E ~ Exp(1), so P(Y_k >= y) = e^{-y p(k)}.
/// Parts with p(k) >= 34.54 (success probability within 1e-15 of 1) are
/// skipped outright.
Partition sample_mu(const DiscreteDual& dual, CounterRng& rng);

struct UniformSample {
  Partition partition;
  std::uint64_t tries = 0;
};

/// Draws from mu_n until the profile is exactly N. Since mu_n is constant
/// on P(N) the accepted draw is uniform there. Throws MaxTriesExceeded.
UniformSample sample_uniform_exact(const Profile& N, const DiscreteDual& dual,
                                   CounterRng& rng, std::uint64_t max_tries);

struct ShapeCurve {
  std::vector<double> grid;
  std::vector<double> values;
};

/// m points from a to b inclusive, evenly spaced.
std::vector<double> linear_grid(double a, double b, std::size_t m);

/// phi(t) = int_t^inf f*(s) ds. Requires every grid point > 0.
ShapeCurve limit_shape(const DualVector& beta, const std::vector<double>& grid);

/// phi(t) = n^{-1/2} #{parts a >= t sqrt(n)}, counted with multiplicity.
ShapeCurve empirical_shape(const Partition& lambda, std::uint64_t n,
                           const std::vector<double>& grid);

/// Largest |a - b| over shared grid points in [t1, t2]. Throws
/// WindowUncovered if either curve misses the window.
double shape_distance(const ShapeCurve& a, const ShapeCurve& b, double t1, double t2);

/// CSV with header t,phi at 12 significant digits.
void write_shape_csv(std::ostream& out, const ShapeCurve& curve);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

/// Fraction of mu_n draws whose profile is exactly N. Work is split into
/// fixed chunks on substreams of rng, so the result does not depend on the
/// thread count (MAXPART_THREADS, default 1).
McEstimate mc_profile_probability(const DiscreteDual& dual, const Profile& N,
                                  std::uint64_t samples, const CounterRng& rng);

}  // namespace maxpart
