#pragma once

// The discrete counterpart of the continuous problem: independent geometric
// multiplicities Y_k with P(Y_k >= y) = e^{-y p(k)}, p(k) = sum_j beta_hat_j k^j.
// All series are summed in ascending k with compensation, truncated at K and
// closed off with an explicit tail bound.

#include <cstdint>
#include <span>
#include <vector>

#include "maxpart/domain.hpp"
#include "maxpart/maxent_continuous.hpp"

namespace maxpart {

/// beta_hat together with the scale n and a cutoff K past which p is
/// increasing, convex and at least 45.
class DiscreteDual {
 public:
  /// Throws DomainViolation unless p(k) > 0 for every integer k >= 1.
  DiscreteDual(ProfileSet set, std::vector<double> beta_hat, std::uint64_t n);

  const ProfileSet& set() const noexcept { return set_; }
  std::span<const double> beta_hat() const noexcept { return beta_hat_; }
  double operator[](std::size_t i) const { return beta_hat_[i]; }
  std::size_t size() const noexcept { return beta_hat_.size(); }
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t truncation_K() const noexcept { return K_; }
  /// p(k) = sum_j beta_hat_j k^j.
  double p(double k) const noexcept { return poly_(k); }
  double p_derivative(double k) const noexcept { return poly_.derivative(k); }
  /// Smallest k from which p is known to be increasing and convex.
  std::uint64_t monotone_from() const noexcept { return monotone_from_; }

 private:
  ProfileSet set_;
  std::vector<double> beta_hat_;
  std::uint64_t n_;
  PowerPolynomial poly_;
  std::uint64_t monotone_from_ = 1;
  std::uint64_t K_ = 1;
};

using CovarianceMatrixS = GramMatrix;

/// Everything one pass over k = 1..K yields. Tail bounds are absolute.
struct SeriesSums {
  std::vector<double> moments;  // sum_k k^j f(k), aligned with J
  Eigen::MatrixXd covariance;   // sum_k k^{i+j} f(k)(1+f(k))
  double entropy = 0.0;         // sum_k G(f(k))
  double log_z = 0.0;           // -sum_k log(1 - e^{-p(k)})
  std::vector<double> moment_tail;
  Eigen::MatrixXd covariance_tail;
  double entropy_tail = 0.0;
  double log_z_tail = 0.0;
  std::uint64_t terms = 0;
};

/// One compensated pass, extended past K until every tail bound is within
/// tolerance (relative for moments and S, absolute for H and log Z).
/// Throws TailBoundFailure when that needs more than max_terms terms.
SeriesSums series_sums(const DiscreteDual& dual, double tail_tol = 1e-9,
                       std::uint64_t max_terms = 200'000'000);

/// sum_{k>=1} k^j / (e^{p(k)} - 1).
double discrete_moment(const DiscreteDual& dual, unsigned j);

/// log Z = -sum_k log(1 - e^{-p(k)}).
double log_partition(const DiscreteDual& dual);

/// H(mu_n) = sum_k G(f(k)).
double entropy_mu(const DiscreteDual& dual);

/// S_{ij} = sum_k k^{i+j} e^{p(k)} / (e^{p(k)} - 1)^2.
CovarianceMatrixS covariance_s(const DiscreteDual& dual);

struct DiscreteSolveOptions {
  double residual_tol = 1e-9;
  unsigned max_iterations = 100;
};

/// Solves sum_k k^j f(k) = N_j from beta_hat_j = beta_j n^{-j/2}, by damped
/// Newton on the convex beta_hat . N + log Z (Hessian S). Throws
/// NoConvergence.
DiscreteDual solve_beta_hat(const Profile& target, const DualVector& beta_continuous,
                            std::uint64_t n, const DiscreteSolveOptions& opts = {});

}  // namespace maxpart
