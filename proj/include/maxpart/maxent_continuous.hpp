#pragma once

// The continuous maximum geometric-entropy problem: the dual polynomial
// p_beta(x) = sum_j beta_j x^j, the Bose-Einstein optimizer
// f*(x) = 1/(e^{p_beta(x)} - 1), its moments, Gram matrix and entropy, and a
// damped Newton solver for the moment equations.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxpart/domain.hpp"
#include "maxpart/numeric.hpp"

namespace maxpart {

class DualVector {
 public:
  DualVector(ProfileSet set, std::vector<double> beta);

  const ProfileSet& set() const noexcept { return set_; }
  std::span<const double> beta() const noexcept { return beta_; }
  double operator[](std::size_t i) const { return beta_[i]; }
  std::size_t size() const noexcept { return beta_.size(); }
  /// p_beta(x).
  double poly(double x) const noexcept { return poly_(x); }
  const PowerPolynomial& polynomial() const noexcept { return poly_; }
  /// Coefficient of x^{j_star}.
  double leading_low() const noexcept { return beta_.front(); }

 private:
  ProfileSet set_;
  std::vector<double> beta_;
  PowerPolynomial poly_;
};

/// True iff p_beta > 0 on (0, inf): the lowest and highest coefficients are
/// positive and a Sturm sequence over the exact rationals of the coefficients
/// finds no root of p_beta(x)/x^{j_star} in (0, inf).
bool is_positive_on_half_line(const DualVector& beta);

/// Throws DomainViolation unless is_positive_on_half_line.
void require_positive(const DualVector& beta);

/// Symmetric positive definite matrix indexed by J x J.
struct GramMatrix {
  ProfileSet set;
  Eigen::MatrixXd entries;

  /// log det via Cholesky; throws SingularSigma when not positive definite.
  double log_det() const;
  double det() const { return std::exp(log_det()); }
};

using SigmaMatrix = GramMatrix;

/// int_0^inf x^j / (e^{p_beta(x)} - 1) dx. Requires j >= j_star.
double boltzmann_moment(const DualVector& beta, unsigned j, const QuadratureOptions& quad = {});

/// beta -> alpha, the moments for every j in J.
MomentVector forward_map(const DualVector& beta, const QuadratureOptions& quad = {});

/// Sigma_{ij} = int x^{i+j} e^{p}/(e^{p}-1)^2 dx.
SigmaMatrix sigma_matrix(const DualVector& beta, const QuadratureOptions& quad = {});

/// M = int_0^inf G(f*(x)) dx.
double m_alpha(const DualVector& beta, const QuadratureOptions& quad = {});

/// int_0^inf -log(1 - e^{-p_beta(x)}) dx. The dual objective is
/// alpha . beta + this, and M equals its minimum.
double log_partition_continuous(const DualVector& beta, const QuadratureOptions& quad = {});

struct SolveOptions {
  double residual_tol = 1e-9;
  unsigned max_iterations = 200;
  std::optional<std::vector<double>> initial_beta;
  QuadratureOptions quad{1e-11, 1e-15, 2000};
};

struct SolveReport {
  DualVector beta;
  unsigned iterations = 0;
  double residual_norm = 0.0;  // max_j |alpha_j(beta) - alpha_j| / alpha_j
  bool converged = false;
  std::string message;
};

/// Starting point: the closed form for a single power, otherwise the average
/// of the single-power solutions (beta_0 = 1 when 0 is in J).
std::vector<double> initial_beta_guess(const MomentVector& alpha);

/// Damped Newton on the convex dual alpha . beta + log_partition_continuous
/// with Jacobian -Sigma. A step is halved until p_beta stays positive and
/// the objective (or, near convergence, the residual) decreases.
/// Non-convergence is reported, not thrown; a start outside the positivity
/// domain throws DomainViolation.
SolveReport solve_beta(const MomentVector& alpha, const SolveOptions& opts = {});

enum class HankelDiagnosis { Feasible, Boundary, Infeasible };

std::string to_string(HankelDiagnosis d);

/// Truncated Stieltjes check on moments (alpha_0 = 1, alpha_1, ..., alpha_d):
/// leading principal minors of both Hankel matrices. Any minor below -tol
/// is infeasible, otherwise any within [-tol, tol] is boundary.
HankelDiagnosis hankel_feasibility(std::span<const double> moments, unsigned d,
                                   double tol = 1e-12);

}  // namespace maxpart
