#pragma once

// Constants of the main asymptotic formula
//   p~_n(alpha) = (c(alpha) + o(1)) e^{sqrt(n) M(alpha)} / n^{b(J)},
// the entropy expansion of mu_n, the local limit factor, and the two
// estimates built from them. Everything is carried in log space.

#include <cstdint>
#include <optional>
#include <vector>

#include "maxpart/intpoly.hpp"
#include "maxpart/maxent_continuous.hpp"
#include "maxpart/maxent_discrete.hpp"

namespace maxpart {

/// b(J) = (j_star + |J|)/4 + (1/2) sum_{j in J} j.
Rational exponent_b(const ProfileSet& set);

/// b1(J) = -j_star/4.
Rational exponent_b1(const ProfileSet& set);

/// c1 = -(j_star/2) log(2 pi) + [j_star = 0]/2 (beta_0 f_0 - G(f_0))
///      + [j_star >= 1]/2 log beta_{j_star},   f_0 = 1/(e^{beta_0} - 1).
double entropy_constant_c1(const DualVector& beta);

/// log c(alpha), assembled factor by factor. Throws SingularSigma.
double log_prefactor_c(const DualVector& beta, const SigmaMatrix& sigma,
                       const FeasibilityLattice& lattice);
double prefactor_c(const DualVector& beta, const SigmaMatrix& sigma,
                   const FeasibilityLattice& lattice);

/// The same constant as e^{c1} |Q_J| (2 pi)^{-|J|/2} det(Sigma)^{-1/2}.
double prefactor_c_from_c1(const DualVector& beta, const SigmaMatrix& sigma,
                           const FeasibilityLattice& lattice);

/// sqrt(n) M + b1 log n + c1, the expansion of H(mu_n).
double entropy_expansion(const DualVector& beta, double M, std::uint64_t n);

/// log of |Q_J| / ((2 pi)^{|J|/2} det(S)^{1/2}). Throws SingularSigma.
double log_lclt_factor(const CovarianceMatrixS& s, const FeasibilityLattice& lattice);
double lclt_factor(const CovarianceMatrixS& s, const FeasibilityLattice& lattice);

enum class EstimateMode { Leading, Refined };

struct EstimateBreakdown {
  ProfileSet set{{1}};
  std::uint64_t n = 0;
  EstimateMode mode = EstimateMode::Leading;
  std::vector<double> beta;
  std::vector<BigInt> profile;  // N(alpha, n)
  bool feasible = true;
  double M = 0.0;
  Rational b;
  double c = 0.0;
  Rational b1;
  double c1 = 0.0;
  std::size_t qj_cardinality = 0;
  double log_leading = 0.0;
  // Refined mode only.
  std::optional<std::vector<double>> beta_hat;
  std::optional<double> H;
  std::optional<double> log_lclt;
  /// log of the estimate in the requested mode; -inf when infeasible.
  double log_estimate = 0.0;
  /// e^{log_estimate} when that is a finite double.
  std::optional<double> estimate;
};

struct EstimateOptions {
  SolveOptions solve;
  DiscreteSolveOptions discrete;
  QjOptions qj;
};

/// Leading: sqrt(n) M + log c - b log n from continuous quantities only.
/// Refined: H(mu_n) + log lclt_factor(S) from the discrete solution for
/// N(alpha, n). An N that fails the lattice test gives estimate 0 with
/// feasible = false. Throws NoConvergence when the continuous solve fails.
EstimateBreakdown estimate_p(const MomentVector& alpha, std::uint64_t n, EstimateMode mode,
                             const EstimateOptions& opts = {});

struct EmCheck {
  double direct = 0.0;
  double asymptotic = 0.0;
};

/// direct = sum_{k>=1} G(1/(e^{p_gamma(tk)} - 1)), against
/// t^{-1} int G(f*) - (j_star/2) log(2 pi/t) - [j_star=0]/2 G(1/(e^{gamma_0}-1))
/// + [j_star>=1]/2 (log gamma_{j_star} - 1). Requires t in (0, 0.5].
EmCheck em_sum_check(const DualVector& gamma, double t);

}  // namespace maxpart
