#include "maxpart/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "maxpart/error.hpp"

namespace maxpart {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// beta_0 f_0 - G(f_0) with f_0 = 1/(e^{beta_0} - 1).
double zero_power_term(double beta0) {
  const double f0 = bose(beta0);
  return beta0 * f0 - geometric_entropy(f0);
}

}  // namespace

Rational exponent_b(const ProfileSet& set) {
  Rational sum = 0;
  for (unsigned j : set.powers()) sum += j;
  Rational b = Rational(set.j_star() + set.size(), 4) + sum / 2;
  b.canonicalize();
  return b;
}

Rational exponent_b1(const ProfileSet& set) {
  Rational b1(-static_cast<long>(set.j_star()), 4);
  b1.canonicalize();
  return b1;
}

double entropy_constant_c1(const DualVector& beta) {
  const unsigned js = beta.set().j_star();
  double c1 = -0.5 * js * kLog2Pi;
  if (js == 0) {
    c1 += 0.5 * zero_power_term(beta.leading_low());
  } else {
    c1 += 0.5 * std::log(beta.leading_low());
  }
  return c1;
}

double log_prefactor_c(const DualVector& beta, const SigmaMatrix& sigma,
                       const FeasibilityLattice& lattice) {
  const auto& set = beta.set();
  const unsigned js = set.j_star();
  double acc = std::log(static_cast<double>(lattice.cardinality()));
  acc -= 0.5 * static_cast<double>(js + set.size()) * kLog2Pi;
  acc -= 0.5 * sigma.log_det();
  if (js >= 1) acc += 0.5 * std::log(beta.leading_low());
  if (js == 0) acc += 0.5 * zero_power_term(beta.leading_low());
  return acc;
}

double prefactor_c(const DualVector& beta, const SigmaMatrix& sigma,
                   const FeasibilityLattice& lattice) {
  return std::exp(log_prefactor_c(beta, sigma, lattice));
}

double prefactor_c_from_c1(const DualVector& beta, const SigmaMatrix& sigma,
                           const FeasibilityLattice& lattice) {
  return std::exp(entropy_constant_c1(beta)) * static_cast<double>(lattice.cardinality()) *
         std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(beta.size())) /
         std::sqrt(sigma.det());
}

double entropy_expansion(const DualVector& beta, double M, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return std::sqrt(nd) * M + exponent_b1(beta.set()).get_d() * std::log(nd) +
         entropy_constant_c1(beta);
}

double log_lclt_factor(const CovarianceMatrixS& s, const FeasibilityLattice& lattice) {
  return std::log(static_cast<double>(lattice.cardinality())) -
         0.5 * static_cast<double>(s.set.size()) * kLog2Pi - 0.5 * s.log_det();
}

double lclt_factor(const CovarianceMatrixS& s, const FeasibilityLattice& lattice) {
  return std::exp(log_lclt_factor(s, lattice));
}

EstimateBreakdown estimate_p(const MomentVector& alpha, std::uint64_t n, EstimateMode mode,
                             const EstimateOptions& opts) {
  const auto& set = alpha.set();
  const SolveReport solved = solve_beta(alpha, opts.solve);
  if (!solved.converged) throw Error(ErrorKind::NoConvergence, solved.message);
  const DualVector& beta = solved.beta;
  const auto& quad = opts.solve.quad;
  const FeasibilityLattice lattice = enumerate_qj(set, opts.qj);
  const SigmaMatrix sigma = sigma_matrix(beta, quad);
  const Profile N = scaled_profile(alpha, n);

  EstimateBreakdown out;
  out.set = set;
  out.n = n;
  out.mode = mode;
  out.beta.assign(beta.beta().begin(), beta.beta().end());
  out.profile.assign(N.values().begin(), N.values().end());
  out.M = m_alpha(beta, quad);
  out.b = exponent_b(set);
  out.b1 = exponent_b1(set);
  const double log_c = log_prefactor_c(beta, sigma, lattice);
  out.c = std::exp(log_c);
  out.c1 = entropy_constant_c1(beta);
  out.qj_cardinality = lattice.cardinality();
  const double nd = static_cast<double>(n);
  out.log_leading = std::sqrt(nd) * out.M + log_c - out.b.get_d() * std::log(nd);

  out.feasible = is_n_feasible(N, lattice);
  if (!out.feasible) {
    out.log_estimate = -std::numeric_limits<double>::infinity();
    out.estimate = 0.0;
    return out;
  }
  if (mode == EstimateMode::Leading) {
    out.log_estimate = out.log_leading;
  } else {
    const DiscreteDual dual = solve_beta_hat(N, beta, n, opts.discrete);
    const SeriesSums sums = series_sums(dual);
    out.beta_hat = std::vector<double>(dual.beta_hat().begin(), dual.beta_hat().end());
    out.H = sums.entropy;
    out.log_lclt = log_lclt_factor({set, sums.covariance}, lattice);
    out.log_estimate = *out.H + *out.log_lclt;
  }
  const double linear = std::exp(out.log_estimate);
  if (std::isfinite(linear)) out.estimate = linear;
  return out;
}

EmCheck em_sum_check(const DualVector& gamma, double t) {
  if (!(t > 0.0 && t <= 0.5)) throw Error(ErrorKind::InvalidArgument, "t must lie in (0, 0.5]");
  require_positive(gamma);
  const auto& set = gamma.set();
  std::vector<double> scaled;
  for (std::size_t i = 0; i < set.size(); ++i) scaled.push_back(gamma[i] * std::pow(t, set[i]));
  const DiscreteDual dual(set, scaled, 1);

  EmCheck out;
  out.direct = series_sums(dual, 1e-12).entropy;
  const unsigned js = set.j_star();
  out.asymptotic = m_alpha(gamma, {1e-12, 1e-15, 4000}) / t - 0.5 * js * std::log(2.0 * std::numbers::pi / t);
  if (js == 0) {
    out.asymptotic -= 0.5 * geometric_entropy(bose(gamma.leading_low()));
  } else {
    out.asymptotic += 0.5 * (std::log(gamma.leading_low()) - 1.0);
  }
  return out;
}

}  // namespace maxpart
