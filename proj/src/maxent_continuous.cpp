#include "maxpart/maxent_continuous.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxpart/error.hpp"

namespace maxpart {

DualVector::DualVector(ProfileSet set, std::vector<double> beta)
    : set_(std::move(set)), beta_(std::move(beta)) {
  if (beta_.size() != set_.size()) {
    throw Error(ErrorKind::InvalidArgument, "beta length does not match J");
  }
  for (double b : beta_) {
    if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "beta must be finite");
  }
  poly_ = PowerPolynomial(set_.powers(), beta_);
}

namespace {

using QPoly = std::vector<mpq_class>;  // index = degree

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

QPoly remainder(QPoly a, const QPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

int sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

bool is_positive_on_half_line(const DualVector& beta) {
  const auto& set = beta.set();
  if (!(beta.beta().front() > 0.0) || !(beta.beta().back() > 0.0)) return false;
  if (set.size() == 1) return true;
  // q(x) = p(x) / x^{j_star}, so q(0) = beta_{j_star} > 0.
  QPoly q(set.j_max() - set.j_star() + 1, mpq_class(0));
  for (std::size_t i = 0; i < set.size(); ++i) q[set[i] - set.j_star()] = mpq_class(beta[i]);
  trim(q);
  std::vector<QPoly> chain{q, derivative(q)};
  while (!chain.back().empty()) {
    QPoly r = remainder(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  std::vector<int> at_zero;
  std::vector<int> at_inf;
  for (const auto& p : chain) {
    if (p.empty()) continue;
    at_zero.push_back(sgn(p.front()));
    at_inf.push_back(sgn(p.back()));
  }
  return sign_changes(at_zero) - sign_changes(at_inf) == 0;
}

void require_positive(const DualVector& beta) {
  if (!is_positive_on_half_line(beta)) {
    throw Error(ErrorKind::DomainViolation, "p_beta is not positive on (0, inf)");
  }
}

double GramMatrix::log_det() const {
  Eigen::LLT<Eigen::MatrixXd> llt(entries);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSigma, "matrix is not positive definite");
  }
  const auto& l = llt.matrixL();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    const double d = l(i, i);
    if (!(d > 0.0)) throw Error(ErrorKind::SingularSigma, "zero pivot in Cholesky");
    acc += 2.0 * std::log(d);
  }
  return acc;
}

double boltzmann_moment(const DualVector& beta, unsigned j, const QuadratureOptions& quad) {
  require_positive(beta);
  if (j < beta.set().j_star()) {
    throw Error(ErrorKind::InvalidArgument, "moment power below j_star diverges");
  }
  const auto& p = beta.polynomial();
  auto integrand = [&](double x) {
    const double f = bose(p(x));
    if (f == 0.0) return 0.0;
    return std::pow(x, static_cast<int>(j)) * f;
  };
  return integrate_half_line(integrand, quad);
}

MomentVector forward_map(const DualVector& beta, const QuadratureOptions& quad) {
  std::vector<double> out;
  for (unsigned j : beta.set().powers()) out.push_back(boltzmann_moment(beta, j, quad));
  return MomentVector(beta.set(), std::move(out));
}

SigmaMatrix sigma_matrix(const DualVector& beta, const QuadratureOptions& quad) {
  require_positive(beta);
  const auto& set = beta.set();
  const auto& p = beta.polynomial();
  const auto d = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      const int power = static_cast<int>(set[a] + set[b]);
      auto integrand = [&](double x) {
        const double v = bose_variance(p(x));
        if (v == 0.0) return 0.0;
        return std::pow(x, power) * v;
      };
      m(a, b) = m(b, a) = integrate_half_line(integrand, quad);
    }
  }
  return {set, std::move(m)};
}

double m_alpha(const DualVector& beta, const QuadratureOptions& quad) {
  require_positive(beta);
  const auto& p = beta.polynomial();
  return integrate_half_line([&](double x) { return bose_entropy(p(x)); }, quad);
}

double log_partition_continuous(const DualVector& beta, const QuadratureOptions& quad) {
  require_positive(beta);
  const auto& p = beta.polynomial();
  return integrate_half_line([&](double x) { return log_bose_partition(p(x)); }, quad);
}

namespace {

// Solution of int x^j/(e^{b x^j} - 1) dx = a, from u = b x^j.
double single_power_beta(unsigned j, double a) {
  const double s = 1.0 + 1.0 / static_cast<double>(j);
  const double c = boost::math::tgamma(s) * boost::math::zeta(s) / static_cast<double>(j);
  return std::pow(c / a, static_cast<double>(j) / static_cast<double>(j + 1));
}

double relative_residual(std::span<const double> moments, const MomentVector& alpha) {
  double r = 0.0;
  for (std::size_t i = 0; i < moments.size(); ++i) {
    r = std::max(r, std::abs(moments[i] - alpha[i]) / alpha[i]);
  }
  return r;
}

double objective(const DualVector& beta, const MomentVector& alpha,
                 const QuadratureOptions& quad) {
  double acc = log_partition_continuous(beta, quad);
  for (std::size_t i = 0; i < alpha.size(); ++i) acc += alpha[i] * beta[i];
  return acc;
}

}  // namespace

std::vector<double> initial_beta_guess(const MomentVector& alpha) {
  const auto& set = alpha.set();
  std::size_t positive = 0;
  for (unsigned j : set.powers()) positive += j > 0 ? 1 : 0;
  std::vector<double> beta;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] == 0) {
      beta.push_back(1.0);
    } else {
      beta.push_back(single_power_beta(set[i], alpha[i]) / static_cast<double>(positive));
    }
  }
  return beta;
}

namespace {

struct NewtonResult {
  DualVector beta;
  double residual;
  bool converged;
  bool stalled;
};

// Damped Newton toward `target` from `beta`, spending at most `budget`
// iterations (decremented in place).
NewtonResult newton(DualVector beta, const MomentVector& target, unsigned& budget,
                    unsigned max_here, const SolveOptions& opts) {
  const auto& set = target.set();
  const auto d = static_cast<Eigen::Index>(set.size());
  auto moments_of = [&](const DualVector& b) {
    std::vector<double> m;
    for (unsigned j : set.powers()) m.push_back(boltzmann_moment(b, j, opts.quad));
    return m;
  };

  std::vector<double> moments;
  double residual = std::numeric_limits<double>::infinity();
  double f_current = 0.0;
  try {
    moments = moments_of(beta);
    residual = relative_residual(moments, target);
    f_current = objective(beta, target, opts.quad);
  } catch (const Error&) {
    return {beta, residual, false, true};
  }

  for (unsigned iter = 0; iter < max_here; ++iter) {
    if (residual <= opts.residual_tol) return {beta, residual, true, false};
    if (budget == 0) break;
    --budget;
    // The Hessian only steers the step, so a looser tolerance suffices.
    QuadratureOptions loose = opts.quad;
    loose.rel_tol = std::max(loose.rel_tol, 1e-8);
    SigmaMatrix sigma{set, {}};
    try {
      sigma = sigma_matrix(beta, loose);
    } catch (const Error&) {
      return {beta, residual, false, true};
    }
    Eigen::VectorXd excess(d);
    for (Eigen::Index i = 0; i < d; ++i) excess(i) = moments[i] - target[i];
    // Sigma is a Hankel-like Gram matrix; equilibrate before factoring.
    const Eigen::VectorXd scale = sigma.entries.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale.asDiagonal() * sigma.entries * scale.asDiagonal();
    const Eigen::VectorXd rhs = scale.asDiagonal() * excess;

    // Try a step (scaled Sigma + lambda I)^{-1} excess at length t. lambda > 0
    // bends the step toward scaled steepest descent, which helps when the
    // Newton direction runs into the positivity wall.
    auto attempt = [&](double lambda, double t_min) {
      Eigen::MatrixXd h = scaled;
      h.diagonal().array() += lambda;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      if (ldlt.info() != Eigen::Success) return false;
      const Eigen::VectorXd step = scale.asDiagonal() * ldlt.solve(rhs);
      if (!step.allFinite()) return false;
      // Directional derivative of the dual objective, (target - m) . step < 0.
      const double slope = -excess.dot(step);
      for (double t = 1.0; t >= t_min; t *= 0.5) {
        std::vector<double> trial(beta.beta().begin(), beta.beta().end());
        for (Eigen::Index i = 0; i < d; ++i) trial[i] += t * step(i);
        DualVector candidate(set, std::move(trial));
        if (!is_positive_on_half_line(candidate)) continue;
        try {
          const double f_trial = objective(candidate, target, opts.quad);
          const bool armijo = f_trial <= f_current + 1e-4 * t * slope;
          // At quadrature-noise level the objective stops being informative;
          // fall back to residual decrease.
          const bool noise =
              std::abs(f_trial - f_current) <= 1e-11 * (1.0 + std::abs(f_current));
          if (!armijo && !noise) continue;
          auto m = moments_of(candidate);
          const double r = relative_residual(m, target);
          if (!armijo && !(r < residual)) continue;
          beta = std::move(candidate);
          moments = std::move(m);
          residual = r;
          f_current = f_trial;
          return true;
        } catch (const Error&) {
          continue;
        }
      }
      return false;
    };

    bool accepted = attempt(0.0, 1.0 / 16);
    for (double lambda = 1e-3; !accepted && lambda <= 1e3; lambda *= 10) {
      accepted = attempt(lambda, 1.0 / 16);
    }
    if (!accepted) accepted = attempt(0.0, 1e-14);
    if (!accepted) return {beta, residual, false, true};
  }
  return {beta, residual, residual <= opts.residual_tol, false};
}

}  // namespace

SolveReport solve_beta(const MomentVector& alpha, const SolveOptions& opts) {
  const auto& set = alpha.set();
  DualVector start(set, opts.initial_beta ? *opts.initial_beta : initial_beta_guess(alpha));
  require_positive(start);
  unsigned budget = opts.max_iterations;
  auto used = [&] { return opts.max_iterations - budget; };

  // Direct attempt.
  auto direct = newton(start, alpha, budget, 40, opts);
  if (direct.converged) return {direct.beta, used(), direct.residual, true, "converged"};

  // Continuation along alpha(s) = (1-s) alpha(start) + s alpha, each stage
  // warm-started from the previous solution.
  std::vector<double> origin;
  try {
    const auto m = forward_map(start, opts.quad);
    origin.assign(m.values().begin(), m.values().end());
  } catch (const Error&) {
    budget = 0;
  }
  DualVector beta = start;
  double s = 0.0;
  double ds = 0.25;
  NewtonResult best = direct;
  while (budget > 0 && ds > 1e-6) {
    const double next = std::min(1.0, s + ds);
    std::vector<double> mid;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      mid.push_back((1.0 - next) * origin[i] + next * alpha[i]);
    }
    const MomentVector stage(set, mid);
    auto r = newton(beta, stage, budget, 25, opts);
    if (r.converged) {
      beta = r.beta;
      s = next;
      if (s >= 1.0) return {r.beta, used(), r.residual, true, "converged by continuation"};
      ds = std::min(2.0 * ds, 1.0 - s);
    } else {
      ds *= 0.5;
    }
  }
  // Report the final iterate measured against the requested alpha.
  try {
    std::vector<double> m;
    for (unsigned j : set.powers()) m.push_back(boltzmann_moment(beta, j, opts.quad));
    const double residual = relative_residual(m, alpha);
    if (residual < best.residual) best = {beta, residual, false, false};
  } catch (const Error&) {
  }
  return {best.beta, used(), best.residual, false,
          "no convergence: alpha may violate the solvability assumption"};
}

std::string to_string(HankelDiagnosis d) {
  switch (d) {
    case HankelDiagnosis::Feasible: return "feasible";
    case HankelDiagnosis::Boundary: return "boundary";
    case HankelDiagnosis::Infeasible: return "infeasible";
  }
  return "unknown";
}

HankelDiagnosis hankel_feasibility(std::span<const double> moments, unsigned d, double tol) {
  if (moments.size() < static_cast<std::size_t>(d) + 1) {
    throw Error(ErrorKind::InvalidArgument, "need moments 0..d");
  }
  if (moments[0] != 1.0) throw Error(ErrorKind::InvalidArgument, "alpha_0 must be 1");
  std::vector<double> minors;
  // A_m uses alpha_{i+j}, needs 2(m-1) <= d; the shifted one alpha_{i+j+1}.
  for (unsigned shift = 0; shift <= 1; ++shift) {
    for (unsigned m = 1; 2 * (m - 1) + shift <= d; ++m) {
      Eigen::MatrixXd h(m, m);
      for (unsigned i = 0; i < m; ++i) {
        for (unsigned j = 0; j < m; ++j) h(i, j) = moments[i + j + shift];
      }
      minors.push_back(h.determinant());
    }
  }
  bool boundary = false;
  for (double det : minors) {
    if (det < -tol) return HankelDiagnosis::Infeasible;
    if (det <= tol) boundary = true;
  }
  return boundary ? HankelDiagnosis::Boundary : HankelDiagnosis::Feasible;
}

}  // namespace maxpart
