#include "maxpart/maxent_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maxpart/error.hpp"

namespace maxpart {

namespace {

constexpr double kCutoffLevel = 45.0;
constexpr std::uint64_t kMaxMonotoneFrom = 100'000'000;
// f = 1/(e^p - 1) <= e^{-p} (1 + 2e^{-p}); at p >= 45 this factor is 1 + 6e-20.
constexpr double kSlack = 1.000001;

// 1 + max |c_i / c_d|, a bound on the moduli of the roots.
double cauchy_bound(std::span<const double> c) {
  std::size_t d = c.size();
  while (d > 0 && c[d - 1] == 0.0) --d;
  if (d <= 1) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) m = std::max(m, std::abs(c[i] / c[d - 1]));
  return 1.0 + m;
}

std::vector<double> differentiate(std::span<const double> c) {
  std::vector<double> out;
  for (std::size_t i = 1; i < c.size(); ++i) out.push_back(static_cast<double>(i) * c[i]);
  return out;
}

}  // namespace

DiscreteDual::DiscreteDual(ProfileSet set, std::vector<double> beta_hat, std::uint64_t n)
    : set_(std::move(set)), beta_hat_(std::move(beta_hat)), n_(n) {
  if (beta_hat_.size() != set_.size()) {
    throw Error(ErrorKind::InvalidArgument, "beta_hat length does not match J");
  }
  for (double b : beta_hat_) {
    if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "beta_hat not finite");
  }
  if (n_ == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(beta_hat_.back() > 0.0)) {
    throw Error(ErrorKind::DomainViolation, "leading beta_hat must be positive");
  }
  poly_ = PowerPolynomial(set_.powers(), beta_hat_);

  const auto d1 = differentiate(poly_.dense());
  const auto d2 = differentiate(d1);
  const double bound = std::ceil(std::max({1.0, cauchy_bound(d1), cauchy_bound(d2)}));
  if (bound > static_cast<double>(kMaxMonotoneFrom)) {
    throw Error(ErrorKind::TailBoundFailure, "p is not monotone before k = 1e8");
  }
  monotone_from_ = static_cast<std::uint64_t>(bound);
  for (std::uint64_t k = 1; k <= monotone_from_; ++k) {
    if (!(poly_(static_cast<double>(k)) > 0.0)) {
      std::ostringstream os;
      os << "p(" << k << ") <= 0";
      throw Error(ErrorKind::DomainViolation, os.str());
    }
  }

  // Smallest K >= monotone_from with p(K) >= 45; p increases from there.
  std::uint64_t lo = monotone_from_;
  if (poly_(static_cast<double>(lo)) >= kCutoffLevel) {
    K_ = lo;
    return;
  }
  std::uint64_t hi = lo;
  while (poly_(static_cast<double>(hi)) < kCutoffLevel) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 50)) {
      throw Error(ErrorKind::TailBoundFailure, "p grows too slowly for a cutoff");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (poly_(static_cast<double>(mid)) >= kCutoffLevel ? hi : lo) = mid;
  }
  K_ = hi;
}

SeriesSums series_sums(const DiscreteDual& dual, double tail_tol, std::uint64_t max_terms) {
  const auto& set = dual.set();
  const std::size_t d = set.size();
  const unsigned top = 2 * set.j_max();

  std::vector<CompensatedSum> moment(d);
  std::vector<CompensatedSum> cov(d * d);
  CompensatedSum entropy;
  CompensatedSum log_z;
  std::vector<double> pw(top + 1);

  auto add_range = [&](std::uint64_t from, std::uint64_t to) {
    for (std::uint64_t k = from; k <= to; ++k) {
      const double x = static_cast<double>(k);
      const double p = dual.p(x);
      if (!(p > 0.0)) throw Error(ErrorKind::DomainViolation, "p(k) <= 0");
      const double f = bose(p);
      if (f == 0.0) continue;
      pw[0] = 1.0;
      for (unsigned i = 1; i <= top; ++i) pw[i] = pw[i - 1] * x;
      const double var = f * (1.0 + f);
      for (std::size_t a = 0; a < d; ++a) {
        moment[a].add(pw[set[a]] * f);
        for (std::size_t b = a; b < d; ++b) cov[a * d + b].add(pw[set[a] + set[b]] * var);
      }
      entropy.add(p * f + log_bose_partition(p));
      log_z.add(log_bose_partition(p));
    }
  };

  // sum_{k>K} k^m e^{-p(k)} <= e^{-p(K)} int_K^inf x^m e^{-s(x-K)} dx when
  // s = p'(K) > m/K (the summand then decreases), which is
  // e^{-p(K)} sum_{i<=m} m!/(m-i)! K^{m-i} s^{-(i+1)}.
  auto power_tail = [](unsigned m, double K, double s, double pK) {
    if (!(s * K > static_cast<double>(m))) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    double falling = 1.0;
    for (unsigned i = 0; i <= m; ++i) {
      acc += falling * std::pow(K, static_cast<double>(m - i)) / std::pow(s, i + 1.0);
      falling *= static_cast<double>(m - i);
    }
    return kSlack * std::exp(-pK) * acc;
  };

  SeriesSums out;
  std::uint64_t K = dual.truncation_K();
  add_range(1, K);
  while (true) {
    const double Kd = static_cast<double>(K);
    const double pK = dual.p(Kd);
    const double s = dual.p_derivative(Kd);
    out.moments.assign(d, 0.0);
    out.moment_tail.assign(d, 0.0);
    out.covariance = Eigen::MatrixXd(d, d);
    out.covariance_tail = Eigen::MatrixXd(d, d);
    bool ok = pK >= kCutoffLevel && s > 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      out.moments[a] = moment[a].value();
      out.moment_tail[a] = power_tail(set[a], Kd, s, pK);
      ok = ok && out.moment_tail[a] <= tail_tol * out.moments[a];
      for (std::size_t b = a; b < d; ++b) {
        const double v = cov[a * d + b].value();
        // e^p/(e^p-1)^2 <= f (1 + 2 e^{-p}) at the same slack.
        const double t = power_tail(set[a] + set[b], Kd, s, pK);
        out.covariance(a, b) = out.covariance(b, a) = v;
        out.covariance_tail(a, b) = out.covariance_tail(b, a) = t;
        ok = ok && t <= tail_tol * v;
      }
    }
    // G(f) <= (1+p) f and (1+p) e^{-p} decreases, so the entropy tail is at
    // most e^{-p(K)} int_0^inf (1 + p(K) + s u) e^{-s u} du.
    out.entropy = entropy.value();
    out.entropy_tail = s > 0.0 ? kSlack * std::exp(-pK) * (2.0 + pK) / s
                               : std::numeric_limits<double>::infinity();
    out.log_z = log_z.value();
    out.log_z_tail = s > 0.0 ? kSlack * std::exp(-pK) / s
                             : std::numeric_limits<double>::infinity();
    ok = ok && out.entropy_tail <= tail_tol && out.log_z_tail <= tail_tol;
    out.terms = K;
    if (ok) return out;
    if (K >= max_terms) {
      std::ostringstream os;
      os << "tail bound not met after " << K << " terms";
      throw Error(ErrorKind::TailBoundFailure, os.str());
    }
    const std::uint64_t next = std::min(max_terms, 2 * K);
    add_range(K + 1, next);
    K = next;
  }
}

double discrete_moment(const DiscreteDual& dual, unsigned j) {
  const auto idx = dual.set().index_of(j);
  if (idx) return series_sums(dual).moments[*idx];
  // A power outside J: sum it directly with the same cutoff logic.
  ProfileSet widened = [&] {
    std::vector<unsigned> pw(dual.set().powers().begin(), dual.set().powers().end());
    pw.insert(std::upper_bound(pw.begin(), pw.end(), j), j);
    return ProfileSet(pw);
  }();
  std::vector<double> beta;
  for (unsigned p : widened.powers()) {
    const auto i = dual.set().index_of(p);
    beta.push_back(i ? dual[*i] : 0.0);
  }
  if (widened.j_max() != dual.set().j_max()) {
    throw Error(ErrorKind::InvalidArgument, "moment power above j_max");
  }
  const DiscreteDual wide(widened, beta, dual.n());
  return series_sums(wide).moments[*widened.index_of(j)];
}

double log_partition(const DiscreteDual& dual) { return series_sums(dual).log_z; }

double entropy_mu(const DiscreteDual& dual) { return series_sums(dual).entropy; }

CovarianceMatrixS covariance_s(const DiscreteDual& dual) {
  return {dual.set(), series_sums(dual).covariance};
}

namespace {

double relative_residual(std::span<const double> moments, std::span<const double> target) {
  double r = 0.0;
  for (std::size_t i = 0; i < moments.size(); ++i) {
    r = std::max(r, std::abs(moments[i] - target[i]) / target[i]);
  }
  return r;
}

}  // namespace

DiscreteDual solve_beta_hat(const Profile& target, const DualVector& beta_continuous,
                            std::uint64_t n, const DiscreteSolveOptions& opts) {
  const auto& set = target.set();
  if (!(beta_continuous.set() == set)) {
    throw Error(ErrorKind::InvalidArgument, "profile and dual vector use different J");
  }
  const auto d = static_cast<Eigen::Index>(set.size());
  std::vector<double> N;
  for (const auto& v : target.values()) N.push_back(v.get_d());

  std::vector<double> start;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < set.size(); ++i) {
    start.push_back(beta_continuous[i] * std::pow(nd, -0.5 * set[i]));
  }

  DiscreteDual dual(set, start, n);
  SeriesSums sums = series_sums(dual);
  auto objective = [&](const DiscreteDual& dd, const SeriesSums& ss) {
    double acc = ss.log_z;
    for (std::size_t i = 0; i < N.size(); ++i) acc += dd[i] * N[i];
    return acc;
  };
  double f_current = objective(dual, sums);
  double residual = relative_residual(sums.moments, N);

  for (unsigned iter = 0; iter < opts.max_iterations; ++iter) {
    if (residual <= opts.residual_tol) return dual;
    Eigen::VectorXd excess(d);
    for (Eigen::Index i = 0; i < d; ++i) excess(i) = sums.moments[i] - N[i];
    const Eigen::VectorXd scale = sums.covariance.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale.asDiagonal() * sums.covariance * scale.asDiagonal();
    const Eigen::VectorXd rhs = scale.asDiagonal() * excess;

    // Same globalization as the continuous solver: Newton first, then
    // Levenberg-Marquardt blends when the step leaves the domain.
    auto attempt = [&](double lambda, double t_min) {
      Eigen::MatrixXd h = scaled;
      h.diagonal().array() += lambda;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      if (ldlt.info() != Eigen::Success) return false;
      const Eigen::VectorXd step = scale.asDiagonal() * ldlt.solve(rhs);
      if (!step.allFinite()) return false;
      const double slope = -excess.dot(step);
      for (double t = 1.0; t >= t_min; t *= 0.5) {
        std::vector<double> trial(dual.beta_hat().begin(), dual.beta_hat().end());
        for (Eigen::Index i = 0; i < d; ++i) trial[i] += t * step(i);
        try {
          DiscreteDual candidate(set, std::move(trial), n);
          SeriesSums s = series_sums(candidate);
          const double f_trial = objective(candidate, s);
          const double r = relative_residual(s.moments, N);
          const bool armijo = f_trial <= f_current + 1e-4 * t * slope;
          const bool noise =
              std::abs(f_trial - f_current) <= 1e-13 * (1.0 + std::abs(f_current));
          if (!armijo && !(noise && r < residual)) continue;
          dual = std::move(candidate);
          sums = std::move(s);
          f_current = f_trial;
          residual = r;
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
    if (!accepted) break;
  }
  if (residual <= opts.residual_tol) return dual;
  std::ostringstream os;
  os << "discrete system did not converge, relative residual " << residual;
  throw Error(ErrorKind::NoConvergence, os.str());
}

}  // namespace maxpart
