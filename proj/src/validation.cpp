#include "maxpart/validation.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "maxpart/asymptotics.hpp"
#include "maxpart/error.hpp"
#include "maxpart/exact_count.hpp"
#include "maxpart/intpoly.hpp"
#include "maxpart/sampler.hpp"

namespace maxpart {

namespace {

// Collects sub-check outcomes and a short human-readable trail.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      failures_ << (failures_.tellp() > 0 ? "; " : "") << "FAILED " << what;
    }
  }
  void note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? "; " : "") << s; }
  bool passed() const { return passed_; }
  std::string detail() const {
    std::string f = failures_.str();
    std::string n = notes_.str();
    if (f.empty()) return n;
    return n.empty() ? f : f + "; " + n;
  }

 private:
  bool passed_ = true;
  std::ostringstream failures_;
  std::ostringstream notes_;
};

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v, const char* spec = "%.3g") {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(spec, v[i]);
  return s + "]";
}

MomentVector ones(const ProfileSet& set) {
  return MomentVector(set, std::vector<double>(set.size(), 1.0));
}

DualVector solved(const MomentVector& alpha) {
  const auto r = solve_beta(alpha);
  if (!r.converged) throw Error(ErrorKind::NoConvergence, r.message);
  return r.beta;
}

void hardy_ramanujan(Check& c) {
  const ProfileSet J({1});
  const double beta_true = std::numbers::pi / std::sqrt(6.0);
  const auto r = solve_beta(ones(J));
  c.expect(r.converged, "solve_beta converged");
  c.expect(std::abs(r.beta[0] - beta_true) <= 1e-8, "beta = pi/sqrt(6) within 1e-8");
  c.note("beta err " + fmt("%.2e", r.beta[0] - beta_true));
  const double M = m_alpha(r.beta);
  const double M_true = std::numbers::pi * std::sqrt(2.0 / 3.0);
  c.expect(std::abs(M - M_true) <= 1e-8, "M = pi sqrt(2/3) within 1e-8");
  c.note("M err " + fmt("%.2e", M - M_true));
  c.expect(exponent_b(J) == 1, "b = 1 exactly");
  const double cc = prefactor_c(r.beta, sigma_matrix(r.beta), enumerate_qj(J));
  const double c_true = 1.0 / (4.0 * std::sqrt(3.0));
  c.expect(std::abs(cc - c_true) <= 1e-6, "c = 1/(4 sqrt 3) within 1e-6");
  c.note("c err " + fmt("%.2e", cc - c_true));
}

void exact_vs_asymptotic(Check& c) {
  const ProfileSet J({1});
  std::vector<double> errs;
  for (std::uint64_t n : {25, 100, 400}) {
    const auto e = estimate_p(ones(J), n, EstimateMode::Refined);
    const BigInt exact = count_pn(n);
    const double log_exact = std::log(exact.get_d());
    errs.push_back(std::abs(e.log_estimate - log_exact));
    if (n == 100) {
      const double ratio = std::exp(e.log_estimate - log_exact);
      c.expect(ratio >= 0.9 && ratio <= 1.1, "refined/p(100) in [0.9, 1.1]");
      c.note("ratio at 100 " + fmt("%.5f", ratio));
      c.expect(count_exact(Profile(J, {BigInt(100)})) == exact,
               "count_pn(100) == count_exact((100))");
    }
  }
  c.expect(strictly_decreasing(errs), "|log error| strictly decreasing");
  c.note("|log err| " + list(errs));
}

void qj_cardinalities(Check& c) {
  const std::size_t expected[] = {1, 2, 12, 288};
  std::vector<double> got;
  for (unsigned d = 1; d <= 4; ++d) {
    std::vector<unsigned> powers;
    for (unsigned j = 1; j <= d; ++j) powers.push_back(j);
    const auto lattice = enumerate_qj(ProfileSet(powers));
    got.push_back(static_cast<double>(lattice.cardinality()));
    c.expect(lattice.cardinality() == expected[d - 1], "|Q_[" + std::to_string(d) + "]|");
  }
  c.note("sizes " + list(got, "%.0f"));
  const auto q12 = enumerate_qj(ProfileSet({1, 2}));
  const Rational half(1, 2);
  bool ok = q12.cardinality() == 2 && q12.polys()[0].is_zero() &&
            q12.polys()[1].coeffs == std::vector<Rational>{half, half};
  c.expect(ok, "Q_{1,2} = {0, (x^2+x)/2}");
}

void worked_examples(Check& c) {
  struct Example {
    const char* name;
    ProfileSet set;
    std::vector<double> alpha;
    std::vector<double> beta;
  };
  const Example examples[] = {
      {"five-power", ProfileSet({0, 1, 2, 3, 4}),
       {12.8748, 6.698, 4.66192, 3.72617, 3.15877},
       {0.95, -10.1, 36.5, -49.5, 22.4}},
      {"three-power", ProfileSet({1, 2, 3}), {4.31168, 3.86652, 3.65774}, {4.0, -8.5, 4.6}},
  };
  for (const auto& ex : examples) {
    const auto fwd = forward_map(DualVector(ex.set, ex.beta));
    double worst_fwd = 0.0;
    for (std::size_t i = 0; i < ex.set.size(); ++i) {
      worst_fwd = std::max(worst_fwd, rel(fwd[i], ex.alpha[i]));
    }
    c.expect(worst_fwd <= 2e-2, std::string(ex.name) + " forward map");
    const auto r = solve_beta(MomentVector(ex.set, ex.alpha));
    c.expect(r.converged, std::string(ex.name) + " solve converged");
    double worst_inv = 0.0;
    for (std::size_t i = 0; i < ex.set.size(); ++i) {
      worst_inv = std::max(worst_inv, rel(r.beta[i], ex.beta[i]));
    }
    c.expect(worst_inv <= 2e-2, std::string(ex.name) + " inverse");
    c.note(std::string(ex.name) + " rel err fwd " + fmt("%.1e", worst_fwd) + " inv " +
           fmt("%.1e", worst_inv));
  }
}

// The table for J={1,2} on the box n <= 30, N_2 <= 900 serves both the
// marginalization identity and the lattice necessity sweep.
const CountTable& square_table() {
  static const CountTable table = build_count_table(ProfileSet({1, 2}), {30, 900});
  return table;
}

void two_constraint_counts(Check& c) {
  const ProfileSet J1({1});
  const ProfileSet J2({1, 2});
  c.expect(count_exact(Profile(J1, {BigInt(4)})) == 5, "p((4)) = 5");
  c.expect(count_exact(Profile(J2, {BigInt(4), BigInt(10)})) == 1, "p((4,10)) = 1");
  c.expect(count_exact(Profile(J2, {BigInt(3), BigInt(4)})) == 0, "p((3,4)) = 0");
  const auto& table = square_table();
  int checked = 0;
  for (std::uint64_t n = 0; n <= 30; ++n) {
    BigInt sum = 0;
    for (std::uint64_t m = 0; m <= 900; ++m) {
      const std::uint64_t u[] = {n, m};
      sum += table.at(u);
    }
    c.expect(sum == count_pn(n), "marginal at n = " + std::to_string(n));
    ++checked;
  }
  // Spot-check the dense table against the pruned single-target counter.
  for (std::uint64_t n : {10, 20, 30}) {
    for (std::uint64_t m = n; m <= n * n; m += 7) {
      const std::uint64_t u[] = {n, m};
      const BigInt v[] = {BigInt(static_cast<unsigned long>(n)),
                          BigInt(static_cast<unsigned long>(m))};
      c.expect(count_exact(J2, v) == table.at(u), "table vs count_exact");
    }
  }
  c.note("marginals checked for n = 0.." + std::to_string(checked - 1));
}

void lclt_convergence(Check& c) {
  const ProfileSet J({1, 2});
  const MomentVector alpha = ones(J);
  const DualVector beta = solved(alpha);
  const auto lattice = enumerate_qj(J);
  std::vector<double> ratios;
  std::vector<double> dist;
  for (std::uint64_t n : {16, 36, 64}) {
    const Profile N = scaled_profile(alpha, n);
    const DiscreteDual dual = solve_beta_hat(N, beta, n);
    const SeriesSums s = series_sums(dual);
    double dot = 0.0;
    for (std::size_t i = 0; i < J.size(); ++i) dot += dual[i] * N[i].get_d();
    const double log_mu = std::log(count_exact(N).get_d()) - dot - s.log_z;
    const double ratio = std::exp(log_mu - log_lclt_factor({J, s.covariance}, lattice));
    ratios.push_back(ratio);
    dist.push_back(std::abs(ratio - 1.0));
  }
  c.expect(strictly_decreasing(dist), "|ratio - 1| strictly decreasing");
  c.note("ratios " + list(ratios, "%.4f"));
}

void entropy_expansion_check(Check& c) {
  for (const auto& J : {ProfileSet({1}), ProfileSet({1, 2})}) {
    const MomentVector alpha = ones(J);
    const DualVector beta = solved(alpha);
    const double M = m_alpha(beta);
    std::vector<double> gaps;
    for (std::uint64_t n : {100, 1000, 10000}) {
      const DiscreteDual dual = solve_beta_hat(scaled_profile(alpha, n), beta, n);
      gaps.push_back(std::abs(entropy_mu(dual) - entropy_expansion(beta, M, n)));
    }
    c.expect(strictly_decreasing(gaps), J.to_string() + " gap decreasing");
    c.expect(gaps.back() <= 0.05, J.to_string() + " final gap <= 0.05");
    c.note(J.to_string() + " gaps " + list(gaps));
  }
}

void euler_maclaurin(Check& c) {
  const DualVector cases[] = {DualVector(ProfileSet({1}), {1.0}),
                              DualVector(ProfileSet({0, 1}), {1.0, 1.0})};
  for (const auto& gamma : cases) {
    std::vector<double> diffs;
    std::vector<double> floors;
    for (double t : {1e-1, 1e-2, 1e-3}) {
      const auto r = em_sum_check(gamma, t);
      diffs.push_back(std::abs(r.direct - r.asymptotic));
      // Summation roundoff on a sum of size |direct|.
      floors.push_back(1e-12 * std::max(1.0, std::abs(r.direct)));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) {
      decreasing = decreasing && (diffs[i] < diffs[i - 1] || diffs[i] <= floors[i]);
    }
    const std::string name = gamma.set().to_string();
    c.expect(decreasing, name + " gap decreasing (or at roundoff)");
    c.expect(diffs.back() <= 1e-2, name + " final gap <= 1e-2");
    c.note(name + " gaps " + list(diffs));
  }
}

void uniform_sampling(Check& c) {
  const ProfileSet J({1});
  const DualVector beta = solved(ones(J));
  {
    const Profile N(J, {BigInt(6)});
    const auto classes = enumerate_profile_partitions(N, 100);
    const DiscreteDual dual = solve_beta_hat(N, beta, 6);
    CounterRng rng(0, 9);
    std::map<Partition, std::uint64_t> seen;
    for (const auto& p : classes) seen[p] = 0;
    const std::uint64_t draws = 11000;
    bool on_support = true;
    for (std::uint64_t i = 0; i < draws; ++i) {
      const auto s = sample_uniform_exact(N, dual, rng, 1'000'000);
      auto it = seen.find(s.partition);
      if (it == seen.end()) {
        on_support = false;
      } else {
        ++it->second;
      }
    }
    c.expect(classes.size() == 11 && on_support, "11 classes, every draw among them");
    const double expected = static_cast<double>(draws) / static_cast<double>(classes.size());
    double chi2 = 0.0;
    for (const auto& [p, k] : seen) chi2 += std::pow(static_cast<double>(k) - expected, 2) / expected;
    const boost::math::chi_squared dist(static_cast<double>(classes.size() - 1));
    const double pvalue = boost::math::cdf(boost::math::complement(dist, chi2));
    c.expect(pvalue > 0.001, "chi-square p-value > 0.001");
    c.note("chi2 " + fmt("%.2f", chi2) + " p " + fmt("%.3f", pvalue));
  }
  {
    const Profile N(J, {BigInt(30)});
    const DiscreteDual dual = solve_beta_hat(N, beta, 30);
    const auto mc = mc_profile_probability(dual, N, 1'000'000, CounterRng(0, 30));
    const double implied = std::exp(entropy_mu(dual)) * mc.estimate;
    const double exact = count_pn(30).get_d();
    c.expect(rel(implied, exact) <= 0.1, "exp(H) * rate within 10% of p(30)");
    c.note("exp(H)*rate " + fmt("%.1f", implied) + " vs " + fmt("%.0f", exact));
  }
}

void limit_shape_check(Check& c) {
  const ProfileSet J({1});
  const double b = std::numbers::pi / std::sqrt(6.0);
  const DualVector exact_beta(J, {b});
  const auto grid = linear_grid(0.01, 5.0, 500);
  const auto curve = limit_shape(exact_beta, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double closed = -std::log(-std::expm1(-b * grid[i])) / b;
    worst = std::max(worst, std::abs(curve.values[i] - closed));
  }
  c.expect(worst <= 1e-8, "closed form within 1e-8");
  c.note("closed-form err " + fmt("%.1e", worst));

  const DualVector beta = solved(ones(J));
  const auto window = linear_grid(0.5, 2.0, 151);
  const auto limit = limit_shape(beta, window);
  std::vector<double> medians;
  for (std::uint64_t n : {100, 1000}) {
    const Profile N(J, {BigInt(static_cast<unsigned long>(n))});
    const DiscreteDual dual = solve_beta_hat(N, beta, n);
    CounterRng rng(0, 1000 + n);
    std::vector<double> d;
    for (int i = 0; i < 50; ++i) {
      const auto s = sample_uniform_exact(N, dual, rng, 100'000'000);
      d.push_back(shape_distance(empirical_shape(s.partition, n, window), limit, 0.5, 2.0));
    }
    std::sort(d.begin(), d.end());
    medians.push_back(0.5 * (d[24] + d[25]));
  }
  c.expect(medians[1] < medians[0], "median distance decreasing");
  c.note("medians " + list(medians, "%.4f"));
}

void lattice_density(Check& c) {
  const ProfileSet J({1, 2});
  const auto lattice = enumerate_qj(J);
  const Rational density = nt_density(lattice, 50);
  c.expect(density == Rational(1, 2), "density = 1/2");
  c.note("density " + density.get_str());
  const auto& table = square_table();
  std::uint64_t positive = 0;
  bool ok = true;
  for (std::uint64_t n = 0; n <= 30; ++n) {
    for (std::uint64_t m = 0; m <= 900; ++m) {
      const std::uint64_t u[] = {n, m};
      if (table.at(u) == 0) continue;
      ++positive;
      const BigInt v[] = {BigInt(static_cast<unsigned long>(n)),
                          BigInt(static_cast<unsigned long>(m))};
      ok = ok && is_n_feasible(v, lattice);
    }
  }
  c.expect(ok, "every N with p(N) > 0 is lattice-feasible");
  c.note(std::to_string(positive) + " profiles with p(N) > 0");
}

void internal_consistency(Check& c) {
  for (const auto& J : {ProfileSet({1}), ProfileSet({1, 2}), ProfileSet({0, 1})}) {
    const DualVector beta = solved(ones(J));
    const auto sigma = sigma_matrix(beta);
    const auto lattice = enumerate_qj(J);
    const double direct = prefactor_c(beta, sigma, lattice);
    const double via_c1 = prefactor_c_from_c1(beta, sigma, lattice);
    const double err = rel(direct, via_c1);
    c.expect(err <= 1e-10, J.to_string() + " relative 1e-10");
    c.note(J.to_string() + " " + fmt("%.1e", err));
  }
}

struct Spec {
  const char* name;
  double budget;
  void (*run)(Check&);
};

const std::map<int, Spec>& registry() {
  static const std::map<int, Spec> r = {
      {1, {"Hardy-Ramanujan constants", 1, hardy_ramanujan}},
      {2, {"exact vs asymptotic, J={1}", 30, exact_vs_asymptotic}},
      {3, {"Q_J cardinalities", 5, qj_cardinalities}},
      {4, {"worked examples roundtrip", 10, worked_examples}},
      {5, {"two-constraint exact counting", 60, two_constraint_counts}},
      {6, {"local limit convergence", 600, lclt_convergence}},
      {7, {"entropy expansion", 120, entropy_expansion_check}},
      {8, {"Euler-Maclaurin", 60, euler_maclaurin}},
      {9, {"uniform sampling", 300, uniform_sampling}},
      {10, {"limit shape", 600, limit_shape_check}},
      {11, {"feasibility lattice density", 60, lattice_density}},
      {12, {"prefactor consistency", 10, internal_consistency}},
  };
  return r;
}

}  // namespace

std::vector<int> acceptance_ids() {
  std::vector<int> ids;
  for (const auto& [id, spec] : registry()) ids.push_back(id);
  return ids;
}

CriterionResult run_criterion(int id) {
  const auto it = registry().find(id);
  if (it == registry().end()) {
    throw Error(ErrorKind::InvalidArgument, "no acceptance criterion " + std::to_string(id));
  }
  CriterionResult out;
  out.id = id;
  out.name = it->second.name;
  out.budget_seconds = it->second.budget;
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second.run(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(out.seconds <= out.budget_seconds, "time budget");
  out.passed = check.passed();
  out.detail = check.detail();
  return out;
}

std::vector<CriterionResult> run_acceptance(
    std::span<const int> ids, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r, bool with_time) {
  char head[160];
  std::snprintf(head, sizeof head, "%s [%2d] %-32s ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str());
  std::string line = head;
  if (with_time) {
    char t[64];
    std::snprintf(t, sizeof t, "%8.2fs/%gs  ", r.seconds, r.budget_seconds);
    line += t;
  }
  return line + r.detail;
}

}  // namespace maxpart
