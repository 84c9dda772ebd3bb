#include "maxpart/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "maxpart/asymptotics.hpp"
#include "maxpart/error.hpp"
#include "maxpart/exact_count.hpp"
#include "maxpart/json_io.hpp"
#include "maxpart/sampler.hpp"
#include "maxpart/validation.hpp"

namespace maxpart::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string J;
  std::string alpha;
  std::string beta;
  std::string N;
  std::uint64_t n = 0;
  std::string mode = "both";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  std::string grid;
  std::uint64_t samples = 1;
  bool uniform = false;
  std::uint64_t max_tries = 10'000'000;
  std::string only;
  bool timings = false;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(item);
  return parts;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& s, const char* what, F convert) {
  std::vector<T> out;
  for (const auto& item : split(s)) {
    try {
      std::size_t used = 0;
      out.push_back(convert(item, used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

ProfileSet parse_set(const Config& c) {
  if (c.J.empty()) throw UsageError("-J is required");
  auto powers = parse_list<unsigned>(c.J, "J", [](const std::string& s, std::size_t& used) {
    const long v = std::stol(s, &used);
    if (v < 0) throw std::invalid_argument(s);
    return static_cast<unsigned>(v);
  });
  try {
    return ProfileSet(powers);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_reals(const std::string& s, const ProfileSet& set, const char* what) {
  auto v = parse_list<double>(s, what, [](const std::string& x, std::size_t& used) {
    return std::stod(x, &used);
  });
  if (v.size() != set.size()) {
    throw UsageError(std::string(what) + " needs one value per power of J");
  }
  return v;
}

std::vector<BigInt> parse_counts(const std::string& s, const ProfileSet& set) {
  std::vector<BigInt> out;
  for (const auto& item : split(s)) {
    BigInt v;
    if (item.empty() || v.set_str(item, 10) != 0 || v < 0) {
      throw UsageError("cannot parse N entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.size() != set.size()) throw UsageError("N needs one value per power of J");
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  std::stringstream in(s);
  std::string a, b, m;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, m)) {
    throw UsageError("--grid expects a:b:m");
  }
  try {
    return linear_grid(std::stod(a), std::stod(b), std::stoul(m));
  } catch (const std::logic_error&) {
    throw UsageError("--grid expects a:b:m");
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void require_n(const Config& c) {
  if (c.n == 0) throw UsageError("-n is required (n >= 1)");
}

DualVector solve_or_fail(const MomentVector& alpha) {
  const auto r = solve_beta(alpha);
  if (!r.converged) throw Error(ErrorKind::NoConvergence, r.message);
  return r.beta;
}

void emit(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

int cmd_solve(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  if (c.alpha.empty()) throw UsageError("solve needs -a");
  const MomentVector alpha(set, parse_reals(c.alpha, set, "alpha"));
  const SolveReport r = solve_beta(alpha);
  Json j = to_json(r);
  j["alpha"] = to_json(set, alpha.values());
  if (r.converged) j["M"] = real(m_alpha(r.beta));
  emit(os, j);
  return r.converged ? kOk : kNoConvergence;
}

int cmd_forward(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  if (c.beta.empty()) throw UsageError("forward needs -b");
  const DualVector beta(set, parse_reals(c.beta, set, "beta"));
  const MomentVector alpha = forward_map(beta);
  Json j = Json::object();
  j["J"] = to_json(set);
  j["beta"] = to_json(set, beta.beta());
  j["alpha"] = to_json(set, alpha.values());
  j["M"] = real(m_alpha(beta));
  emit(os, j);
  return kOk;
}

int cmd_estimate(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  if (c.alpha.empty()) throw UsageError("estimate needs -a");
  require_n(c);
  const MomentVector alpha(set, parse_reals(c.alpha, set, "alpha"));
  if (c.mode != "leading" && c.mode != "refined" && c.mode != "both") {
    throw UsageError("--mode must be leading, refined or both");
  }
  std::optional<EstimateBreakdown> leading;
  std::optional<EstimateBreakdown> refined;
  if (c.mode == "leading") {
    leading = estimate_p(alpha, c.n, EstimateMode::Leading);
  } else {
    refined = estimate_p(alpha, c.n, EstimateMode::Refined);
    if (c.mode == "both") {
      // The refined breakdown already carries every continuous constant.
      leading = *refined;
      leading->mode = EstimateMode::Leading;
      if (leading->feasible) {
        leading->log_estimate = leading->log_leading;
        const double v = std::exp(leading->log_estimate);
        leading->estimate = std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
      }
    }
  }
  const EstimateBreakdown& any = leading ? *leading : *refined;
  emit(os, to_json(leading ? &*leading : nullptr, refined ? &*refined : nullptr));
  return any.feasible ? kOk : kInfeasible;
}

int cmd_count(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  if (c.N.empty()) throw UsageError("count needs -N");
  const auto values = parse_counts(c.N, set);
  const auto lattice = enumerate_qj(set);
  const bool feasible = is_n_feasible(values, lattice);
  const BigInt count = feasible ? count_exact(set, values) : BigInt(0);
  Json j = Json::object();
  j["J"] = to_json(set);
  j["N"] = to_json(set, std::span<const BigInt>(values));
  j["count"] = count.get_str();
  j["feasible"] = feasible;
  emit(os, j);
  return feasible ? kOk : kInfeasible;
}

int cmd_sample(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  require_n(c);
  std::vector<double> alpha_values;
  std::optional<Profile> N;
  if (!c.N.empty() && c.alpha.empty()) {
    const auto values = parse_counts(c.N, set);
    try {
      N.emplace(set, values);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    // Moments implied by N at scale n, for the continuous starting point.
    for (std::size_t i = 0; i < set.size(); ++i) {
      alpha_values.push_back(values[i].get_d() /
                             std::pow(static_cast<double>(c.n), 0.5 * (set[i] + 1.0)));
    }
  } else if (!c.alpha.empty() && c.N.empty()) {
    alpha_values = parse_reals(c.alpha, set, "alpha");
  } else {
    throw UsageError("sample needs exactly one of -a or -N");
  }
  const MomentVector alpha(set, alpha_values);
  if (!N) N.emplace(scaled_profile(alpha, c.n));
  const DualVector beta = solve_or_fail(alpha);
  const DiscreteDual dual = solve_beta_hat(*N, beta, c.n);
  if (c.uniform && !is_n_feasible(*N, enumerate_qj(set))) {
    throw Error(ErrorKind::DomainViolation, "N fails the lattice test; P(N) is empty");
  }

  CounterRng rng(c.seed);
  std::vector<Partition> draws;
  std::vector<std::uint64_t> tries;
  for (std::uint64_t i = 0; i < c.samples; ++i) {
    if (c.uniform) {
      auto s = sample_uniform_exact(*N, dual, rng, c.max_tries);
      draws.push_back(std::move(s.partition));
      tries.push_back(s.tries);
    } else {
      draws.push_back(sample_mu(dual, rng));
      tries.push_back(1);
    }
  }

  if (c.format == "csv") {
    // Average of the rescaled diagrams.
    const auto grid = parse_grid(c.grid.empty() ? "0.05:3:60" : c.grid);
    ShapeCurve mean{grid, std::vector<double>(grid.size(), 0.0)};
    for (const auto& d : draws) {
      const auto s = empirical_shape(d, c.n, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        mean.values[i] += s.values[i] / static_cast<double>(draws.size());
      }
    }
    write_shape_csv(os, mean);
    return kOk;
  }
  Json j = Json::object();
  j["J"] = to_json(set);
  j["n"] = c.n;
  j["N"] = to_json(set, N->values());
  j["beta_hat"] = to_json(set, dual.beta_hat());
  j["uniform"] = c.uniform;
  j["seed"] = c.seed;
  Json list = Json::array();
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Json s = Json::object();
    s["partition"] = to_json(draws[i]);
    const auto profile = profile_of(draws[i], set);
    s["profile"] = to_json(set, std::span<const BigInt>(profile));
    s["tries"] = tries[i];
    list.push_back(std::move(s));
  }
  j["samples"] = std::move(list);
  emit(os, j);
  return kOk;
}

int cmd_shape(const Config& c, std::ostream& os) {
  const ProfileSet set = parse_set(c);
  std::optional<DualVector> beta;
  if (!c.beta.empty() && c.alpha.empty()) {
    beta.emplace(set, parse_reals(c.beta, set, "beta"));
  } else if (!c.alpha.empty() && c.beta.empty()) {
    beta.emplace(solve_or_fail(MomentVector(set, parse_reals(c.alpha, set, "alpha"))));
  } else {
    throw UsageError("shape needs exactly one of -a or -b");
  }
  const auto grid = parse_grid(c.grid.empty() ? "0.01:5:500" : c.grid);
  const ShapeCurve curve = limit_shape(*beta, grid);
  if (c.format == "json") {
    Json j = Json::object();
    j["J"] = to_json(set);
    j["beta"] = to_json(set, beta->beta());
    j["shape"] = to_json(curve);
    emit(os, j);
  } else {
    write_shape_csv(os, curve);
  }
  return kOk;
}

int cmd_qj(const Config& c, std::ostream& os) {
  emit(os, to_json(enumerate_qj(parse_set(c))));
  return kOk;
}

int cmd_validate(const Config& c, std::ostream& os) {
  std::vector<int> ids = acceptance_ids();
  if (!c.only.empty()) {
    ids = parse_list<int>(c.only, "criterion", [](const std::string& s, std::size_t& used) {
      return std::stoi(s, &used);
    });
  }
  const auto known = acceptance_ids();
  for (int id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw UsageError("unknown criterion " + std::to_string(id));
    }
  }
  const bool json = c.format == "json";
  const auto results = run_acceptance(ids, [&](const CriterionResult& r) {
    if (!json) os << format_result(r, c.timings) << '\n' << std::flush;
  });
  bool all = true;
  Json list = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    Json e = Json::object();
    e["id"] = r.id;
    e["name"] = r.name;
    e["passed"] = r.passed;
    e["detail"] = r.detail;
    if (c.timings) e["seconds"] = real(r.seconds);
    list.push_back(std::move(e));
  }
  if (json) emit(os, list);
  return all ? kOk : kInternal;
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence: return kNoConvergence;
    case ErrorKind::DomainViolation:
    case ErrorKind::ZeroEntry: return kInfeasible;
    case ErrorKind::InvalidArgument: return kUsage;
    default: return kInternal;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partitions with prescribed power sums: maximum-entropy asymptotics, exact "
               "counts and samplers",
               "maxpart"};
  app.require_subcommand(1);
  Config c;

  auto add_set = [&](CLI::App* s) { s->add_option("-J", c.J, "profile set, comma separated"); };
  auto add_out = [&](CLI::App* s) {
    s->add_option("--out", c.out_path, "write the report to this file");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  auto* solve = app.add_subcommand("solve", "moments alpha -> dual vector beta");
  add_set(solve);
  solve->add_option("-a", c.alpha, "alpha, aligned with J");
  add_out(solve);

  auto* forward = app.add_subcommand("forward", "dual vector beta -> moments alpha");
  add_set(forward);
  forward->add_option("-b", c.beta, "beta, aligned with J");
  add_out(forward);

  auto* estimate = app.add_subcommand("estimate", "asymptotic estimate of p(N(alpha, n))");
  add_set(estimate);
  estimate->add_option("-a", c.alpha, "alpha, aligned with J");
  estimate->add_option("-n", c.n, "scale n");
  estimate->add_option("--mode", c.mode, "leading, refined or both");
  add_out(estimate);

  auto* count = app.add_subcommand("count", "exact number of partitions with profile N");
  add_set(count);
  count->add_option("-N", c.N, "profile, aligned with J");
  add_out(count);

  auto* sample = app.add_subcommand("sample", "draw from mu_n, or uniformly from P(N)");
  add_set(sample);
  sample->add_option("-a", c.alpha, "alpha, aligned with J");
  sample->add_option("-N", c.N, "profile, aligned with J");
  sample->add_option("-n", c.n, "scale n");
  sample->add_option("--seed", c.seed, "generator seed (default 0)");
  sample->add_option("--samples", c.samples, "number of draws");
  sample->add_flag("--uniform", c.uniform, "condition on the exact profile");
  sample->add_option("--max-tries", c.max_tries, "rejection budget per uniform draw");
  sample->add_option("--grid", c.grid, "a:b:m grid for --format csv");
  add_out(sample);

  auto* shape = app.add_subcommand("shape", "limit shape phi(t) as CSV");
  add_set(shape);
  shape->add_option("-a", c.alpha, "alpha, aligned with J");
  shape->add_option("-b", c.beta, "beta, aligned with J");
  shape->add_option("--grid", c.grid, "a:b:m, default 0.01:5:500");
  add_out(shape);

  auto* qj = app.add_subcommand("qj", "list Q_J");
  add_set(qj);
  add_out(qj);

  auto* validate = app.add_subcommand("validate", "run the acceptance checks");
  validate->add_option("--only", c.only, "comma-separated criterion ids");
  validate->add_flag("--timings", c.timings, "report wall-clock seconds");
  add_out(validate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "maxpart: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << app.help();
    return kUsage;
  }

  std::ofstream file;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) {
      err << "maxpart: cannot open " << c.out_path << '\n';
      return kUsage;
    }
  }
  std::ostream& os = c.out_path.empty() ? out : file;

  try {
    if (solve->parsed()) return cmd_solve(c, os);
    if (forward->parsed()) return cmd_forward(c, os);
    if (estimate->parsed()) return cmd_estimate(c, os);
    if (count->parsed()) return cmd_count(c, os);
    if (sample->parsed()) return cmd_sample(c, os);
    if (shape->parsed()) return cmd_shape(c, os);
    if (qj->parsed()) return cmd_qj(c, os);
    if (validate->parsed()) return cmd_validate(c, os);
  } catch (const UsageError& e) {
    err << "maxpart: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "maxpart: " << e.what() << '\n';
    return status_for(e.kind());
  } catch (const std::exception& e) {
    err << "maxpart: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace maxpart::cli
