#include "maxpart/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace maxpart {

Json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json to_json(const ProfileSet& set) {
  Json out = Json::array();
  for (unsigned j : set.powers()) out.push_back(j);
  return out;
}

Json to_json(const ProfileSet& set, std::span<const double> values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < set.size(); ++i) out[std::to_string(set[i])] = real(values[i]);
  return out;
}

Json to_json(const ProfileSet& set, std::span<const BigInt> values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < set.size(); ++i) out[std::to_string(set[i])] = values[i].get_str();
  return out;
}

Json to_json(const Partition& lambda) {
  Json out = Json::object();
  for (const auto& [part, mult] : lambda.multiplicities()) {
    out[std::to_string(part)] = mult.get_str();
  }
  return out;
}

Json to_json(const FeasibilityLattice& lattice) {
  const auto& set = lattice.set();
  Json polys = Json::array();
  for (const auto& q : lattice.polys()) {
    Json p = Json::object();
    for (std::size_t i = 0; i < set.size(); ++i) p[std::to_string(set[i])] = q.coeffs[i].get_str();
    polys.push_back(std::move(p));
  }
  Json out = Json::object();
  out["J"] = to_json(set);
  out["cardinality"] = lattice.cardinality();
  out["polynomials"] = std::move(polys);
  return out;
}

Json to_json(const SolveReport& report) {
  Json out = Json::object();
  out["J"] = to_json(report.beta.set());
  out["beta"] = to_json(report.beta.set(), report.beta.beta());
  out["converged"] = report.converged;
  out["iterations"] = report.iterations;
  out["residual"] = real(report.residual_norm);
  out["message"] = report.message;
  return out;
}

Json to_json(const EstimateBreakdown* leading, const EstimateBreakdown* refined) {
  const EstimateBreakdown& e = leading ? *leading : *refined;
  Json out = Json::object();
  out["J"] = to_json(e.set);
  out["n"] = e.n;
  out["N"] = to_json(e.set, std::span<const BigInt>(e.profile));
  out["feasible"] = e.feasible;
  out["beta"] = to_json(e.set, std::span<const double>(e.beta));
  out["M"] = real(e.M);
  out["b"] = real(e.b.get_d());
  out["b_exact"] = e.b.get_str();
  out["c"] = real(e.c);
  out["b1"] = real(e.b1.get_d());
  out["b1_exact"] = e.b1.get_str();
  out["c1"] = real(e.c1);
  out["qj_cardinality"] = e.qj_cardinality;
  auto tail = [](const EstimateBreakdown& x, Json& block) {
    block["log_estimate"] = x.feasible ? real(x.log_estimate) : Json(nullptr);
    block["estimate"] = x.estimate ? real(*x.estimate) : Json(nullptr);
  };
  if (leading) {
    Json block = Json::object();
    tail(*leading, block);
    out["leading"] = std::move(block);
  }
  if (refined) {
    Json block = Json::object();
    if (refined->beta_hat) {
      block["beta_hat"] = to_json(e.set, std::span<const double>(*refined->beta_hat));
    }
    if (refined->H) block["H"] = real(*refined->H);
    if (refined->log_lclt) {
      block["log_lclt_factor"] = real(*refined->log_lclt);
      block["lclt_factor"] = real(std::exp(*refined->log_lclt));
    }
    tail(*refined, block);
    out["refined"] = std::move(block);
  }
  return out;
}

Json to_json(const ShapeCurve& curve) {
  Json t = Json::array();
  Json phi = Json::array();
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    t.push_back(real(curve.grid[i]));
    phi.push_back(real(curve.values[i]));
  }
  Json out = Json::object();
  out["t"] = std::move(t);
  out["phi"] = std::move(phi);
  return out;
}

}  // namespace maxpart
