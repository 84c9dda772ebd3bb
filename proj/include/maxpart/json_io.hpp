#pragma once

// JSON shapes shared by the CLI and the validation report. Reals are rounded
// to 12 significant digits; exact integers are decimal strings.

#include <json.hpp>

#include "maxpart/asymptotics.hpp"
#include "maxpart/domain.hpp"
#include "maxpart/intpoly.hpp"
#include "maxpart/maxent_continuous.hpp"
#include "maxpart/sampler.hpp"

namespace maxpart {

using Json = nlohmann::ordered_json;

/// x rounded to 12 significant digits; non-finite values become null.
Json real(double x);

/// Sorted array of powers.
Json to_json(const ProfileSet& set);
/// {"j": value} keyed by power.
Json to_json(const ProfileSet& set, std::span<const double> values);
Json to_json(const ProfileSet& set, std::span<const BigInt> values);
/// {"part": "multiplicity"}.
Json to_json(const Partition& lambda);
/// Polynomials as {"j": "num/den"} plus the cardinality.
Json to_json(const FeasibilityLattice& lattice);
Json to_json(const SolveReport& report);
/// Shared constants at the top level, then a "leading" and/or "refined"
/// block; at least one pointer must be non-null.
Json to_json(const EstimateBreakdown* leading, const EstimateBreakdown* refined);
Json to_json(const ShapeCurve& curve);

}  // namespace maxpart
