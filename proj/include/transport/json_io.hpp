#pragma once

#include <string>

#include <json.hpp>

#include "transport/nonsplit.hpp"
#include "transport/plan.hpp"
#include "transport/representative.hpp"
#include "transport/tlp.hpp"

namespace transport {

/// Parses JSON text; syntax errors become ValidationError with line/column.
nlohmann::json parse_json(const std::string& text);

nlohmann::json rational_to_json(const Rational& r);
/// Accepts {"num": .., "den": ..}, integers, and exact decimal strings.
Rational rational_from_json(const nlohmann::json& j);

/// {"dim": d, "atoms": [[f64, ...], ...], "weights": [rational, ...]}
nlohmann::json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

/// Same layout with total mass at most one.
SubMeasure submeasure_from_json(const nlohmann::json& j);

/// Measure JSON extended with "labels": [[f64, ...], ...].
nlohmann::json labeled_to_json(const LabeledMeasure& lm);
LabeledMeasure labeled_from_json(const nlohmann::json& j);

/// {"entries": [{"i": .., "j": .., "mass": {..}}, ...], "cost": f64, "p": f64}
nlohmann::json plan_to_json(const TransportPlan& plan, double cost, double p);

nlohmann::json feasibility_report_to_json(const FeasibilityReport& report);

nlohmann::json reconstruction_to_json(const ReconstructedMap& rm, const LipschitzReport& lips);

}  // namespace transport
