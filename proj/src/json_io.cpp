#include "transport/json_io.hpp"

namespace transport {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError("malformed JSON at line " + std::to_string(line) + " column " +
                          std::to_string(column) + ": " + e.what());
  }
}

json rational_to_json(const Rational& r) {
  return json{{"num", r.num()}, {"den", r.den()}};
}

Rational rational_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("num") || !j.contains("den")) {
      throw ValidationError("rational object needs \"num\" and \"den\"");
    }
    return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw ValidationError("weights must be {\"num\",\"den\"} objects, integers, or decimal strings");
}

namespace {

Point point_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("points must be arrays of coordinates");
  std::vector<double> coords;
  coords.reserve(j.size());
  for (const auto& c : j) coords.push_back(c.get<double>());
  return Point(std::move(coords));
}

json point_to_json(const Point& x) {
  return json(x.coords);
}

}  // namespace

json measure_to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  json weights = json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    atoms.push_back(point_to_json(mu.atom(i)));
    weights.push_back(rational_to_json(mu.weight(i)));
  }
  return json{{"dim", mu.dim()}, {"atoms", atoms}, {"weights", weights}};
}

DiscreteMeasure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("weights")) {
    throw ValidationError("measure JSON needs \"atoms\" and \"weights\"");
  }
  std::vector<Point> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(point_from_json(a));
  std::vector<Rational> weights;
  for (const auto& w : j.at("weights")) weights.push_back(rational_from_json(w));
  DiscreteMeasure mu(std::move(atoms), std::move(weights));
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != mu.dim()) {
    throw ValidationError("measure JSON: declared dim does not match the atoms");
  }
  return mu;
}

SubMeasure submeasure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("weights")) {
    throw ValidationError("sub-measure JSON needs \"atoms\" and \"weights\"");
  }
  std::vector<Point> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(point_from_json(a));
  std::vector<Rational> weights;
  for (const auto& w : j.at("weights")) weights.push_back(rational_from_json(w));
  return SubMeasure(std::move(atoms), std::move(weights));
}

json labeled_to_json(const LabeledMeasure& lm) {
  json j = measure_to_json(lm.base);
  json labels = json::array();
  for (const auto& y : lm.labels) labels.push_back(point_to_json(y));
  j["labels"] = labels;
  return j;
}

LabeledMeasure labeled_from_json(const json& j) {
  if (!j.contains("labels")) throw ValidationError("labeled measure JSON needs \"labels\"");
  DiscreteMeasure base = measure_from_json(j);
  std::vector<Point> labels;
  for (const auto& y : j.at("labels")) labels.push_back(point_from_json(y));
  return LabeledMeasure(std::move(base), std::move(labels));
}

json plan_to_json(const TransportPlan& plan, double cost, double p) {
  json entries = json::array();
  for (const auto& e : plan.entries) {
    entries.push_back(json{{"i", e.source}, {"j", e.target}, {"mass", rational_to_json(e.mass)}});
  }
  return json{{"entries", entries}, {"cost", cost}, {"p", p}};
}

json feasibility_report_to_json(const FeasibilityReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    switch (row.status) {
      case FeasibilityStatus::kFeasible:
        r["feasible"] = true;
        break;
      case FeasibilityStatus::kInfeasible:
        r["feasible"] = false;
        break;
      case FeasibilityStatus::kOverCap:
        r["feasible"] = "over_cap";
        break;
      case FeasibilityStatus::kOracleError:
        r["feasible"] = "oracle_error";
        break;
    }
    if (row.assignment) {
      r["assignment"] = row.assignment->target_index;
    } else {
      r["assignment"] = nullptr;
    }
    if (!row.detail.empty()) r["detail"] = row.detail;
    rows.push_back(std::move(r));
  }
  return json{{"rows", rows},
              {"all_feasible", report.all_feasible},
              {"note", "verdicts cover only the supplied inputs, not all empirical measures"}};
}

json reconstruction_to_json(const ReconstructedMap& rm, const LipschitzReport& lips) {
  json values = json::array();
  for (const auto& y : rm.values) values.push_back(point_to_json(y));
  return json{{"values", values},
              {"assignment", rm.assignment.target_index},
              {"lipschitz",
               {{"ok", lips.ok},
                {"worst_ratio", lips.worst_ratio},
                {"worst_pair", {lips.worst_i, lips.worst_j}}}}};
}

}  // namespace transport
