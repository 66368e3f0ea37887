#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slrel/estimator.hpp"
#include "slrel/sim/scenario_json.hpp"
#include "slrel/sim/simulator.hpp"

namespace slrel {

/// Everything a config file describes: the scenario plus estimator settings.
struct RunConfig {
  ScenarioConfig scenario;
  EstimatorConfig estimator;
  HistogramLayout layout;  // used when commissioning references
};

namespace detail {

inline Json discount_to_json(const DiscountVector& p) { return Json(p.probs); }

inline DiscountVector discount_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path, "expected [p_reliable, p_unreliable]");
  }
  const double a = j[0].get<double>();
  const double b = j[1].get<double>();
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw ConfigError(path, "discount probabilities must lie in [0,1]");
  }
  return DiscountVector({a, b});
}

}  // namespace detail

inline Json to_json(const EstimatorConfig& e, const HistogramLayout& layout) {
  Json j;
  j["prediction"] = Json{{"horizon", e.prediction.prediction.horizon},
                         {"steps", e.prediction.prediction.steps},
                         {"process_noise", e.prediction.prediction.process_noise},
                         {"p_indep", detail::discount_to_json(e.prediction.p_indep)},
                         {"min_samples", e.prediction.min_samples},
                         {"stale_after", e.prediction.stale_after}};
  j["map"] = Json{{"theta_dc", e.map.theta_dc},
                  {"p_dis", detail::discount_to_json(e.map.p_dis)},
                  {"min_uncertainty", e.map.min_uncertainty},
                  {"bin_length", layout.bin_length},
                  {"lateral_cell_width", layout.lateral_cell_width}};
  j["heading_tolerance_deg"] = e.map.heading_tolerance_deg;
  j["d_max"] = e.d_max;
  j["w_mis"] = e.w_mis;
  j["w_under"] = e.w_under;
  j["coverage_margin"] = e.coverage_margin;
  j["fusion"] = Json{{"w_it", e.fusion.w_it}, {"w_ept", e.fusion.w_ept}};
  return j;
}

inline void estimator_from_json(const Json& j, EstimatorConfig& e, HistogramLayout& layout) {
  detail::ConfigReader root(j, "estimator");
  if (root.has("prediction")) {
    detail::ConfigReader r(root.child("prediction"), "estimator.prediction");
    auto& p = e.prediction;
    p.prediction.horizon = r.number("horizon", p.prediction.horizon);
    if (r.has("steps")) p.prediction.steps = static_cast<int>(r.unsigned_integer("steps"));
    p.prediction.process_noise = r.number("process_noise", p.prediction.process_noise);
    if (r.has("p_indep")) p.p_indep = detail::discount_from_json(r.child("p_indep"), "estimator.prediction.p_indep");
    if (r.has("min_samples")) p.min_samples = r.unsigned_integer("min_samples");
    p.stale_after = r.number("stale_after", p.stale_after);
    r.finish();
  }
  if (root.has("map")) {
    detail::ConfigReader r(root.child("map"), "estimator.map");
    e.map.theta_dc = r.number("theta_dc", e.map.theta_dc);
    if (r.has("p_dis")) e.map.p_dis = detail::discount_from_json(r.child("p_dis"), "estimator.map.p_dis");
    e.map.min_uncertainty = r.number("min_uncertainty", e.map.min_uncertainty);
    layout.bin_length = r.number("bin_length", layout.bin_length);
    layout.lateral_cell_width = r.number("lateral_cell_width", layout.lateral_cell_width);
    r.finish();
  }
  e.map.heading_tolerance_deg = root.number("heading_tolerance_deg", e.map.heading_tolerance_deg);
  e.prediction.heading_tolerance_deg = e.map.heading_tolerance_deg;
  e.d_max = root.number("d_max", e.d_max);
  e.w_mis = root.number("w_mis", e.w_mis);
  e.w_under = root.number("w_under", e.w_under);
  e.coverage_margin = root.number("coverage_margin", e.coverage_margin);
  if (root.has("fusion")) {
    detail::ConfigReader r(root.child("fusion"), "estimator.fusion");
    e.fusion.w_it = r.number("w_it", e.fusion.w_it);
    e.fusion.w_ept = r.number("w_ept", e.fusion.w_ept);
    r.finish();
  }
  root.finish();
}

/// Throws ConfigError for estimator settings outside their domains.
inline void validate(const EstimatorConfig& e, const HistogramLayout& layout) {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive finite number");
  };
  positive(e.prediction.prediction.horizon, "estimator.prediction.horizon");
  if (e.prediction.prediction.steps < 1) throw ConfigError("estimator.prediction.steps", "must be >= 1");
  if (!(e.prediction.prediction.process_noise >= 0.0)) {
    throw ConfigError("estimator.prediction.process_noise", "must be >= 0");
  }
  if (e.prediction.min_samples < 1) throw ConfigError("estimator.prediction.min_samples", "must be >= 1");
  positive(e.prediction.stale_after, "estimator.prediction.stale_after");
  if (!(e.map.theta_dc > 0.0 && e.map.theta_dc <= 1.0)) {
    throw ConfigError("estimator.map.theta_dc", "must lie in (0,1]");
  }
  if (!(e.map.min_uncertainty > 0.0 && e.map.min_uncertainty < 1.0)) {
    throw ConfigError("estimator.map.min_uncertainty", "must lie in (0,1)");
  }
  positive(layout.bin_length, "estimator.map.bin_length");
  positive(layout.lateral_cell_width, "estimator.map.lateral_cell_width");
  if (!(e.map.heading_tolerance_deg > 0.0 && e.map.heading_tolerance_deg <= 180.0)) {
    throw ConfigError("estimator.heading_tolerance_deg", "must lie in (0,180]");
  }
  positive(e.d_max, "estimator.d_max");
  if (!(e.w_mis >= 1.0)) throw ConfigError("estimator.w_mis", "must be >= 1");
  if (!(e.w_under >= 1.0)) throw ConfigError("estimator.w_under", "must be >= 1");
  if (!(e.coverage_margin >= 0.0)) throw ConfigError("estimator.coverage_margin", "must be >= 0");
  positive(e.fusion.w_it, "estimator.fusion.w_it");
  positive(e.fusion.w_ept, "estimator.fusion.w_ept");
}

inline Json to_json(const RunConfig& cfg) {
  Json j = to_json(cfg.scenario);
  j["estimator"] = to_json(cfg.estimator, cfg.layout);
  return j;
}

inline void validate(const RunConfig& cfg) {
  validate(cfg.scenario);
  validate(cfg.estimator, cfg.layout);
}

/// Parses a run config without validating it.
inline RunConfig parse_run_config(const Json& j) {
  if (!j.is_object()) {
    throw ConfigError("<root>", "expected an object");
  }
  Json scenario = j;
  scenario.erase("estimator");
  RunConfig cfg;
  cfg.scenario = scenario_from_json(scenario);
  if (j.contains("estimator") && !j.at("estimator").is_null()) {
    estimator_from_json(j.at("estimator"), cfg.estimator, cfg.layout);
  }
  return cfg;
}

/// Parses and validates a run config.
inline RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg = parse_run_config(j);
  validate(cfg);
  return cfg;
}

/// Applies `key=value` to a canonical config document. The key is a dotted
/// path (list elements by index) that must already exist; the value is read
/// as JSON when it parses and as a string otherwise.
inline void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string(assignment), "override must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json* node = &doc;
  std::size_t start = 0;
  while (start <= key.size()) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() && part.size() < 10 &&
               part.find_first_not_of("0123456789") == std::string::npos &&
               std::stoull(part) < node->size()) {
      node = &(*node)[std::stoull(part)];
    } else {
      throw ConfigError(key, "unknown config key");
    }
    if (dot == std::string::npos) {
      break;
    }
    start = dot + 1;
  }
  Json value = Json::parse(text, nullptr, false);
  *node = value.is_discarded() ? Json(text) : std::move(value);
}

/// Canonicalizes a raw config (filling defaults), applies overrides in
/// order, and parses the result.
inline RunConfig load_run_config(const Json& raw, const std::vector<std::string>& overrides) {
  Json doc = to_json(parse_run_config(raw));
  for (const auto& o : overrides) {
    apply_override(doc, o);
  }
  return run_config_from_json(doc);
}

}  // namespace slrel
