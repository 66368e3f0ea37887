#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slrel/app/io.hpp"

namespace slrel {

// ---- in-memory pipeline ----------------------------------------------------

/// Simulates a validated run config into stream text.
inline std::string simulate_stream(const RunConfig& cfg) { return stream_to_ndjson(cfg, simulate(cfg.scenario)); }

/// Per-lane references pooled over several fault-free streams: the
/// averaging fusion of every stream's non-flagged reference for that lane.
inline ReferenceSet commission_references(const std::vector<Stream>& streams) {
  if (streams.empty()) {
    throw DataError("commissioning needs at least one stream");
  }
  const RunConfig& first = streams.front().config;
  const Json map_json = to_json(first.scenario)["map"];
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const RunConfig& cfg = streams[i].config;
    if (cfg.scenario.fault.kind != FaultKind::none) {
      throw DataError("commissioning stream " + std::to_string(i) + " carries fault '" +
                      std::string(to_string(cfg.scenario.fault.kind)) + "'; only fault-free streams are accepted");
    }
    if (to_json(cfg.scenario)["map"] != map_json) {
      throw DataError("commissioning stream " + std::to_string(i) + " uses a different map");
    }
    if (cfg.layout.bin_length != first.layout.bin_length ||
        cfg.layout.lateral_cell_width != first.layout.lateral_cell_width) {
      throw DataError("commissioning stream " + std::to_string(i) + " uses a different histogram layout");
    }
  }

  std::vector<std::vector<LaneReference>> per_stream;
  for (const Stream& s : streams) {
    std::vector<ObjectList> lists;
    lists.reserve(s.ticks.size());
    for (const Tick& t : s.ticks) {
      lists.push_back(t.rsu);
    }
    per_stream.push_back(build_references(first.scenario.map, lists, first.layout,
                                          first.estimator.map.heading_tolerance_deg));
  }

  ReferenceSet out;
  out.layout = first.layout;
  for (std::size_t lane = 0; lane < first.scenario.map.lanes.size(); ++lane) {
    LaneReference pooled;
    pooled.lane_id = first.scenario.map.lanes[lane].lane_id;
    std::vector<Opinion> ops;
    for (const auto& refs : per_stream) {
      const LaneReference& r = refs[lane];
      if (r.flagged_empty) {
        continue;
      }
      ops.push_back(r.opinion);
      pooled.active_bins.insert(pooled.active_bins.end(), r.active_bins.begin(), r.active_bins.end());
    }
    std::sort(pooled.active_bins.begin(), pooled.active_bins.end());
    pooled.active_bins.erase(std::unique(pooled.active_bins.begin(), pooled.active_bins.end()),
                             pooled.active_bins.end());
    pooled.flagged_empty = ops.empty();
    if (!ops.empty()) {
      pooled.opinion = averaging_fuse_many(ops);
    }
    out.lanes.push_back(std::move(pooled));
  }
  return out;
}

struct EstimateResult {
  std::string metrics_ndjson;
  LabeledVerdict verdict;
  std::size_t ticks = 0;
};

/// Label implied by a stream's own fault setting.
inline Label default_label(const RunConfig& cfg) {
  return cfg.scenario.fault.kind == FaultKind::none ? Label::correct : Label::faulty;
}

/// Replays a stream through the estimator. The histogram layout is taken
/// from the references so both sides bin identically.
inline EstimateResult estimate_stream(const Stream& stream, const ReferenceSet& refs, const EstimatorConfig& cfg,
                                      std::string scenario_id, Label label) {
  ReliabilityEstimator est(stream.config.scenario.map, refs.lanes, refs.layout, cfg);
  EstimateResult res;
  TickMetrics last;
  for (const Tick& tick : stream.ticks) {
    last = est.step(tick);
    res.metrics_ndjson += to_json(last, est).dump();
    res.metrics_ndjson += '\n';
  }
  res.ticks = stream.ticks.size();
  res.verdict = LabeledVerdict{std::move(scenario_id), label, last.overall};
  return res;
}

// ---- file-level commands ---------------------------------------------------

struct SimulateArgs {
  std::filesystem::path config;
  std::filesystem::path out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

struct CommissionArgs {
  std::vector<std::filesystem::path> streams;
  std::filesystem::path out;
};

struct EstimateArgs {
  std::filesystem::path stream;
  std::filesystem::path reference;
  std::filesystem::path out;
  std::vector<std::string> overrides;  // applied to the stream's run config
  std::optional<Label> label;
};

struct EvaluateArgs {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out;
};

inline Stream read_stream(const std::filesystem::path& path) {
  try {
    return stream_from_ndjson(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

/// Scenario id for a stream file: its stem, or its directory name when the
/// file carries the default name.
inline std::string scenario_id_for(const std::filesystem::path& stream) {
  const std::string stem = stream.stem().string();
  if (stem == "stream") {
    const auto dir = std::filesystem::absolute(stream).parent_path().filename().string();
    if (!dir.empty()) {
      return dir;
    }
  }
  return stem;
}

/// Writes <out>/stream.ndjson.
inline std::filesystem::path cmd_simulate(const SimulateArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (args.seed) {
    overrides.push_back("seed=" + std::to_string(*args.seed));
  }
  const RunConfig cfg = load_run_config(read_config_json(args.config), overrides);
  const auto path = args.out / "stream.ndjson";
  write_file_atomic(path, simulate_stream(cfg));
  return path;
}

/// Writes <out>/references.json.
inline std::filesystem::path cmd_commission(const CommissionArgs& args) {
  std::vector<Stream> streams;
  for (const auto& p : args.streams) {
    streams.push_back(read_stream(p));
  }
  const auto path = args.out / "references.json";
  write_file_atomic(path, to_json(commission_references(streams)).dump(2) + '\n');
  return path;
}

/// Writes <out>/metrics.ndjson and <out>/verdict.json.
inline LabeledVerdict cmd_estimate(const EstimateArgs& args) {
  const Stream raw = read_stream(args.stream);
  Stream stream{load_run_config(to_json(raw.config), args.overrides), raw.ticks};
  if (!std::filesystem::exists(args.reference)) {
    throw DataError("reference file '" + args.reference.string() + "' not found");
  }
  const ReferenceSet refs =
      reference_set_from_json(parse_json_text(read_file(args.reference), args.reference.string()));
  EstimateResult res = estimate_stream(stream, refs, stream.config.estimator, scenario_id_for(args.stream),
                                       args.label.value_or(default_label(stream.config)));
  write_file_atomic(args.out / "metrics.ndjson", res.metrics_ndjson);
  write_file_atomic(args.out / "verdict.json", to_json(res.verdict, res.ticks).dump(2) + '\n');
  return res.verdict;
}

/// Writes <out>/report.json and <out>/beta.csv.
inline SeparationReport cmd_evaluate(const EvaluateArgs& args) {
  std::vector<LabeledVerdict> verdicts;
  for (const auto& p : args.inputs) {
    verdicts.push_back(labeled_verdict_from_json(parse_json_text(read_file(p), p.string())));
  }
  SeparationReport report;
  try {
    report = evaluate_batch(verdicts);
  } catch (const PreconditionError& e) {
    throw DataError(e.what());
  }
  Json j = to_json(report);
  Json ids = Json::array();
  for (const auto& v : verdicts) {
    ids.push_back(Json{{"scenario_id", v.scenario_id},
                       {"label", to_string(v.label)},
                       {"projected", v.verdict.projected},
                       {"mass_high", v.verdict.mass_high},
                       {"mass_low", v.verdict.mass_low}});
  }
  j["scenarios"] = std::move(ids);
  write_file_atomic(args.out / "report.json", j.dump(2) + '\n');
  write_file_atomic(args.out / "beta.csv", beta_density_csv(verdicts));
  return report;
}

}  // namespace slrel
