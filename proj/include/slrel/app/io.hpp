#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "slrel/app/config.hpp"
#include "slrel/estimator.hpp"
#include "slrel/fusion/evaluation.hpp"

namespace slrel {

inline constexpr std::string_view kStreamFormat = "slrel-stream/1";
inline constexpr std::string_view kReferenceFormat = "slrel-reference/1";

/// Reads a whole file; throws DataError when it cannot be opened.
inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes via a sibling temp file and rename so readers never see partial output.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot write '" + tmp.string() + "'");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      throw DataError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw DataError(what + " is not valid JSON");
  }
  return j;
}

/// Reads a config file; malformed JSON is a config error.
inline Json read_config_json(const std::filesystem::path& path) {
  std::ifstream probe(path);
  if (!probe) {
    throw ConfigError("--config", "cannot open '" + path.string() + "'");
  }
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("--config", "'" + path.string() + "' is not valid JSON");
  }
  return j;
}

// ---- tick streams ----------------------------------------------------------

struct Stream {
  RunConfig config;
  std::vector<Tick> ticks;
};

/// NDJSON: one header line carrying the run config, then one line per tick.
inline std::string stream_to_ndjson(const RunConfig& cfg, const std::vector<Tick>& ticks) {
  Json header;
  header["record"] = "header";
  header["format"] = kStreamFormat;
  header["config"] = to_json(cfg);
  std::string out = header.dump() + '\n';
  for (const Tick& t : ticks) {
    out += to_json(t).dump();
    out += '\n';
  }
  return out;
}

/// Parses a stream file; throws DataError on a bad header, bad tick or no ticks.
inline Stream stream_from_ndjson(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Stream s;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const Json j = parse_json_text(line, "stream line " + std::to_string(line_no));
    if (!have_header) {
      if (!j.is_object() || j.value("record", "") != "header" || j.value("format", "") != kStreamFormat) {
        throw DataError("stream does not start with a " + std::string(kStreamFormat) + " header");
      }
      try {
        s.config = run_config_from_json(j.at("config"));
      } catch (const ConfigError& e) {
        throw DataError("stream header config invalid at '" + e.key() + "': " + e.what());
      }
      have_header = true;
      continue;
    }
    s.ticks.push_back(tick_from_json(j));
  }
  if (!have_header) {
    throw DataError("stream is empty");
  }
  if (s.ticks.empty()) {
    throw DataError("stream contains no ticks");
  }
  return s;
}

// ---- references ------------------------------------------------------------

struct ReferenceSet {
  HistogramLayout layout;
  std::vector<LaneReference> lanes;
};

inline Json to_json(const ReferenceSet& refs) {
  Json j;
  j["format"] = kReferenceFormat;
  j["bin_length"] = refs.layout.bin_length;
  j["lateral_cell_width"] = refs.layout.lateral_cell_width;
  Json lanes = Json::array();
  for (const LaneReference& r : refs.lanes) {
    lanes.push_back(Json{{"lane_id", r.lane_id},
                         {"active_bins", r.active_bins},
                         {"flagged_empty", r.flagged_empty},
                         {"opinion", to_json(r.opinion)}});
  }
  j["lanes"] = std::move(lanes);
  return j;
}

inline ReferenceSet reference_set_from_json(const Json& j) {
  try {
    if (j.at("format") != kReferenceFormat) {
      throw DataError("not a " + std::string(kReferenceFormat) + " file");
    }
    ReferenceSet refs;
    refs.layout.bin_length = j.at("bin_length").get<double>();
    refs.layout.lateral_cell_width = j.at("lateral_cell_width").get<double>();
    for (const Json& l : j.at("lanes")) {
      LaneReference r;
      r.lane_id = l.at("lane_id").get<std::string>();
      r.active_bins = l.at("active_bins").get<std::vector<std::size_t>>();
      r.flagged_empty = l.at("flagged_empty").get<bool>();
      r.opinion = opinion_from_json(l.at("opinion"));
      refs.lanes.push_back(std::move(r));
    }
    return refs;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed reference file: ") + e.what());
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(std::string("malformed reference opinion: ") + e.what());
  }
}

// ---- estimator outputs -----------------------------------------------------

inline Json evidence_json(const Opinion& op) {
  return evidence_from_opinion(op).counts;
}

inline Json test_json(const Opinion& op) {
  return Json{{"projected", projected_reliability(op)},
              {"uncertainty", op.uncertainty()},
              {"evidence", evidence_json(op)}};
}

inline Json verdict_summary_json(const ReliabilityVerdict& v) {
  return Json{{"projected", v.projected},
              {"uncertainty", v.opinion.uncertainty()},
              {"mass_high", v.mass_high},
              {"mass_low", v.mass_low}};
}

/// One metrics line per tick.
inline Json to_json(const TickMetrics& m, const ReliabilityEstimator& est) {
  Json j;
  j["tick"] = m.tick;
  j["t"] = m.t;
  Json pred = test_json(m.prediction);
  pred["correct"] = est.prediction_test().state().correct;
  pred["incorrect"] = est.prediction_test().state().incorrect;
  j["prediction"] = std::move(pred);
  Json map = test_json(m.map);
  map["dc"] = m.map_update.dc;
  map["revised"] = m.map_update.revised;
  map["off_lane"] = m.map_update.off_lane;
  j["map"] = std::move(map);
  Json perc = test_json(m.perception);
  perc["missed_ego"] = m.missed_ego;
  j["perception"] = std::move(perc);
  j["localization"] = test_json(m.localization);
  j["overall"] = verdict_summary_json(m.overall);
  return j;
}

inline Json to_json(const LabeledVerdict& v, std::size_t ticks) {
  return Json{{"scenario_id", v.scenario_id},
              {"label", to_string(v.label)},
              {"opinion", to_json(v.verdict.opinion)},
              {"projected", v.verdict.projected},
              {"mass_high", v.verdict.mass_high},
              {"mass_low", v.verdict.mass_low},
              {"ticks", ticks}};
}

/// Reads a verdict file; projections are recomputed from the stored opinion.
inline LabeledVerdict labeled_verdict_from_json(const Json& j) {
  try {
    LabeledVerdict v;
    v.scenario_id = j.at("scenario_id").get<std::string>();
    const auto label = parse_label(j.at("label").get<std::string>());
    if (!label) {
      throw DataError("verdict label must be 'correct' or 'faulty'");
    }
    v.label = *label;
    v.verdict = make_verdict(opinion_from_json(j.at("opinion")));
    return v;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed verdict file: ") + e.what());
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(std::string("malformed verdict opinion: ") + e.what());
  }
}

inline Json to_json(const SeparationReport& r) {
  return Json{{"n_correct", r.n_correct},
              {"n_faulty", r.n_faulty},
              {"min_correct", r.min_correct},
              {"max_faulty", r.max_faulty},
              {"margin", r.margin},
              {"separated", r.separated()},
              {"min_mass_high_correct", r.min_mass_high_correct},
              {"min_mass_low_faulty", r.min_mass_low_faulty},
              {"confident", r.confident()}};
}

}  // namespace slrel
