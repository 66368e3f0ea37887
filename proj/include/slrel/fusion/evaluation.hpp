#pragma once

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slrel/fusion/overall.hpp"

namespace slrel {

enum class Label { correct, faulty };

inline std::string_view to_string(Label l) { return l == Label::correct ? "correct" : "faulty"; }

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "correct") return Label::correct;
  if (s == "faulty") return Label::faulty;
  return std::nullopt;
}

struct LabeledVerdict {
  std::string scenario_id;
  Label label = Label::correct;
  ReliabilityVerdict verdict;
};

struct SeparationReport {
  std::size_t n_correct = 0;
  std::size_t n_faulty = 0;
  double min_correct = 0.0;  // lowest projected reliability among correct scenarios
  double max_faulty = 0.0;   // highest projected reliability among faulty scenarios
  double margin = 0.0;       // min_correct - max_faulty
  double min_mass_high_correct = 0.0;
  double min_mass_low_faulty = 0.0;

  bool separated() const { return margin > 0.0; }
  bool confident(double level = 0.9) const {
    return min_mass_high_correct >= level && min_mass_low_faulty >= level;
  }
};

/// Separation of the two classes by projected reliability plus the weakest
/// beta confidence per class. Throws PreconditionError if a class is empty.
inline SeparationReport evaluate_batch(std::span<const LabeledVerdict> verdicts) {
  SeparationReport r;
  r.min_correct = std::numeric_limits<double>::infinity();
  r.max_faulty = -std::numeric_limits<double>::infinity();
  r.min_mass_high_correct = std::numeric_limits<double>::infinity();
  r.min_mass_low_faulty = std::numeric_limits<double>::infinity();
  for (const LabeledVerdict& v : verdicts) {
    if (v.label == Label::correct) {
      ++r.n_correct;
      r.min_correct = std::min(r.min_correct, v.verdict.projected);
      r.min_mass_high_correct = std::min(r.min_mass_high_correct, v.verdict.mass_high);
    } else {
      ++r.n_faulty;
      r.max_faulty = std::max(r.max_faulty, v.verdict.projected);
      r.min_mass_low_faulty = std::min(r.min_mass_low_faulty, v.verdict.mass_low);
    }
  }
  if (r.n_correct == 0 || r.n_faulty == 0) {
    throw PreconditionError("evaluation needs at least one verdict of each class");
  }
  r.margin = r.min_correct - r.max_faulty;
  return r;
}

inline SeparationReport evaluate_batch(const std::vector<LabeledVerdict>& verdicts) {
  return evaluate_batch(std::span<const LabeledVerdict>(verdicts));
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Beta densities of each verdict at `points` evenly spaced x on [0, 1], as
/// CSV with header `scenario_id,label,x,density`.
inline std::string beta_density_csv(std::span<const LabeledVerdict> verdicts, int points = 201) {
  if (points < 2) {
    throw PreconditionError("need at least two sample points");
  }
  std::string out = "scenario_id,label,x,density\n";
  for (const LabeledVerdict& v : verdicts) {
    const BetaParams params = beta_params(v.verdict.opinion);
    for (int i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / (points - 1);
      out += v.scenario_id;
      out += ',';
      out += to_string(v.label);
      out += ',';
      out += format_double(x);
      out += ',';
      out += format_double(beta_pdf(params, x));
      out += '\n';
    }
  }
  return out;
}

}  // namespace slrel
