#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "slrel/core/opinion.hpp"
#include "slrel/core/trust.hpp"

namespace slrel {

/// Predicted interval for the arc-length position at `predicted_for`.
struct PredictionTuple {
  double lower = 0.0;
  double upper = 0.0;
  double predicted_for = 0.0;
  double made_at = 0.0;
};

/// Measured arc-length positions over time, read as a polygonal line.
class MeasurementTrace {
 public:
  struct Sample {
    double time;
    double value;
  };

  MeasurementTrace() = default;
  explicit MeasurementTrace(std::vector<Sample> samples) {
    for (const Sample& s : samples) {
      add(s.time, s.value);
    }
  }

  /// Appends a sample; times must increase strictly.
  void add(double time, double value) {
    if (!samples_.empty() && !(time > samples_.back().time)) {
      throw PreconditionError("measurement trace times must increase strictly");
    }
    samples_.push_back({time, value});
  }

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }
  double start() const { return samples_.front().time; }
  double end() const { return samples_.back().time; }

  bool spans(double t) const { return !samples_.empty() && t >= start() && t <= end(); }

  /// Linear interpolation at t; t must lie inside the span.
  double at(double t) const {
    auto hi = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Sample& s, double x) { return s.time < x; });
    if (hi == samples_.begin()) {
      return hi->value;
    }
    if (hi == samples_.end()) {
      return samples_.back().value;
    }
    const auto lo = std::prev(hi);
    const double w = (t - lo->time) / (hi->time - lo->time);
    return lo->value + w * (hi->value - lo->value);
  }

  /// Drops samples older than `t` except the one bracketing it.
  void trim_before(double t) {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Sample& s, double x) { return s.time < x; });
    if (it != samples_.begin()) {
      samples_.erase(samples_.begin(), std::prev(it));
    }
  }

 private:
  std::vector<Sample> samples_;
};

/// Constant-velocity Kalman filter over (arc length, speed along the lane).
class ConstantVelocityFilter {
 public:
  struct State {
    double s;
    double v;
  };
  // Symmetric covariance [[ss, sv], [sv, vv]].
  struct Covariance {
    double ss;
    double sv;
    double vv;
  };

  ConstantVelocityFilter(double time, double position, double variance, double process_noise,
                         double initial_speed_variance = 100.0)
      : time_(time), x_{position, 0.0}, p_{variance, 0.0, initial_speed_variance}, q_(process_noise) {}

  double time() const { return time_; }
  State state() const { return x_; }
  Covariance covariance() const { return p_; }

  /// State and covariance propagated dt seconds ahead without updating.
  std::pair<State, Covariance> predicted(double dt) const {
    const State x{x_.s + dt * x_.v, x_.v};
    const double dt2 = dt * dt;
    const double dt3 = dt2 * dt;
    const Covariance p{p_.ss + 2.0 * dt * p_.sv + dt2 * p_.vv + q_ * dt3 / 3.0,
                       p_.sv + dt * p_.vv + q_ * dt2 / 2.0, p_.vv + q_ * dt};
    return {x, p};
  }

  /// Predicts to `time` and fuses a position measurement with variance r.
  void update(double time, double position, double r) {
    if (time < time_) {
      throw PreconditionError("filter updates must not go back in time");
    }
    auto [x, p] = predicted(time - time_);
    const double innovation_var = p.ss + r;
    const double ks = p.ss / innovation_var;
    const double kv = p.sv / innovation_var;
    const double innovation = position - x.s;
    x_ = {x.s + ks * innovation, x.v + kv * innovation};
    p_ = {(1.0 - ks) * p.ss, (1.0 - ks) * p.sv, p.vv - kv * p.sv};
    time_ = time;
  }

 private:
  double time_;
  State x_;
  Covariance p_;
  double q_;
};

/// One position measurement of a tracked object.
struct TrackSample {
  double time;
  double position;  // arc length, m
  double sigma;     // reported position standard deviation, m
};

struct PredictionSettings {
  double horizon = 2.0;
  int steps = 5;
  double process_noise = 0.5;
};

/// Tuples at horizon*i/steps (i = 1..steps) ahead of the filter time; each
/// interval is the predicted position +- one predicted-measurement sigma.
inline std::vector<PredictionTuple> predict_from(const ConstantVelocityFilter& filter,
                                                 const PredictionSettings& settings,
                                                 double measurement_variance) {
  if (settings.steps < 1 || !(settings.horizon > 0.0)) {
    throw PreconditionError("prediction needs steps >= 1 and a positive horizon");
  }
  std::vector<PredictionTuple> out;
  out.reserve(static_cast<std::size_t>(settings.steps));
  for (int i = 1; i <= settings.steps; ++i) {
    const double dt = settings.horizon * i / settings.steps;
    const auto [x, p] = filter.predicted(dt);
    const double sigma = std::sqrt(p.ss + measurement_variance);
    out.push_back({x.s - sigma, x.s + sigma, filter.time() + dt, filter.time()});
  }
  return out;
}

/// Filters the history and predicts over the horizon.
inline std::vector<PredictionTuple> predict_cv(std::span<const TrackSample> history,
                                               const PredictionSettings& settings) {
  if (history.empty()) {
    throw PreconditionError("prediction needs at least one prior state");
  }
  const TrackSample& first = history.front();
  ConstantVelocityFilter filter(first.time, first.position, first.sigma * first.sigma,
                                settings.process_noise);
  for (const TrackSample& s : history.subspan(1)) {
    filter.update(s.time, s.position, s.sigma * s.sigma);
  }
  const double last_sigma = history.back().sigma;
  return predict_from(filter, settings, last_sigma * last_sigma);
}

struct ClassificationCounts {
  double correct = 0.0;
  double incorrect = 0.0;
};

/// A tuple is correct when the trace's polygonal line passes through its
/// interval at predicted_for. Tuples outside the trace span are ignored.
inline ClassificationCounts classify_predictions(std::span<const PredictionTuple> tuples,
                                                 const MeasurementTrace& trace) {
  ClassificationCounts out;
  for (const PredictionTuple& p : tuples) {
    if (!trace.spans(p.predicted_for)) {
      continue;
    }
    const double value = trace.at(p.predicted_for);
    if (p.lower <= value && value <= p.upper) {
      out.correct += 1.0;
    } else {
      out.incorrect += 1.0;
    }
  }
  return out;
}

struct PredictionTestState {
  double correct = 0.0;
  double incorrect = 0.0;
  DiscountVector p_indep = DiscountVector::uniform(2, 0.1);
  Opinion opinion = Opinion::vacuous(2);
};

/// Accumulates classified tuples and re-derives the discounted opinion.
inline PredictionTestState prediction_test_update(PredictionTestState state,
                                                  std::span<const PredictionTuple> tuples,
                                                  const MeasurementTrace& trace) {
  const ClassificationCounts c = classify_predictions(tuples, trace);
  state.correct += c.correct;
  state.incorrect += c.incorrect;
  state.opinion = trust_discount(binary_from_evidence(state.correct, state.incorrect), state.p_indep);
  return state;
}

}  // namespace slrel
