#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slrel/sim/fault.hpp"
#include "slrel/sim/rng.hpp"
#include "slrel/sim/types.hpp"

namespace slrel {

namespace detail {

inline std::string indexed(const char* prefix, std::size_t i, const char* field) {
  return std::string(prefix) + "." + std::to_string(i) + "." + field;
}

inline void require_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(key, "must be a positive finite number");
  }
}

inline void require_nonnegative(double v, const std::string& key) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(key, "must be a non-negative finite number");
  }
}

}  // namespace detail

/// Throws ConfigError naming the offending key.
inline void validate(const ScenarioConfig& cfg) {
  detail::require_positive(cfg.tick, "tick");
  detail::require_nonnegative(cfg.duration, "duration");

  const auto& map = cfg.map;
  if (map.lanes.empty()) {
    throw ConfigError("map.lanes", "at least one lane is required");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < map.lanes.size(); ++i) {
    try {
      map.lanes[i].validate();
    } catch (const PreconditionError& e) {
      throw ConfigError("map.lanes." + std::to_string(i), e.what());
    }
    if (!ids.insert(map.lanes[i].lane_id).second) {
      throw ConfigError(detail::indexed("map.lanes", i, "lane_id"),
                        "duplicate lane '" + map.lanes[i].lane_id + "'");
    }
  }
  if (!is_simple(map.rsu_fov)) {
    throw ConfigError("map.rsu_fov", "polygon must be simple with at least 3 vertices");
  }
  if (map.blind_spot) {
    if (!is_simple(*map.blind_spot)) {
      throw ConfigError("map.blind_spot", "polygon must be simple with at least 3 vertices");
    }
    for (Vec2 p : *map.blind_spot) {
      if (!contains(map.rsu_fov, p)) {
        throw ConfigError("map.blind_spot", "must lie inside rsu_fov");
      }
    }
  }

  for (std::size_t i = 0; i < cfg.actors.size(); ++i) {
    const ActorSpec& a = cfg.actors[i];
    const LaneGeometry* lane = map.find_lane(a.lane_id);
    if (lane == nullptr) {
      throw ConfigError(detail::indexed("actors", i, "lane_id"), "unknown lane '" + a.lane_id + "'");
    }
    detail::require_nonnegative(a.entry_time, detail::indexed("actors", i, "entry_time"));
    detail::require_nonnegative(a.speed, detail::indexed("actors", i, "speed"));
    if (!(a.start_s >= 0.0 && a.start_s <= lane->length())) {
      throw ConfigError(detail::indexed("actors", i, "start_s"), "must lie within the lane length");
    }
    if (a.class_tag == ClassTag::ego) {
      throw ConfigError(detail::indexed("actors", i, "class_tag"), "actors cannot be tagged ego");
    }
  }

  const LaneGeometry* ego_lane = map.find_lane(cfg.ego.lane_id);
  if (ego_lane == nullptr) {
    throw ConfigError("ego.lane_id", "unknown lane '" + cfg.ego.lane_id + "'");
  }
  detail::require_nonnegative(cfg.ego.speed, "ego.speed");
  if (!(cfg.ego.start_s >= 0.0 && cfg.ego.start_s <= ego_lane->length())) {
    throw ConfigError("ego.start_s", "must lie within the lane length");
  }

  detail::require_positive(cfg.noise.rsu, "noise.rsu");
  detail::require_positive(cfg.noise.ego_perception, "noise.ego_perception");
  detail::require_positive(cfg.noise.ego_localization, "noise.ego_localization");
  detail::require_positive(cfg.ego_sensor.range, "ego_sensor.range");
  if (!(cfg.ego_sensor.half_angle_deg > 0.0 && cfg.ego_sensor.half_angle_deg <= 180.0)) {
    throw ConfigError("ego_sensor.half_angle_deg", "must lie in (0, 180]");
  }

  validate(cfg.fault);
  if (const auto target = cfg.fault.target()) {
    if (*target > cfg.actors.size()) {
      throw ConfigError("fault.target_id", "no object with id " + std::to_string(*target));
    }
    if (cfg.fault.kind == FaultKind::erratic_motion && *target == kEgoId) {
      throw ConfigError("fault.target_id", "erratic_motion must target an actor, not the ego");
    }
  }
}

/// Number of emitted ticks; a duration shorter than one tick still yields one.
inline std::size_t tick_count(const ScenarioConfig& cfg) {
  const auto n = std::llround(cfg.duration / cfg.tick);
  return n < 1 ? 1 : static_cast<std::size_t>(n);
}

/// Deterministic world model. Each tick is a pure function of (config, index).
class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    validate(cfg_);
    ticks_ = tick_count(cfg_);
  }

  const ScenarioConfig& config() const { return cfg_; }
  std::size_t size() const { return ticks_; }

  Tick at(std::size_t k) const {
    Tick tick;
    tick.index = k;
    tick.t = static_cast<double>(k) * cfg_.tick;
    const double t = tick.t;

    const TruthState ego = ego_truth(t);
    tick.truth.push_back(ego);
    for (std::size_t i = 0; i < cfg_.actors.size(); ++i) {
      if (auto s = actor_truth(i, t)) {
        tick.truth.push_back(*s);
      }
    }

    const double sigma_loc = cfg_.noise.ego_localization;
    tick.ego_pose.position = ego.position + sigma_loc * noise(kLocalization, k, kEgoId);
    tick.ego_pose.sigma_ego = sigma_loc;
    tick.ego_pose.timestamp = t;

    tick.rsu.timestamp = t;
    tick.rsu.source = Source::rsu;
    tick.ego.timestamp = t;
    tick.ego.source = Source::ego;

    const Vec2 heading = ego_heading(t);
    const double cos_half = std::cos(cfg_.ego_sensor.half_angle_deg * std::numbers::pi / 180.0);
    for (const TruthState& s : tick.truth) {
      if (cfg_.map.rsu_sees(s.position)) {
        ObjectState o;
        o.object_id = s.object_id;
        o.position = s.position + cfg_.noise.rsu * noise(kRsu, k, s.object_id);
        o.velocity = s.velocity;
        o.sigma = cfg_.noise.rsu;
        o.timestamp = t;
        o.class_tag = s.class_tag == ClassTag::ego ? ClassTag::vehicle : s.class_tag;
        tick.rsu.objects.push_back(o);
      }
      if (s.object_id == kEgoId) {
        continue;
      }
      const Vec2 rel = s.position - ego.position;
      const double range = norm(rel);
      if (range <= cfg_.ego_sensor.range && range > 0.0 && dot(rel, heading) >= cos_half * range) {
        ObjectState o;
        o.object_id = s.object_id;
        o.position = s.position + cfg_.noise.ego_perception * noise(kPerception, k, s.object_id);
        o.velocity = s.velocity;
        o.sigma = cfg_.noise.ego_perception;
        o.timestamp = t;
        o.class_tag = s.class_tag;
        tick.ego.objects.push_back(o);
      }
    }
    tick.rsu = apply_fault(std::move(tick.rsu), cfg_.fault, t);
    return tick;
  }

 private:
  enum Channel : std::uint64_t { kRsu = 1, kPerception = 2, kLocalization = 3 };

  Vec2 noise(Channel channel, std::size_t k, ObjectId id) const {
    return {rng_.normal({channel, k, id, 0}), rng_.normal({channel, k, id, 1})};
  }

  TruthState ego_truth(double t) const {
    const LaneGeometry& lane = *cfg_.map.find_lane(cfg_.ego.lane_id);
    const double raw = cfg_.ego.start_s + cfg_.ego.speed * t;
    const double s = std::min(raw, lane.length());
    TruthState out;
    out.object_id = kEgoId;
    out.position = lane.point_at(s);
    out.velocity = raw < lane.length() ? cfg_.ego.speed * lane.tangent_at(s) : Vec2{};
    out.class_tag = ClassTag::ego;
    out.lane_id = lane.lane_id;
    return out;
  }

  Vec2 ego_heading(double t) const {
    const LaneGeometry& lane = *cfg_.map.find_lane(cfg_.ego.lane_id);
    return lane.tangent_at(std::min(cfg_.ego.start_s + cfg_.ego.speed * t, lane.length()));
  }

  // Distance travelled and current speed, `tau` seconds after entry.
  struct Progress {
    double distance;
    double speed;
  };

  Progress progress(std::size_t i, double tau) const {
    const ActorSpec& a = cfg_.actors[i];
    const FaultSpec& f = cfg_.fault;
    const bool braking = f.kind == FaultKind::erratic_motion && f.target_id == i + 1;
    const double brake_at = braking ? std::max(0.0, f.onset - a.entry_time) : 0.0;
    if (!braking || tau <= brake_at) {
      return {a.speed * tau, a.speed};
    }
    const double decel = f.magnitude;
    double brake_time = a.speed / decel;
    if (f.duration) {
      brake_time = std::min(brake_time, *f.duration);
    }
    const double dt = std::min(tau - brake_at, brake_time);
    const double v_end = std::max(0.0, a.speed - decel * brake_time);
    const double distance = a.speed * brake_at + a.speed * dt - 0.5 * decel * dt * dt +
                            v_end * std::max(0.0, tau - brake_at - brake_time);
    const double speed = tau - brake_at < brake_time ? a.speed - decel * dt : v_end;
    return {distance, speed};
  }

  std::optional<TruthState> actor_truth(std::size_t i, double t) const {
    const ActorSpec& a = cfg_.actors[i];
    if (t < a.entry_time) {
      return std::nullopt;
    }
    const LaneGeometry& lane = *cfg_.map.find_lane(a.lane_id);
    const Progress p = progress(i, t - a.entry_time);
    const double s = a.start_s + p.distance;
    if (s > lane.length()) {
      return std::nullopt;
    }
    TruthState out;
    out.object_id = static_cast<ObjectId>(i + 1);
    out.position = lane.point_at(s);
    out.velocity = p.speed * lane.tangent_at(s);
    out.class_tag = a.class_tag;
    out.lane_id = a.lane_id;
    return out;
  }

  ScenarioConfig cfg_;
  CounterRng rng_;
  std::size_t ticks_ = 0;
};

/// Runs the whole scenario and returns one tuple per tick.
inline std::vector<Tick> simulate(const ScenarioConfig& cfg) {
  const Simulator sim(cfg);
  std::vector<Tick> out;
  out.reserve(sim.size());
  for (std::size_t k = 0; k < sim.size(); ++k) {
    out.push_back(sim.at(k));
  }
  return out;
}

}  // namespace slrel
