#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slrel/core/error.hpp"
#include "slrel/sim/geometry.hpp"

namespace slrel {

using ObjectId = std::uint64_t;

/// Id the simulator gives the ego vehicle; actors are numbered from 1.
inline constexpr ObjectId kEgoId = 0;

enum class ClassTag { vehicle, bicycle, ego };
enum class Source { rsu, ego };

inline std::string_view to_string(ClassTag c) {
  switch (c) {
    case ClassTag::vehicle: return "vehicle";
    case ClassTag::bicycle: return "bicycle";
    case ClassTag::ego: return "ego";
  }
  return "vehicle";
}

inline std::optional<ClassTag> parse_class_tag(std::string_view s) {
  if (s == "vehicle") return ClassTag::vehicle;
  if (s == "bicycle") return ClassTag::bicycle;
  if (s == "ego") return ClassTag::ego;
  return std::nullopt;
}

inline std::string_view to_string(Source s) { return s == Source::rsu ? "RSU" : "EGO"; }

struct ObjectState {
  ObjectId object_id = 0;
  Vec2 position;
  Vec2 velocity;
  double sigma = 1.0;  // isotropic position standard deviation, m
  double timestamp = 0.0;
  ClassTag class_tag = ClassTag::vehicle;
};

struct ObjectList {
  double timestamp = 0.0;
  std::vector<ObjectState> objects;
  Source source = Source::rsu;
};

struct EgoPose {
  Vec2 position;
  double sigma_ego = 0.1;
  double timestamp = 0.0;
};

/// Noise-free state of one simulated participant.
struct TruthState {
  ObjectId object_id = 0;
  Vec2 position;
  Vec2 velocity;
  ClassTag class_tag = ClassTag::vehicle;
  std::string lane_id;
};

struct IntersectionMap {
  std::vector<LaneGeometry> lanes;
  Polygon rsu_fov;
  std::optional<Polygon> blind_spot;

  const LaneGeometry* find_lane(std::string_view id) const {
    for (const auto& lane : lanes) {
      if (lane.lane_id == id) {
        return &lane;
      }
    }
    return nullptr;
  }

  /// True where the RSU can observe an object.
  bool rsu_sees(Vec2 p) const {
    return contains(rsu_fov, p) && !(blind_spot && contains(*blind_spot, p));
  }
};

enum class FaultKind { none, missed_detection, map_shift_east, underestimated_sigma, erratic_motion };

inline std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::none: return "none";
    case FaultKind::missed_detection: return "missed_detection";
    case FaultKind::map_shift_east: return "map_shift_east";
    case FaultKind::underestimated_sigma: return "underestimated_sigma";
    case FaultKind::erratic_motion: return "erratic_motion";
  }
  return "none";
}

/// Throws ConfigError for names outside the supported fault classes.
inline FaultKind parse_fault_kind(std::string_view s) {
  for (FaultKind k : {FaultKind::none, FaultKind::missed_detection, FaultKind::map_shift_east,
                      FaultKind::underestimated_sigma, FaultKind::erratic_motion}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw ConfigError("fault.kind", "unknown fault kind '" + std::string(s) + "'");
}

struct FaultSpec {
  FaultKind kind = FaultKind::none;
  double onset = 0.0;
  // Shift in m, sigma scale factor, deceleration in m/s^2, or missed-object id.
  double magnitude = 0.0;
  std::optional<ObjectId> target_id;
  std::optional<double> duration;  // unset means the fault persists

  bool active_at(double t) const {
    return kind != FaultKind::none && t >= onset && (!duration || t < onset + *duration);
  }

  /// Object affected by missed_detection or erratic_motion.
  std::optional<ObjectId> target() const {
    if (target_id) {
      return target_id;
    }
    if (kind == FaultKind::missed_detection) {
      return static_cast<ObjectId>(std::llround(magnitude));
    }
    return std::nullopt;
  }
};

struct ActorSpec {
  std::string lane_id;
  double entry_time = 0.0;
  double speed = 10.0;  // constant unless an erratic_motion fault targets the actor
  double start_s = 0.0;
  ClassTag class_tag = ClassTag::vehicle;
};

struct EgoSpec {
  std::string lane_id;
  double speed = 8.0;
  double start_s = 0.0;
};

struct NoiseSpec {
  double rsu = 0.3;
  double ego_perception = 0.2;
  double ego_localization = 0.1;
};

struct EgoSensorSpec {
  double range = 40.0;
  double half_angle_deg = 60.0;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double duration = 15.0;
  double tick = 0.1;
  IntersectionMap map;
  std::vector<ActorSpec> actors;
  EgoSpec ego;
  FaultSpec fault;
  NoiseSpec noise;
  EgoSensorSpec ego_sensor;
};

/// One simulated time step.
struct Tick {
  std::size_t index = 0;
  double t = 0.0;
  EgoPose ego_pose;
  ObjectList rsu;
  ObjectList ego;
  std::vector<TruthState> truth;
};

}  // namespace slrel
