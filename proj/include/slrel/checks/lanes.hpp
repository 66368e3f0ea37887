#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "slrel/sim/types.hpp"

namespace slrel {

struct LaneMatch {
  const LaneGeometry* lane = nullptr;
  LaneCoordinates coords;

  bool on_lane() const { return std::abs(coords.d) <= lane->width; }
};

/// Nearest lane whose travel direction agrees with the object's heading.
///
/// Objects slower than `min_speed` are compatible with every lane. Only
/// projections inside the lane's extent count. Returns nothing when no
/// compatible lane exists; the match may still be off-lane.
inline std::optional<LaneMatch> associate_lane(const IntersectionMap& map, Vec2 position, Vec2 velocity,
                                               double heading_tolerance_deg = 45.0,
                                               double min_speed = 0.5) {
  const double speed = norm(velocity);
  const double cos_tol = std::cos(heading_tolerance_deg * std::numbers::pi / 180.0);
  std::optional<LaneMatch> best;
  for (const LaneGeometry& lane : map.lanes) {
    const LaneCoordinates c = arc_length_project(lane, position);
    if (!c.interior) {
      continue;
    }
    if (speed >= min_speed && dot(velocity, lane.tangent_at(c.s)) < cos_tol * speed) {
      continue;
    }
    if (!best || std::abs(c.d) < std::abs(best->coords.d)) {
      best = LaneMatch{&lane, c};
    }
  }
  return best;
}

/// Region where RSU and ego observations can be compared: inside the RSU
/// field of view, outside the blind spot, and at least `margin` from both
/// boundaries.
inline bool in_coverage(const IntersectionMap& map, Vec2 p, double margin) {
  if (!map.rsu_sees(p) || boundary_distance(map.rsu_fov, p) < margin) {
    return false;
  }
  return !map.blind_spot || boundary_distance(*map.blind_spot, p) >= margin;
}

}  // namespace slrel
