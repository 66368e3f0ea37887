#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "slrel/sim/rng.hpp"
#include "slrel/sim/types.hpp"

namespace slrel {

/// Four-way intersection centered at the origin. Each lane runs straight
/// through the junction and is named after the branch it enters from.
inline constexpr double kPresetLaneWidth = 2.75;
inline constexpr double kPresetHalfLength = 80.0;
inline constexpr double kPresetFovHalf = 35.0;
inline constexpr double kPresetBlindHalf = 3.0;

inline IntersectionMap default_intersection() {
  const double off = kPresetLaneWidth / 2.0;
  const double h = kPresetHalfLength;
  IntersectionMap map;
  map.lanes = {
      {"north", {{-off, h}, {-off, -h}}, kPresetLaneWidth},
      {"south", {{off, -h}, {off, h}}, kPresetLaneWidth},
      {"east", {{h, off}, {-h, off}}, kPresetLaneWidth},
      {"west", {{-h, -off}, {h, -off}}, kPresetLaneWidth},
  };
  const double f = kPresetFovHalf;
  map.rsu_fov = {{-f, -f}, {f, -f}, {f, f}, {-f, f}};
  const double b = kPresetBlindHalf;
  map.blind_spot = Polygon{{-b, -b}, {b, -b}, {b, b}, {-b, b}};
  return map;
}

/// Lanes seen from an entrance: straight on, oncoming, crossing from the
/// right, crossing from the left (right-hand traffic).
struct Approach {
  std::string own;
  std::string oncoming;
  std::string from_right;
  std::string from_left;
};

inline Approach approach_from(std::string_view entrance) {
  if (entrance == "north") return {"north", "south", "west", "east"};
  if (entrance == "south") return {"south", "north", "east", "west"};
  if (entrance == "east") return {"east", "west", "north", "south"};
  if (entrance == "west") return {"west", "east", "south", "north"};
  throw ConfigError("ego.lane_id", "unknown entrance '" + std::string(entrance) + "'");
}

/// Actor ids in evaluation scenarios.
inline constexpr ObjectId kLeadVehicleId = 1;
inline constexpr ObjectId kOncomingVehicleId = 2;
inline constexpr ObjectId kBicycleId = 3;
inline constexpr ObjectId kCrossingVehicleId = 4;
inline constexpr ObjectId kFollowingOncomingId = 5;

/// Ego approaching the junction with a lead vehicle, oncoming traffic, a
/// crossing bicycle from the right and a crossing vehicle from the left.
/// The seed jitters timing and speeds.
inline ScenarioConfig evaluation_scenario(std::string_view entrance, std::uint64_t seed) {
  const CounterRng rng(seed);
  const auto jitter = [&](std::uint64_t key, double spread) {
    return rng.uniform(-spread, spread, {0xA11CE, key});
  };
  const Approach ap = approach_from(entrance);

  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.duration = 16.0;
  cfg.tick = 0.1;
  cfg.map = default_intersection();
  cfg.ego = {ap.own, 8.0 + jitter(1, 0.5), 20.0 + jitter(2, 2.0)};
  cfg.actors = {
      {ap.own, 0.0, 8.5 + jitter(3, 0.5), cfg.ego.start_s + 15.0 + jitter(4, 2.0), ClassTag::vehicle},
      {ap.oncoming, 0.0, 9.0 + jitter(5, 1.0), 10.0 + jitter(6, 3.0), ClassTag::vehicle},
      {ap.from_right, 0.0, 3.0 + jitter(7, 0.4), 45.0 + jitter(8, 2.0), ClassTag::bicycle},
      {ap.from_left, 1.0 + jitter(9, 0.5), 8.0 + jitter(10, 1.0), 20.0 + jitter(11, 3.0), ClassTag::vehicle},
      {ap.oncoming, 4.0 + jitter(12, 0.5), 9.0 + jitter(13, 1.0), 25.0 + jitter(14, 3.0), ClassTag::vehicle},
  };
  return cfg;
}

/// Long fault-free run with regular traffic on every lane, used to build
/// the per-lane reference opinions.
inline ScenarioConfig commissioning_scenario(std::uint64_t seed, double duration = 120.0) {
  const CounterRng rng(seed);
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.duration = duration;
  cfg.tick = 0.1;
  cfg.map = default_intersection();
  cfg.ego = {"north", 0.0, 0.0};
  std::uint64_t key = 0;
  for (const auto& lane : cfg.map.lanes) {
    for (double entry = rng.uniform(0.0, 3.0, {lane.lane_id.size(), key++}); entry < duration;
         entry += rng.uniform(3.0, 7.0, {0xC0, key++})) {
      const bool bike = rng.uniform({0xB1, key++}) < 0.2;
      const double speed = bike ? rng.uniform(3.0, 5.0, {0x5, key++}) : rng.uniform(7.0, 12.0, {0x6, key++});
      cfg.actors.push_back({lane.lane_id, entry, speed, 0.0, bike ? ClassTag::bicycle : ClassTag::vehicle});
    }
  }
  return cfg;
}

}  // namespace slrel
