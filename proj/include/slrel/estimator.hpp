#pragma once

#include <memory>
#include <vector>

#include "slrel/checks/ego_tests.hpp"
#include "slrel/checks/map_test.hpp"
#include "slrel/checks/prediction_test.hpp"
#include "slrel/fusion/overall.hpp"
#include "slrel/sim/types.hpp"

namespace slrel {

struct EstimatorConfig {
  PredictionTestConfig prediction;
  MapTestConfig map;
  double d_max = 2.0;
  double w_mis = 10.0;
  double w_under = 10.0;
  double coverage_margin = 1.0;  // m kept from the FOV and blind-spot edges
  FusionConfig fusion;
};

/// Test opinions and overall verdict after one tick.
struct TickMetrics {
  std::size_t tick = 0;
  double t = 0.0;
  Opinion prediction = Opinion::vacuous(2);
  Opinion map = Opinion::vacuous(2);
  Opinion perception = Opinion::vacuous(2);
  Opinion localization = Opinion::vacuous(2);
  ReliabilityVerdict overall;
  bool missed_ego = false;
  MapUpdate map_update;
};

/// Runs the four consistency tests over a tick stream and fuses them.
class ReliabilityEstimator {
 public:
  ReliabilityEstimator(IntersectionMap map, std::vector<LaneReference> references, HistogramLayout layout,
                       EstimatorConfig cfg = {})
      : map_(std::make_unique<const IntersectionMap>(std::move(map))),
        cfg_(std::move(cfg)),
        prediction_(*map_, cfg_.prediction),
        map_test_(*map_, std::move(references), layout, cfg_.map) {
    cfg_.fusion.validate();
    perception_.d_max = cfg_.d_max;
    perception_.w_mis = cfg_.w_mis;
    localization_.d_max = cfg_.d_max;
    localization_.w_under = cfg_.w_under;
    perception_.validate();
    localization_.validate();
  }

  const IntersectionMap& map() const { return *map_; }
  const EstimatorConfig& config() const { return cfg_; }

  TickMetrics step(const Tick& tick) {
    TickMetrics m;
    m.tick = tick.index;
    m.t = tick.t;

    const LocalizationResult loc =
        localization_test_update(localization_, tick.ego_pose, tick.rsu, *map_, cfg_.coverage_margin);
    localization_ = loc.state;
    m.missed_ego = loc.missed_detection;

    ObjectList covered = tick.ego;
    std::erase_if(covered.objects,
                  [&](const ObjectState& o) { return !in_coverage(*map_, o.position, cfg_.coverage_margin); });
    perception_ = perception_test_update(perception_, covered, tick.rsu);
    if (loc.missed_detection) {
      perception_ = perception_register_miss(perception_);
    }

    m.map_update = map_test_.update(tick.rsu);
    prediction_.update(tick.rsu);

    m.prediction = prediction_.opinion();
    m.map = map_test_.opinion();
    m.perception = perception_.opinion;
    m.localization = localization_.opinion;
    m.overall = fuse_overall(m.prediction, m.map, m.perception, m.localization, cfg_.fusion);
    return m;
  }

  const PredictionTest& prediction_test() const { return prediction_; }
  const MapTest& map_test() const { return map_test_; }
  const PerceptionTestState& perception_test() const { return perception_; }
  const LocalizationTestState& localization_test() const { return localization_; }

 private:
  std::unique_ptr<const IntersectionMap> map_;
  EstimatorConfig cfg_;
  PredictionTest prediction_;
  MapTest map_test_;
  PerceptionTestState perception_;
  LocalizationTestState localization_;
};

}  // namespace slrel
