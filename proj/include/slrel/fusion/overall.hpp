#pragma once

#include "slrel/core/beta.hpp"
#include "slrel/core/fusion.hpp"

namespace slrel {

struct FusionConfig {
  double w_it = 1.0;   // perception-independent group (prediction, map)
  double w_ept = 3.0;  // ego-perception group (perception, localization)

  void validate() const {
    if (!(w_it > 0.0) || !(w_ept > 0.0)) {
      throw PreconditionError("fusion weights must be positive");
    }
  }
};

struct ReliabilityVerdict {
  Opinion opinion = Opinion::vacuous(2);
  double projected = 0.5;
  double mass_high = 0.1;  // beta mass of P(reliable) on [0.9, 1]
  double mass_low = 0.7;   // beta mass of P(reliable) on [0, 0.7]
};

inline ReliabilityVerdict make_verdict(Opinion op) {
  ReliabilityVerdict v;
  v.projected = projected_reliability(op);
  v.mass_high = beta_tail_mass(op, 0.9, 1.0);
  v.mass_low = beta_tail_mass(op, 0.0, 0.7);
  v.opinion = std::move(op);
  return v;
}

/// Uncertainty weighted fusion of one test group; a group whose tests have
/// both seen nothing stays vacuous.
inline Opinion fuse_group(const Opinion& a, const Opinion& b) {
  if (a.is_vacuous() && b.is_vacuous()) {
    return averaging_fuse(a, b);
  }
  return uncertainty_weighted_fuse(a, b);
}

/// Overall reliability: each group fused by uncertainty weighting, then the
/// two groups combined by importance weighting.
inline ReliabilityVerdict fuse_overall(const Opinion& prediction, const Opinion& map, const Opinion& perception,
                                       const Opinion& localization, const FusionConfig& cfg = {}) {
  cfg.validate();
  for (const Opinion* op : {&prediction, &map, &perception, &localization}) {
    if (op->cardinality() != 2) {
      throw DomainMismatchError("test opinions must be binary reliability opinions");
    }
    if (op->is_dogmatic()) {
      throw DogmaticOpinionError("test opinions must not be dogmatic");
    }
  }
  const Opinion independent = fuse_group(prediction, map);
  const Opinion ego_based = fuse_group(perception, localization);
  return make_verdict(importance_weighted_fuse(independent, cfg.w_it, ego_based, cfg.w_ept));
}

}  // namespace slrel
