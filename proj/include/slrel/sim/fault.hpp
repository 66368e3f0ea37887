#pragma once

#include <algorithm>

#include "slrel/sim/types.hpp"

namespace slrel {

inline void validate(const FaultSpec& fault) {
  if (!(fault.onset >= 0.0) || !std::isfinite(fault.onset)) {
    throw ConfigError("fault.onset", "must be >= 0");
  }
  if (fault.kind == FaultKind::none) {
    return;
  }
  if (!(fault.magnitude > 0.0) || !std::isfinite(fault.magnitude)) {
    throw ConfigError("fault.magnitude", "must be > 0 for fault kind " + std::string(to_string(fault.kind)));
  }
  if (fault.duration && !(*fault.duration > 0.0)) {
    throw ConfigError("fault.duration", "must be > 0 when set");
  }
  if (fault.kind == FaultKind::erratic_motion && !fault.target_id) {
    throw ConfigError("fault.target_id", "erratic_motion needs a target actor");
  }
}

/// Applies a fault to an RSU object list observed at time t.
///
/// erratic_motion changes the target's ground-truth kinematics inside the
/// simulator, so the list itself passes through unchanged here.
inline ObjectList apply_fault(ObjectList list, const FaultSpec& fault, double t) {
  if (list.source != Source::rsu) {
    throw PreconditionError("faults apply to RSU object lists only");
  }
  if (!fault.active_at(t)) {
    return list;
  }
  switch (fault.kind) {
    case FaultKind::none:
    case FaultKind::erratic_motion:
      return list;
    case FaultKind::map_shift_east:
      for (auto& obj : list.objects) {
        obj.position.x += fault.magnitude;
      }
      return list;
    case FaultKind::underestimated_sigma:
      for (auto& obj : list.objects) {
        obj.sigma /= fault.magnitude;
      }
      return list;
    case FaultKind::missed_detection: {
      const ObjectId target = *fault.target();
      std::erase_if(list.objects, [&](const ObjectState& o) { return o.object_id == target; });
      return list;
    }
  }
  throw Error("unknown fault kind");
}

}  // namespace slrel
