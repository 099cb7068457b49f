#pragma once

#include <vector>

#include "obsloc/lie.hpp"

namespace obsloc {

struct TimedPose {
  double timestamp = 0.0;
  PoseSE3 pose;
};

/// Timestamped absolute pose sequence, ordered by timestamp.
using Trajectory = std::vector<TimedPose>;

/// Relative motion between consecutive timestamps, stamped with the time of
/// the later pose: pose(t_k) = pose(t_{k-1}) * rel.
struct TimedRelativePose {
  double timestamp = 0.0;
  PoseSE3 rel;
};

}  // namespace obsloc
