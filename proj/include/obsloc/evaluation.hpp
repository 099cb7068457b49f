#pragma once

#include "obsloc/kdtree.hpp"
#include "obsloc/parallel.hpp"
#include "obsloc/trajectory.hpp"

namespace obsloc {

struct PosePair {
  double timestamp = 0.0;  // estimate timestamp
  PoseSE3 est;
  PoseSE3 gt;
};

/// Pairs every estimate with the nearest ground-truth pose within max_dt.
/// Each ground-truth pose is used at most once. Throws NoAssociations when
/// nothing can be paired.
std::vector<PosePair> associate(const Trajectory& est, const Trajectory& gt, double max_dt);

/// Best rigid transform (rotation + translation, no scale) mapping estimated
/// positions onto ground truth in the least-squares sense.
PoseSE3 umeyama_alignment(const std::vector<PosePair>& pairs);

struct AteResult {
  double rmse = 0.0;
  std::size_t pairs = 0;
  PoseSE3 alignment;  // identity when align was off or not applicable
};

/// Absolute trajectory error: RMSE of translational residuals, after rigid
/// alignment when align is set (and at least 3 pairs exist).
AteResult ate(const std::vector<PosePair>& pairs, bool align = true);

struct MapQualityResult {
  double outlier_fraction = 0.0;
  std::size_t outliers = 0;
  std::size_t total = 0;
  double threshold = 0.0;
};

/// Fraction of built-map points farther than threshold from their nearest
/// ground-truth map point.
MapQualityResult map_outlier_rate(const PointCloud& built, const KdTree& gt_index,
                                  double threshold = 0.10,
                                  ExecMode mode = ExecMode::Parallel);

}  // namespace obsloc
