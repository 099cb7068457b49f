#include "obsloc/evaluation.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "obsloc/errors.hpp"

namespace obsloc {

std::vector<PosePair> associate(const Trajectory& est, const Trajectory& gt, double max_dt) {
  std::vector<PosePair> pairs;
  std::vector<bool> used(gt.size(), false);
  for (const TimedPose& e : est) {
    int best = -1;
    double best_dt = max_dt;
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (used[j]) continue;
      const double dt = std::abs(gt[j].timestamp - e.timestamp);
      if (dt <= best_dt) {
        best_dt = dt;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) continue;
    used[best] = true;
    pairs.push_back({e.timestamp, e.pose, gt[best].pose});
  }
  if (pairs.empty()) throw NoAssociations("no trajectory pairs within the timestamp tolerance");
  return pairs;
}

PoseSE3 umeyama_alignment(const std::vector<PosePair>& pairs) {
  Eigen::Matrix3Xd src(3, pairs.size()), dst(3, pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    src.col(i) = pairs[i].est.translation();
    dst.col(i) = pairs[i].gt.translation();
  }
  const Eigen::Matrix4d m = Eigen::umeyama(src, dst, false);
  return PoseSE3(Eigen::Quaterniond(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>());
}

AteResult ate(const std::vector<PosePair>& pairs, bool align) {
  if (pairs.empty()) throw NoAssociations("cannot evaluate an empty pairing");
  AteResult result;
  result.pairs = pairs.size();
  if (align && pairs.size() >= 3) result.alignment = umeyama_alignment(pairs);

  double sse = 0.0;
  for (const PosePair& pair : pairs) {
    const Eigen::Vector3d mapped = apply(result.alignment, pair.est.translation());
    sse += (pair.gt.translation() - mapped).squaredNorm();
  }
  result.rmse = std::sqrt(sse / static_cast<double>(pairs.size()));
  return result;
}

MapQualityResult map_outlier_rate(const PointCloud& built, const KdTree& gt_index,
                                  double threshold, ExecMode mode) {
  if (built.empty()) throw EmptyCloud("cannot rate an empty built map");
  if (threshold < 0.0) throw std::invalid_argument("outlier threshold must be >= 0");

  const std::size_t n = built.size();
  std::vector<double> dist(n);
  parallel_for(n, mode, [&](std::size_t i) {
    dist[i] = gt_index.nearest(built.points[i]).second;
  });

  MapQualityResult result;
  result.total = n;
  result.threshold = threshold;
  for (const double d : dist) {
    if (d > threshold) ++result.outliers;
  }
  result.outlier_fraction = static_cast<double>(result.outliers) / static_cast<double>(n);
  return result;
}

}  // namespace obsloc
