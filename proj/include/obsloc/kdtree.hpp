#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "obsloc/point_cloud.hpp"

namespace obsloc {

/// Exact nearest-neighbour index over a point cloud (median-split kd-tree).
/// Distance ties are broken toward the smaller point index, so query results
/// are identical to a brute-force linear scan in all cases.
class KdTree {
 public:
  /// Builds the tree. Throws EmptyCloud when the cloud has no points.
  explicit KdTree(const PointCloud& cloud);

  std::size_t size() const { return items_.size(); }

  /// Nearest stored point: (original index, euclidean distance).
  std::pair<int, double> nearest(const Eigen::Vector3d& query) const;

  /// k nearest stored points sorted by distance (ties by index). Returns
  /// fewer than k entries only when the cloud holds fewer than k points.
  std::vector<std::pair<int, double>> k_nearest(const Eigen::Vector3d& query, int k) const;

 private:
  struct Node {
    double split = 0.0;
    std::int32_t axis = -1;  // -1 marks a leaf
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t begin = 0;
    std::int32_t end = 0;
  };
  using Item = std::pair<Eigen::Vector3d, int>;  // point, original index

  std::int32_t build(std::int32_t begin, std::int32_t end);

  std::vector<Node> nodes_;
  std::vector<Item> items_;  // reordered for locality
  std::int32_t root_ = -1;

  static constexpr std::int32_t kLeafSize = 16;
};

}  // namespace obsloc
