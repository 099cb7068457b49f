#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "obsloc/lie.hpp"

namespace obsloc {

/// Point cloud with optional per-point attributes. Attribute vectors are
/// either empty or exactly the same length as points. A zero normal marks a
/// point whose normal could not be estimated.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> normals;
  std::vector<double> planarity;
  std::vector<std::array<std::uint8_t, 3>> colors;
  std::string frame_id;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_normals() const { return !normals.empty(); }
  bool has_planarity() const { return !planarity.empty(); }
  bool has_colors() const { return !colors.empty(); }

  void reserve(std::size_t n) {
    points.reserve(n);
    if (!normals.empty() || n == 0) normals.reserve(n);
  }

  /// Checks the size invariants, throwing LengthMismatch on violation.
  void validate() const;
};

/// Returns a copy of the cloud with points (and normals, by rotation only)
/// mapped through the pose.
PointCloud transform_cloud(const PointCloud& cloud, const PoseSE3& pose);

}  // namespace obsloc
