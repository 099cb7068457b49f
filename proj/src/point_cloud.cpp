#include "obsloc/point_cloud.hpp"

#include "obsloc/errors.hpp"

namespace obsloc {

void PointCloud::validate() const {
  const std::size_t n = points.size();
  if (!normals.empty() && normals.size() != n)
    throw LengthMismatch("normals length " + std::to_string(normals.size()) +
                         " does not match points length " + std::to_string(n));
  if (!planarity.empty() && planarity.size() != n)
    throw LengthMismatch("planarity length " + std::to_string(planarity.size()) +
                         " does not match points length " + std::to_string(n));
  if (!colors.empty() && colors.size() != n)
    throw LengthMismatch("colors length " + std::to_string(colors.size()) +
                         " does not match points length " + std::to_string(n));
}

PointCloud transform_cloud(const PointCloud& cloud, const PoseSE3& pose) {
  PointCloud out = cloud;
  const Eigen::Matrix3d r = pose.rotation_matrix();
  const Eigen::Vector3d t = pose.translation();
  for (auto& p : out.points) p = r * p + t;
  for (auto& n : out.normals) n = r * n;
  return out;
}

}  // namespace obsloc
