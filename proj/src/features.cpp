#include "obsloc/features.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "obsloc/errors.hpp"

namespace obsloc {

double planarity_scalar(double s1, double s2, double s3) {
  if (!(s1 >= s2 && s2 >= s3 && s3 >= 0.0))
    throw InvalidEigenvalues("singular values must satisfy s1 >= s2 >= s3 >= 0");
  if (s1 <= 0.0) throw InvalidEigenvalues("leading singular value must be positive");
  return (s2 - s3) / s1;
}

PointCloud estimate_normals(const PointCloud& cloud, int k, const Eigen::Vector3d& viewpoint,
                            ExecMode mode) {
  if (cloud.empty()) throw EmptyCloud("cannot estimate normals on an empty cloud");
  if (k < 3) throw std::invalid_argument("normal estimation needs k >= 3");
  cloud.validate();

  PointCloud out = cloud;
  const std::size_t n = cloud.size();
  out.normals.assign(n, Eigen::Vector3d::Zero());
  out.planarity.assign(n, 0.0);

  const KdTree tree(cloud);
  constexpr double kMinSpread = 1e-12;

  parallel_for(n, mode, [&](std::size_t i) {
    const auto nbrs = tree.k_nearest(cloud.points[i], k);
    if (nbrs.size() < 3) return;

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& [id, dist] : nbrs) mean += cloud.points[id];
    mean /= static_cast<double>(nbrs.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& [id, dist] : nbrs) {
      const Eigen::Vector3d d = cloud.points[id] - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d evals = eig.eigenvalues();  // ascending
    const double s1 = std::sqrt(std::max(evals[2], 0.0));
    const double s2 = std::sqrt(std::max(evals[1], 0.0));
    const double s3 = std::sqrt(std::max(evals[0], 0.0));
    if (s1 <= kMinSpread) return;  // all neighbours coincide

    Eigen::Vector3d normal = eig.eigenvectors().col(0);
    if (normal.dot(cloud.points[i] - viewpoint) > 0.0) normal = -normal;
    out.normals[i] = normal;
    out.planarity[i] = (s2 - s3) / s1;
  });

  return out;
}

namespace {

inline std::uint64_t voxel_key(const Eigen::Vector3d& p, double inv_leaf) {
  constexpr std::int64_t kOffset = 1 << 20;
  const std::int64_t ix = static_cast<std::int64_t>(std::floor(p.x() * inv_leaf)) + kOffset;
  const std::int64_t iy = static_cast<std::int64_t>(std::floor(p.y() * inv_leaf)) + kOffset;
  const std::int64_t iz = static_cast<std::int64_t>(std::floor(p.z() * inv_leaf)) + kOffset;
  return (static_cast<std::uint64_t>(ix & 0x1fffff) << 42) |
         (static_cast<std::uint64_t>(iy & 0x1fffff) << 21) |
         static_cast<std::uint64_t>(iz & 0x1fffff);
}

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double leaf) {
  if (!(leaf > 0.0)) throw std::invalid_argument("voxel leaf size must be positive");
  PointCloud out;
  out.frame_id = cloud.frame_id;
  if (cloud.empty()) return out;

  const double inv_leaf = 1.0 / leaf;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(cloud.size());
  std::vector<Eigen::Vector3d> sums;
  std::vector<std::size_t> counts;

  for (const auto& p : cloud.points) {
    const std::uint64_t key = voxel_key(p, inv_leaf);
    auto [it, inserted] = slot.try_emplace(key, sums.size());
    if (inserted) {
      sums.push_back(p);
      counts.push_back(1);
    } else {
      sums[it->second] += p;
      ++counts[it->second];
    }
  }

  out.points.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i)
    out.points[i] = sums[i] / static_cast<double>(counts[i]);
  return out;
}

}  // namespace obsloc
