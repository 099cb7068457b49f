#pragma once

#include "obsloc/kdtree.hpp"
#include "obsloc/parallel.hpp"
#include "obsloc/point_cloud.hpp"

namespace obsloc {

/// Planarity score a_2d = (s2 - s3) / s1 from singular values s1 >= s2 >= s3
/// of a neighbourhood covariance. 1 for a perfect plane, 0 for isotropic or
/// linear neighbourhoods. Throws InvalidEigenvalues when the ordering or
/// positivity assumptions are violated.
double planarity_scalar(double s1, double s2, double s3);

/// PCA normal estimation from the k nearest neighbours of each point (the
/// point itself included). Normals are oriented toward the viewpoint.
/// Degenerate neighbourhoods (fewer than 3 points, or vanishing spread) get a
/// zero normal and planarity 0. Returns a copy of the cloud with normals and
/// planarity filled in.
PointCloud estimate_normals(const PointCloud& cloud, int k = 10,
                            const Eigen::Vector3d& viewpoint = Eigen::Vector3d::Zero(),
                            ExecMode mode = ExecMode::Parallel);

/// Centroid voxel filter. Output keeps voxels in order of first appearance;
/// per-point attributes are dropped. leaf must be positive.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

}  // namespace obsloc
