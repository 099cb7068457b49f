#pragma once

#include <functional>
#include <vector>

#include "obsloc/kdtree.hpp"
#include "obsloc/lie.hpp"
#include "obsloc/parallel.hpp"
#include "obsloc/point_cloud.hpp"

namespace obsloc {

/// One source-to-target match. The source point is kept in the source frame;
/// target point, unit normal and planarity come from the matched map point.
struct Correspondence {
  Eigen::Vector3d source = Eigen::Vector3d::Zero();
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  double planarity = 1.0;
  int source_index = -1;  // position in the source cloud, when known
};

struct RegistrationConfig {
  int max_iterations = 30;
  double step_tol = 1e-6;       // stop when the tangent step norm drops below this
  double max_dist = 1.0;        // correspondence rejection radius
  double cond_limit = 1e8;      // condition number that triggers damping
  bool weight_by_planarity = true;  // residual weights a_2d^2
  ExecMode exec = ExecMode::Parallel;
};

struct RegistrationResult {
  PoseSE3 pose;
  double final_error = 0.0;   // weighted point-to-plane SSE at the returned pose
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;    // normal equations required damping at least once
  int correspondence_count = 0;
  Matrix6d alignment = Matrix6d::Zero();  // pre-optimization alignment matrix
  std::vector<double> error_history;      // total cost at the start of each iteration
};

/// Matches every source point (mapped through pose) to its nearest target
/// point, keeping matches within max_dist whose target normal is valid.
/// Requires target normals and planarity.
std::vector<Correspondence> find_correspondences(const PointCloud& source,
                                                 const PointCloud& target,
                                                 const KdTree& target_index, const PoseSE3& pose,
                                                 double max_dist,
                                                 ExecMode mode = ExecMode::Parallel);

/// Signed point-to-plane distance of one correspondence at the given pose.
double point_plane_residual(const Correspondence& c, const PoseSE3& pose);

/// Analytic derivative of the residual with respect to a world-frame tangent
/// increment of the pose: [ (T p) x n ; n ], rotation block first.
Vector6d residual_jacobian(const Correspondence& c, const PoseSE3& pose);

/// Unweighted Gram matrix of the residual Jacobian rows. Its spectrum
/// exposes which pose directions the correspondence geometry constrains; the
/// eigenvector of the smallest eigenvalue is the least-observable direction.
Matrix6d alignment_matrix(const std::vector<Correspondence>& corrs, const PoseSE3& pose,
                          ExecMode mode = ExecMode::Parallel);

/// Gauss-Newton problem description shared by plain registration and the
/// prior-fused solver. Either a fixed correspondence set is given, or
/// source + target + index for re-matching at every iteration. The extra
/// residual term (when its weights are not all zero) is differentiated
/// numerically and added to the normal equations.
struct GnProblem {
  const std::vector<Correspondence>* fixed = nullptr;
  const PointCloud* source = nullptr;
  const PointCloud* target = nullptr;
  const KdTree* index = nullptr;
  PoseSE3 init;
  std::function<Vector6d(const PoseSE3&)> extra_residual;
  Vector6d extra_weights = Vector6d::Zero();
  bool require_min_correspondences = true;  // at least 6 matches per iteration
};

RegistrationResult gauss_newton_core(const GnProblem& problem, const RegistrationConfig& cfg);

/// Point-to-plane ICP: repeated matching and Gauss-Newton stepping from init.
/// Throws InsufficientCorrespondences when fewer than 6 matches survive.
RegistrationResult solve_registration(const PointCloud& source, const PointCloud& target,
                                      const KdTree& target_index, const PoseSE3& init,
                                      const RegistrationConfig& cfg = {});

}  // namespace obsloc
