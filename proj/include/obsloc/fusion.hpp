#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obsloc/observability.hpp"
#include "obsloc/registration.hpp"
#include "obsloc/trajectory.hpp"

namespace obsloc {

/// Relative-pose prior anchored at a reference pose: it predicts
/// inverse(reference) * T for the pose T being solved. Weights are per-axis
/// information weights in [roll, pitch, yaw, x, y, z] order; zero means the
/// prior says nothing about that axis.
struct PriorFactor {
  PoseSE3 rel;
  Vector6d weights = Vector6d::Ones();
};

/// Information weights complementary to the scan confidence: axes the scan
/// constrains well receive ~0, unconstrained axes receive ~1.
Vector6d prior_weights(const ConfidenceCovariance& conf);

/// Error of the prior against an estimated relative pose, expressed in the
/// frame of the estimate: [log(R_est^-1 R_prior); R_est^-1 (t_prior - t_est)].
Vector6d prior_residual(const PriorFactor& prior, const PoseSE3& estimated_rel);

/// Joint problem: point-to-plane terms (either a fixed correspondence set or
/// source + target + index for per-iteration re-matching) plus the optional
/// prior.
struct FusionProblem {
  const std::vector<Correspondence>* correspondences = nullptr;
  const PointCloud* source = nullptr;
  const PointCloud* target = nullptr;
  const KdTree* index = nullptr;
  std::optional<PriorFactor> prior;
  PoseSE3 init;
  PoseSE3 reference;  // anchor of the prior's relative pose
};

/// Minimizes the weighted sum of point-to-plane residuals and prior residual.
/// With a zero-weight (or absent) prior this reduces exactly to plain
/// registration. Throws NoConstraints when there is nothing to optimize.
RegistrationResult joint_optimize(const FusionProblem& problem, const RegistrationConfig& cfg);

struct ScanRecord {
  double timestamp = 0.0;
  PoseSE3 pose;
  ConfidenceCovariance confidence;
  DegeneracyReport degeneracy;
  double min_eig_alignment = 0.0;
  int iterations = 0;
  double final_error = 0.0;
  bool converged = false;
  bool damped = false;
  int correspondence_count = 0;
  bool used_prior = false;
  bool failed = false;  // registration infeasible; pose is the motion prediction
  std::string note;
  std::vector<LabelPair> labels;  // per-point labels, kept every label_every scans
};

struct LocalizationConfig {
  RegistrationConfig reg;
  bool use_priors = true;
  PoseSE3 init_pose;
  double degeneracy_threshold = 0.5;
  int normal_k = 10;           // for maps that arrive without normals
  double prior_max_dt = 1e-3;  // timestamp matching tolerance for priors
  double built_map_leaf = 0.05;
  int label_every = 0;  // keep per-point labels for every Nth scan, 0 disables
};

struct LocalizationResult {
  Trajectory trajectory;
  std::vector<ScanRecord> records;
  PointCloud built_map;  // union of successfully registered scans, downsampled
};

/// Sequential map-based localization. Each scan is predicted from the
/// previous estimate (composed with its prior when priors are in use),
/// registered against the map, and fused with the prior weighted by the
/// complement of the scan confidence. Scans whose registration is infeasible
/// keep the predicted pose and are flagged, not fatal.
LocalizationResult run_localization(const PointCloud& map,
                                    const std::vector<std::pair<double, PointCloud>>& scans,
                                    const std::vector<TimedRelativePose>& priors,
                                    const LocalizationConfig& cfg);

}  // namespace obsloc
