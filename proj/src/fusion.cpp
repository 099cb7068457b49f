#include "obsloc/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "obsloc/errors.hpp"
#include "obsloc/features.hpp"

namespace obsloc {

Vector6d prior_weights(const ConfidenceCovariance& conf) {
  return Vector6d::Ones() - conf.vector();
}

Vector6d prior_residual(const PriorFactor& prior, const PoseSE3& estimated_rel) {
  return ominus(prior.rel, estimated_rel).vector();
}

RegistrationResult joint_optimize(const FusionProblem& problem, const RegistrationConfig& cfg) {
  static const std::vector<Correspondence> kNoCorrespondences;

  GnProblem gn;
  gn.init = problem.init;
  gn.require_min_correspondences = false;
  if (problem.index != nullptr) {
    gn.source = problem.source;
    gn.target = problem.target;
    gn.index = problem.index;
  } else if (problem.correspondences != nullptr) {
    gn.fixed = problem.correspondences;
  } else if (problem.prior) {
    gn.fixed = &kNoCorrespondences;  // pure prior problem
  } else {
    throw NoConstraints("fusion problem has neither correspondences nor a prior");
  }

  if (problem.prior) {
    const PriorFactor prior = *problem.prior;
    const PoseSE3 reference = problem.reference;
    gn.extra_residual = [prior, reference](const PoseSE3& pose) {
      return prior_residual(prior, compose(inverse(reference), pose));
    };
    gn.extra_weights = prior.weights;
  }
  return gauss_newton_core(gn, cfg);
}

namespace {

const TimedRelativePose* find_prior(const std::vector<TimedRelativePose>& priors,
                                    double timestamp, double max_dt) {
  const TimedRelativePose* best = nullptr;
  double best_dt = max_dt;
  for (const auto& prior : priors) {
    const double dt = std::abs(prior.timestamp - timestamp);
    if (dt <= best_dt) {
      best_dt = dt;
      best = &prior;
    }
  }
  return best;
}

}  // namespace

LocalizationResult run_localization(const PointCloud& map,
                                    const std::vector<std::pair<double, PointCloud>>& scans,
                                    const std::vector<TimedRelativePose>& priors,
                                    const LocalizationConfig& cfg) {
  const bool map_ready = map.has_normals() && map.has_planarity();
  const PointCloud map_features = map_ready ? PointCloud{} : estimate_normals(map, cfg.normal_k,
                                                                              Eigen::Vector3d::Zero(),
                                                                              cfg.reg.exec);
  const PointCloud& target = map_ready ? map : map_features;
  const KdTree tree(target);

  LocalizationResult result;
  result.trajectory.reserve(scans.size());
  result.records.reserve(scans.size());
  PointCloud accumulated;
  accumulated.frame_id = "map";

  for (std::size_t k = 0; k < scans.size(); ++k) {
    const auto& [timestamp, scan] = scans[k];
    const PoseSE3 prev = k == 0 ? cfg.init_pose : result.trajectory.back().pose;

    const TimedRelativePose* prior_rel =
        cfg.use_priors ? find_prior(priors, timestamp, cfg.prior_max_dt) : nullptr;
    const PoseSE3 init = prior_rel ? compose(prev, prior_rel->rel) : prev;

    ScanRecord record;
    record.timestamp = timestamp;
    record.used_prior = prior_rel != nullptr;
    PoseSE3 pose = init;

    try {
      const auto corrs =
          find_correspondences(scan, target, tree, init, cfg.reg.max_dist, cfg.reg.exec);
      const Matrix6d alignment = alignment_matrix(corrs, init, cfg.reg.exec);
      record.confidence = scan_confidence(label_histogram(corrs, init, cfg.reg.exec));
      record.degeneracy = degeneracy_report(alignment, record.confidence,
                                            cfg.degeneracy_threshold);
      record.min_eig_alignment = record.degeneracy.eigenvalues(0);
      if (cfg.label_every > 0 && k % static_cast<std::size_t>(cfg.label_every) == 0)
        record.labels = point_labels(scan, corrs, init, cfg.reg.exec);

      if (corrs.size() < 6)
        throw InsufficientCorrespondences("scan matched only " + std::to_string(corrs.size()) +
                                          " map points");

      FusionProblem problem;
      problem.source = &scan;
      problem.target = &target;
      problem.index = &tree;
      problem.init = init;
      problem.reference = prev;
      if (prior_rel) problem.prior = PriorFactor{prior_rel->rel, prior_weights(record.confidence)};

      const RegistrationResult reg = joint_optimize(problem, cfg.reg);
      pose = reg.pose;
      record.iterations = reg.iterations;
      record.final_error = reg.final_error;
      record.converged = reg.converged;
      record.damped = reg.degenerate;
      record.correspondence_count = reg.correspondence_count;
    } catch (const std::exception& e) {
      record.failed = true;
      record.note = e.what();
      pose = init;  // fall back to the motion prediction
    }

    record.pose = pose;
    result.trajectory.push_back({timestamp, pose});
    result.records.push_back(std::move(record));

    if (!result.records.back().failed) {
      const PointCloud placed = transform_cloud(scan, pose);
      accumulated.points.insert(accumulated.points.end(), placed.points.begin(),
                                placed.points.end());
    }
  }

  if (!accumulated.empty())
    result.built_map = voxel_downsample(accumulated, cfg.built_map_leaf);
  return result;
}

}  // namespace obsloc
