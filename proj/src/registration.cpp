#include "obsloc/registration.hpp"

#include <cmath>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "obsloc/errors.hpp"

namespace obsloc {

std::vector<Correspondence> find_correspondences(const PointCloud& source,
                                                 const PointCloud& target,
                                                 const KdTree& target_index, const PoseSE3& pose,
                                                 double max_dist, ExecMode mode) {
  if (!target.has_normals() || !target.has_planarity())
    throw MissingNormals("correspondence search needs target normals and planarity");

  const std::size_t n = source.size();
  // One slot per source point keeps the output order independent of the
  // execution mode.
  std::vector<int> match(n, -1);
  const Eigen::Matrix3d r = pose.rotation_matrix();
  const Eigen::Vector3d t = pose.translation();
  const double max_d = max_dist;

  parallel_for(n, mode, [&](std::size_t i) {
    const Eigen::Vector3d p = r * source.points[i] + t;
    const auto [id, dist] = target_index.nearest(p);
    if (dist > max_d) return;
    if (target.normals[id].isZero()) return;  // no usable surface estimate
    match[i] = id;
  });

  std::vector<Correspondence> corrs;
  corrs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (match[i] < 0) continue;
    const int id = match[i];
    corrs.push_back({source.points[i], target.points[id], target.normals[id],
                     target.planarity[id], static_cast<int>(i)});
  }
  return corrs;
}

double point_plane_residual(const Correspondence& c, const PoseSE3& pose) {
  return (apply(pose, c.source) - c.target).dot(c.normal);
}

Vector6d residual_jacobian(const Correspondence& c, const PoseSE3& pose) {
  const Eigen::Vector3d v = apply(pose, c.source);
  Vector6d j;
  j.head<3>() = v.cross(c.normal);
  j.tail<3>() = c.normal;
  return j;
}

Matrix6d alignment_matrix(const std::vector<Correspondence>& corrs, const PoseSE3& pose,
                          ExecMode mode) {
  const std::size_t n = corrs.size();
  std::vector<Vector6d> rows(n);
  const Eigen::Matrix3d r = pose.rotation_matrix();
  const Eigen::Vector3d t = pose.translation();
  parallel_for(n, mode, [&](std::size_t i) {
    const Eigen::Vector3d v = r * corrs[i].source + t;
    rows[i].head<3>() = v.cross(corrs[i].normal);
    rows[i].tail<3>() = corrs[i].normal;
  });

  Matrix6d c = Matrix6d::Zero();
  for (std::size_t i = 0; i < n; ++i) c.noalias() += rows[i] * rows[i].transpose();
  return c;
}

namespace {

struct NormalEquations {
  Matrix6d h = Matrix6d::Zero();
  Vector6d g = Vector6d::Zero();
  double cost = 0.0;
};

// Builds rows in parallel, reduces serially in index order so that the result
// is bitwise identical across execution modes and thread counts.
void accumulate_point_terms(const std::vector<Correspondence>& corrs, const PoseSE3& pose,
                            const RegistrationConfig& cfg, std::vector<Vector6d>& rows,
                            std::vector<double>& residuals, std::vector<double>& weights,
                            NormalEquations& eq) {
  const std::size_t n = corrs.size();
  rows.resize(n);
  residuals.resize(n);
  weights.resize(n);
  const Eigen::Matrix3d r = pose.rotation_matrix();
  const Eigen::Vector3d t = pose.translation();
  const bool use_planarity = cfg.weight_by_planarity;

  parallel_for(n, cfg.exec, [&](std::size_t i) {
    const Correspondence& c = corrs[i];
    const Eigen::Vector3d v = r * c.source + t;
    rows[i].head<3>() = v.cross(c.normal);
    rows[i].tail<3>() = c.normal;
    residuals[i] = (v - c.target).dot(c.normal);
    weights[i] = use_planarity ? c.planarity * c.planarity : 1.0;
  });

  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights[i];
    eq.h.noalias() += w * rows[i] * rows[i].transpose();
    eq.g.noalias() += w * residuals[i] * rows[i];
    eq.cost += w * residuals[i] * residuals[i];
  }
}

double weighted_sse(const std::vector<Correspondence>& corrs, const PoseSE3& pose,
                    const RegistrationConfig& cfg) {
  double sse = 0.0;
  for (const Correspondence& c : corrs) {
    const double w = cfg.weight_by_planarity ? c.planarity * c.planarity : 1.0;
    const double d = point_plane_residual(c, pose);
    sse += w * d * d;
  }
  return sse;
}

}  // namespace

RegistrationResult gauss_newton_core(const GnProblem& problem, const RegistrationConfig& cfg) {
  const bool rematch = problem.index != nullptr;
  if (!rematch && problem.fixed == nullptr)
    throw NoConstraints("no correspondences and no spatial index given");
  const bool has_extra = problem.extra_residual && problem.extra_weights.maxCoeff() > 0.0;

  RegistrationResult result;
  result.pose = problem.init;

  std::vector<Correspondence> matched;
  std::vector<Vector6d> rows;
  std::vector<double> residuals, weights;
  constexpr double kFdStep = 1e-7;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const std::vector<Correspondence>& corrs =
        rematch ? (matched = find_correspondences(*problem.source, *problem.target,
                                                  *problem.index, result.pose, cfg.max_dist,
                                                  cfg.exec))
                : *problem.fixed;

    if (problem.require_min_correspondences && corrs.size() < 6)
      throw InsufficientCorrespondences("only " + std::to_string(corrs.size()) +
                                        " correspondences, need at least 6");
    if (corrs.empty() && !has_extra)
      throw NoConstraints("no correspondences and no active prior term");

    if (it == 0) result.alignment = alignment_matrix(corrs, result.pose, cfg.exec);

    NormalEquations eq;
    accumulate_point_terms(corrs, result.pose, cfg, rows, residuals, weights, eq);

    if (has_extra) {
      const Vector6d e = problem.extra_residual(result.pose);
      Matrix6d je;
      for (int k = 0; k < 6; ++k) {
        Vector6d dir = Vector6d::Zero();
        dir[k] = kFdStep;
        const Vector6d ep = problem.extra_residual(retract(result.pose, TangentVector(dir)));
        const Vector6d em = problem.extra_residual(retract(result.pose, TangentVector(-dir)));
        je.col(k) = (ep - em) / (2.0 * kFdStep);
      }
      const Vector6d w = problem.extra_weights;
      eq.h.noalias() += je.transpose() * w.asDiagonal() * je;
      eq.g.noalias() += je.transpose() * (w.asDiagonal() * e);
      eq.cost += e.dot(w.asDiagonal() * e);
    }

    result.error_history.push_back(eq.cost);

    Eigen::SelfAdjointEigenSolver<Matrix6d> es(eq.h, Eigen::EigenvaluesOnly);
    const double ev_min = es.eigenvalues()(0);
    const double ev_max = es.eigenvalues()(5);
    if (ev_min <= 0.0 || ev_max > cfg.cond_limit * ev_min) {
      double lambda = 1e-6 * eq.h.trace() / 6.0;
      if (!(lambda > 0.0)) lambda = 1e-12;
      eq.h.diagonal().array() += lambda;
      result.degenerate = true;
    }

    const Vector6d delta = eq.h.ldlt().solve(-eq.g);
    result.pose = retract(result.pose, TangentVector(delta));
    result.iterations = it + 1;

    if (delta.norm() < cfg.step_tol) {
      result.converged = true;
      break;
    }
  }

  const std::vector<Correspondence>& final_corrs =
      rematch ? (matched = find_correspondences(*problem.source, *problem.target, *problem.index,
                                                result.pose, cfg.max_dist, cfg.exec))
              : *problem.fixed;
  result.correspondence_count = static_cast<int>(final_corrs.size());
  result.final_error = weighted_sse(final_corrs, result.pose, cfg);
  return result;
}

RegistrationResult solve_registration(const PointCloud& source, const PointCloud& target,
                                      const KdTree& target_index, const PoseSE3& init,
                                      const RegistrationConfig& cfg) {
  if (source.empty()) throw EmptyCloud("cannot register an empty source cloud");
  GnProblem problem;
  problem.source = &source;
  problem.target = &target;
  problem.index = &target_index;
  problem.init = init;
  problem.require_min_correspondences = true;
  return gauss_newton_core(problem, cfg);
}

}  // namespace obsloc
