#include "obsloc/observability.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "obsloc/errors.hpp"

namespace obsloc {

const char* dof_name(DofLabel label) {
  switch (label) {
    case DofLabel::Roll: return "roll";
    case DofLabel::Pitch: return "pitch";
    case DofLabel::Yaw: return "yaw";
    case DofLabel::X: return "x";
    case DofLabel::Y: return "y";
    case DofLabel::Z: return "z";
  }
  return "?";
}

ObservabilityVector point_observability(const Correspondence& c, const PoseSE3& t_init) {
  const Eigen::Vector3d v = apply(t_init, c.source);
  const Eigen::Vector3d cross = v.cross(c.normal);
  const double w = c.planarity * c.planarity;
  ObservabilityVector obs;
  obs.head<3>() = w * cross.cwiseAbs();
  obs.tail<3>() = w * c.normal.cwiseAbs();
  return obs;
}

namespace {

std::optional<DofLabel> group_argmax(const ObservabilityVector& obs, int offset) {
  int best = -1;
  double best_val = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double val = obs[offset + k];
    if (val > best_val) {  // strict: ties keep the earlier axis
      best_val = val;
      best = offset + k;
    }
  }
  if (best < 0) return std::nullopt;
  return static_cast<DofLabel>(best);
}

}  // namespace

LabelPair assign_labels(const ObservabilityVector& obs) {
  return {group_argmax(obs, 0), group_argmax(obs, 3)};
}

LabelHistogram label_histogram(const std::vector<Correspondence>& corrs, const PoseSE3& t_init,
                               ExecMode mode) {
  const std::size_t n = corrs.size();
  std::vector<LabelPair> labels(n);
  parallel_for(n, mode, [&](std::size_t i) {
    labels[i] = assign_labels(point_observability(corrs[i], t_init));
  });

  LabelHistogram hist;
  for (const LabelPair& lp : labels) {
    if (lp.rot) ++hist.counts[static_cast<int>(*lp.rot)];
    if (lp.trans) ++hist.counts[static_cast<int>(*lp.trans)];
  }
  return hist;
}

ConfidenceCovariance scan_confidence(const LabelHistogram& hist) {
  ConfidenceCovariance conf;
  const std::int64_t rot_total = hist.rot_total();
  const std::int64_t trans_total = hist.trans_total();
  for (int k = 0; k < 3; ++k) {
    if (rot_total > 0)
      conf.rot[k] = std::min(1.0, 3.0 * static_cast<double>(hist.counts[k]) /
                                      static_cast<double>(rot_total));
    if (trans_total > 0)
      conf.trans[k] = std::min(1.0, 3.0 * static_cast<double>(hist.counts[3 + k]) /
                                        static_cast<double>(trans_total));
  }
  return conf;
}

std::vector<LabelPair> point_labels(const PointCloud& source,
                                    const std::vector<Correspondence>& corrs,
                                    const PoseSE3& t_init, ExecMode mode) {
  std::vector<LabelPair> labels(source.size());
  parallel_for(corrs.size(), mode, [&](std::size_t i) {
    const Correspondence& c = corrs[i];
    if (c.source_index < 0 || c.source_index >= static_cast<int>(source.size())) return;
    labels[c.source_index] = assign_labels(point_observability(c, t_init));
  });
  return labels;
}

PointCloud observability_scan(const PointCloud& cloud, const std::vector<LabelPair>& labels) {
  if (labels.size() != cloud.size())
    throw LengthMismatch("label count " + std::to_string(labels.size()) +
                         " does not match cloud size " + std::to_string(cloud.size()));
  PointCloud out = cloud;
  out.colors.assign(cloud.size(), {128, 128, 128});
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!labels[i].trans) continue;
    switch (*labels[i].trans) {
      case DofLabel::X: out.colors[i] = {255, 0, 0}; break;
      case DofLabel::Y: out.colors[i] = {0, 255, 0}; break;
      case DofLabel::Z: out.colors[i] = {0, 0, 255}; break;
      default: break;
    }
  }
  return out;
}

DegeneracyReport degeneracy_report(const Matrix6d& alignment, const ConfidenceCovariance& conf,
                                   double threshold) {
  DegeneracyReport report;
  report.threshold = threshold;
  Eigen::SelfAdjointEigenSolver<Matrix6d> es(alignment);
  report.eigenvalues = es.eigenvalues();
  report.eigenvectors = es.eigenvectors();
  report.confidence = conf.vector();
  for (int k = 0; k < 6; ++k) {
    if (report.confidence[k] < threshold) report.low_axes.push_back(static_cast<DofLabel>(k));
  }
  return report;
}

}  // namespace obsloc
