#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obsloc/registration.hpp"

namespace obsloc {

/// Degree-of-freedom order used by every 6-vector in this module:
/// rotations first, then translations.
enum class DofLabel { Roll = 0, Pitch = 1, Yaw = 2, X = 3, Y = 4, Z = 5 };

const char* dof_name(DofLabel label);

/// Per-point observability: planarity-squared scaled alignment of the
/// residual Jacobian with the world axes, [roll, pitch, yaw, x, y, z].
using ObservabilityVector = Vector6d;

/// Observability of one correspondence evaluated at the initial pose. The
/// rotational part measures |((T p) x n) . axis|, the translational part
/// |n . axis|, both scaled by planarity^2.
ObservabilityVector point_observability(const Correspondence& c, const PoseSE3& t_init);

/// Dominant rotational and translational axis of one observability vector.
/// A group that is entirely zero yields no label for that group. Ties go to
/// the lower index (roll before pitch before yaw, x before y before z).
struct LabelPair {
  std::optional<DofLabel> rot;
  std::optional<DofLabel> trans;
};
LabelPair assign_labels(const ObservabilityVector& obs);

/// Counts of dominant-axis labels over a correspondence set.
struct LabelHistogram {
  std::array<std::int64_t, 6> counts{};

  std::int64_t rot_total() const { return counts[0] + counts[1] + counts[2]; }
  std::int64_t trans_total() const { return counts[3] + counts[4] + counts[5]; }
};

LabelHistogram label_histogram(const std::vector<Correspondence>& corrs, const PoseSE3& t_init,
                               ExecMode mode = ExecMode::Parallel);

/// Per-axis scan confidence in [0, 1]: each label count is normalized by its
/// own group total (rotations by rotations, translations by translations),
/// scaled by 3 and clamped at 1. A perfectly balanced group gives 1 on all
/// three axes; an axis nobody votes for gets 0.
struct ConfidenceCovariance {
  Eigen::Vector3d rot = Eigen::Vector3d::Zero();    // roll, pitch, yaw
  Eigen::Vector3d trans = Eigen::Vector3d::Zero();  // x, y, z

  Vector6d vector() const {
    Vector6d v;
    v.head<3>() = rot;
    v.tail<3>() = trans;
    return v;
  }
};
ConfidenceCovariance scan_confidence(const LabelHistogram& hist);

/// Per-source-point labels for a matched scan; points without a
/// correspondence stay unlabeled.
std::vector<LabelPair> point_labels(const PointCloud& source,
                                    const std::vector<Correspondence>& corrs,
                                    const PoseSE3& t_init, ExecMode mode = ExecMode::Parallel);

/// Copy of the cloud colored by translational label: x red, y green, z blue,
/// unlabeled gray.
PointCloud observability_scan(const PointCloud& cloud, const std::vector<LabelPair>& labels);

/// Spectral summary of an alignment matrix together with the per-axis
/// confidence, listing the axes whose confidence falls below the threshold.
struct DegeneracyReport {
  Vector6d eigenvalues = Vector6d::Zero();  // ascending
  Matrix6d eigenvectors = Matrix6d::Zero();
  Vector6d confidence = Vector6d::Zero();
  std::vector<DofLabel> low_axes;
  double threshold = 0.5;
};
DegeneracyReport degeneracy_report(const Matrix6d& alignment, const ConfidenceCovariance& conf,
                                   double threshold = 0.5);

}  // namespace obsloc
