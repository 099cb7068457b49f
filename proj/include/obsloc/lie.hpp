#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace obsloc {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Tangent-space increment. Rotational part first, translational part second,
/// matching the [roll, pitch, yaw, x, y, z] ordering used everywhere else.
struct TangentVector {
  Eigen::Vector3d rot = Eigen::Vector3d::Zero();
  Eigen::Vector3d trans = Eigen::Vector3d::Zero();

  TangentVector() = default;
  TangentVector(const Eigen::Vector3d& r, const Eigen::Vector3d& t) : rot(r), trans(t) {}
  explicit TangentVector(const Vector6d& v) : rot(v.head<3>()), trans(v.tail<3>()) {}

  Vector6d vector() const {
    Vector6d v;
    v.head<3>() = rot;
    v.tail<3>() = trans;
    return v;
  }
  double norm() const { return vector().norm(); }
};

/// Rigid transform stored as unit quaternion plus translation.
class PoseSE3 {
 public:
  PoseSE3() : q_(Eigen::Quaterniond::Identity()), t_(Eigen::Vector3d::Zero()) {}
  PoseSE3(const Eigen::Quaterniond& q, const Eigen::Vector3d& t) : q_(q.normalized()), t_(t) {}

  static PoseSE3 identity() { return PoseSE3(); }

  const Eigen::Quaterniond& rotation() const { return q_; }
  const Eigen::Vector3d& translation() const { return t_; }
  Eigen::Matrix3d rotation_matrix() const { return q_.toRotationMatrix(); }

 private:
  Eigen::Quaterniond q_;
  Eigen::Vector3d t_;
};

/// Exponential map of so(3): axis-angle vector to unit quaternion.
Eigen::Quaterniond exp_so3(const Eigen::Vector3d& omega);

/// Logarithm map of SO(3): unit quaternion to axis-angle with angle in [0, pi].
Eigen::Vector3d log_so3(const Eigen::Quaterniond& q);

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b);
PoseSE3 inverse(const PoseSE3& p);
Eigen::Vector3d apply(const PoseSE3& p, const Eigen::Vector3d& x);

/// Applies a tangent increment to a pose. The increment acts on the left, in
/// the world frame: rot' = Exp(delta.rot) * rot, t' = Exp(delta.rot) * t + delta.trans.
/// This matches the world-frame Jacobians used by the registration solver.
PoseSE3 retract(const PoseSE3& a, const TangentVector& delta);

/// Inverse of retract: returns delta such that retract(a, delta) == b.
TangentVector local_coordinates(const PoseSE3& a, const PoseSE3& b);

/// Relative-pose error of a with respect to b, expressed in the frame of b:
/// rot = log(R_b^-1 R_a), trans = R_b^-1 (t_a - t_b). Zero iff a == b.
TangentVector ominus(const PoseSE3& a, const PoseSE3& b);

}  // namespace obsloc
