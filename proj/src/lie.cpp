#include "obsloc/lie.hpp"

#include <cmath>

namespace obsloc {

Eigen::Quaterniond exp_so3(const Eigen::Vector3d& omega) {
  const double theta2 = omega.squaredNorm();
  Eigen::Quaterniond q;
  if (theta2 < 1e-16) {
    // First-order expansion, renormalized. Error is O(theta^3).
    q = Eigen::Quaterniond(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
    q.normalize();
  } else {
    const double theta = std::sqrt(theta2);
    const double s = std::sin(0.5 * theta) / theta;
    q = Eigen::Quaterniond(std::cos(0.5 * theta), s * omega.x(), s * omega.y(), s * omega.z());
  }
  return q;
}

Eigen::Vector3d log_so3(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double sv = q.vec().norm();
  if (sv < 1e-12) {
    // Tiny angle: theta/sin(theta/2) ~ 2/w to high accuracy.
    return (2.0 / q.w()) * q.vec();
  }
  const double theta = 2.0 * std::atan2(sv, q.w());
  return (theta / sv) * q.vec();
}

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b) {
  return PoseSE3(a.rotation() * b.rotation(),
                 a.rotation() * b.translation() + a.translation());
}

PoseSE3 inverse(const PoseSE3& p) {
  const Eigen::Quaterniond qi = p.rotation().conjugate();
  return PoseSE3(qi, qi * (-p.translation()));
}

Eigen::Vector3d apply(const PoseSE3& p, const Eigen::Vector3d& x) {
  return p.rotation() * x + p.translation();
}

PoseSE3 retract(const PoseSE3& a, const TangentVector& delta) {
  const Eigen::Quaterniond dq = exp_so3(delta.rot);
  return PoseSE3(dq * a.rotation(), dq * a.translation() + delta.trans);
}

TangentVector local_coordinates(const PoseSE3& a, const PoseSE3& b) {
  const Eigen::Quaterniond dq = b.rotation() * a.rotation().conjugate();
  TangentVector delta;
  delta.rot = log_so3(dq);
  delta.trans = b.translation() - dq * a.translation();
  return delta;
}

TangentVector ominus(const PoseSE3& a, const PoseSE3& b) {
  const Eigen::Quaterniond qb_inv = b.rotation().conjugate();
  TangentVector err;
  err.rot = log_so3(qb_inv * a.rotation());
  err.trans = qb_inv * (a.translation() - b.translation());
  return err;
}

}  // namespace obsloc
