#include <doctest.h>

#include <cmath>

#include "obsloc/lie.hpp"
#include "test_helpers.hpp"

using namespace obsloc;
using test_util::random_pose;
using test_util::random_unit;
using test_util::random_vec;

TEST_CASE("exp_so3 of zero is the identity rotation") {
  const Eigen::Quaterniond q = exp_so3(Eigen::Vector3d::Zero());
  CHECK(q.w() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.vec().norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("exp_so3 of a quarter turn about z") {
  const Eigen::Quaterniond q = exp_so3(Eigen::Vector3d(0, 0, M_PI / 2));
  CHECK(q.w() == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-12));
  CHECK(q.z() == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-12));
  CHECK(std::abs(q.x()) < 1e-15);
  CHECK(std::abs(q.y()) < 1e-15);
  const Eigen::Vector3d r = q * Eigen::Vector3d(1, 0, 0);
  CHECK((r - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("log_so3 recovers known angles") {
  // 10 and 5 degrees, converted exactly.
  const double ten_deg = 10.0 * M_PI / 180.0;
  const double five_deg = 5.0 * M_PI / 180.0;
  CHECK(ten_deg == doctest::Approx(0.174532925199433).epsilon(1e-9));
  CHECK(five_deg == doctest::Approx(0.0872664625997165).epsilon(1e-9));

  const Eigen::Vector3d wx = log_so3(exp_so3(Eigen::Vector3d(ten_deg, 0, 0)));
  CHECK(wx.norm() == doctest::Approx(0.174532925199433).epsilon(1e-6));
  const Eigen::Vector3d wy = log_so3(exp_so3(Eigen::Vector3d(0, five_deg, 0)));
  CHECK(wy.norm() == doctest::Approx(0.0872664625997165).epsilon(1e-6));
}

TEST_CASE("log_so3 is the inverse of exp_so3 below pi") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const double angle = (M_PI - 1e-6) * uniform01(rng);
    const Eigen::Vector3d w = angle * random_unit(rng);
    const Eigen::Vector3d back = log_so3(exp_so3(w));
    CHECK((back - w).norm() < 1e-10 * std::max(1.0, w.norm()));
  }
}

TEST_CASE("log_so3 is stable for tiny angles") {
  const Eigen::Vector3d w(1e-13, -2e-13, 5e-14);
  const Eigen::Vector3d back = log_so3(exp_so3(w));
  CHECK((back - w).norm() < 1e-18);
}

TEST_CASE("log_so3 ignores quaternion sign") {
  const Eigen::Quaterniond q = exp_so3(Eigen::Vector3d(0.3, -0.2, 0.9));
  Eigen::Quaterniond neg;
  neg.coeffs() = -q.coeffs();
  CHECK((log_so3(q) - log_so3(neg)).norm() < 1e-14);
}

TEST_CASE("compose and inverse round trip") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const PoseSE3 p = random_pose(rng, 10.0, 3.0);
    const PoseSE3 round = compose(p, inverse(p));
    CHECK(round.translation().norm() < 1e-10);
    CHECK(log_so3(round.rotation()).norm() < 1e-10);
  }
}

TEST_CASE("apply rotates then translates") {
  const PoseSE3 p(exp_so3(Eigen::Vector3d(0, 0, M_PI / 2)), Eigen::Vector3d(1, 2, 3));
  const Eigen::Vector3d mapped = apply(p, Eigen::Vector3d(1, 0, 0));
  CHECK((mapped - Eigen::Vector3d(1, 3, 3)).norm() < 1e-12);
}

TEST_CASE("apply distributes over compose") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const PoseSE3 a = random_pose(rng, 5.0, 3.0);
    const PoseSE3 b = random_pose(rng, 5.0, 3.0);
    const Eigen::Vector3d x = random_vec(rng, 10.0);
    CHECK((apply(compose(a, b), x) - apply(a, apply(b, x))).norm() < 1e-9);
  }
}

TEST_CASE("retract with zero increment is a no-op") {
  std::mt19937_64 rng(14);
  const PoseSE3 p = random_pose(rng, 10.0, 3.0);
  const PoseSE3 q = retract(p, TangentVector{});
  CHECK(test_util::translation_distance(p, q) == 0.0);
  CHECK(test_util::rotation_angle_between(p, q) < 1e-15);
}

TEST_CASE("retract applies the increment in the world frame") {
  std::mt19937_64 rng(15);
  const PoseSE3 p = random_pose(rng, 10.0, 3.0);
  // A pure translation increment shifts the translation exactly.
  const Eigen::Vector3d shift(0.5, -1.0, 2.0);
  const PoseSE3 q = retract(p, TangentVector(Eigen::Vector3d::Zero(), shift));
  CHECK((q.translation() - (p.translation() + shift)).norm() < 1e-15);
  CHECK(test_util::rotation_angle_between(p, q) < 1e-15);
  // A pure rotation increment multiplies on the left and rotates the
  // translation with it.
  const Eigen::Vector3d omega(0.0, 0.0, M_PI / 2);
  const PoseSE3 r = retract(p, TangentVector(omega, Eigen::Vector3d::Zero()));
  const Eigen::Quaterniond expected_rot = exp_so3(omega) * p.rotation();
  CHECK(log_so3(r.rotation().conjugate() * expected_rot).norm() < 1e-12);
  CHECK((r.translation() - exp_so3(omega) * p.translation()).norm() < 1e-12);
}

TEST_CASE("local_coordinates inverts retract") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 500; ++trial) {
    const PoseSE3 a = random_pose(rng, 10.0, 3.0);
    const TangentVector delta(random_vec(rng, 2.0), random_vec(rng, 5.0));
    const TangentVector back = local_coordinates(a, retract(a, delta));
    CHECK((back.vector() - delta.vector()).norm() < 1e-9 * std::max(1.0, delta.norm()));
  }
}

TEST_CASE("retract applied to local_coordinates reaches the target") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const PoseSE3 a = random_pose(rng, 10.0, 3.0);
    const PoseSE3 b = random_pose(rng, 10.0, 3.0);
    const PoseSE3 c = retract(a, local_coordinates(a, b));
    CHECK(test_util::translation_distance(b, c) < 1e-9);
    CHECK(test_util::rotation_angle_between(b, c) < 1e-9);
  }
}

TEST_CASE("ominus of a pose with itself is zero") {
  std::mt19937_64 rng(18);
  const PoseSE3 p = random_pose(rng, 10.0, 3.0);
  const TangentVector err = ominus(p, p);
  CHECK(err.rot.norm() < 1e-15);
  CHECK(err.trans.norm() < 1e-15);
}

TEST_CASE("ominus expresses the error in the reference frame") {
  const PoseSE3 a(Eigen::Quaterniond::Identity(), Eigen::Vector3d(1, 0, 0));
  const PoseSE3 b = PoseSE3::identity();
  const TangentVector err = ominus(a, b);
  CHECK((err.trans - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK(err.rot.norm() < 1e-15);

  // Reference rotated by +90 deg about z: a forward offset in the world is a
  // sideways offset in the reference frame.
  const PoseSE3 ref(exp_so3(Eigen::Vector3d(0, 0, M_PI / 2)), Eigen::Vector3d::Zero());
  const TangentVector err2 = ominus(a, ref);
  CHECK((err2.trans - Eigen::Vector3d(0, -1, 0)).norm() < 1e-12);
  CHECK((err2.rot - Eigen::Vector3d(0, 0, -M_PI / 2)).norm() < 1e-12);
}

TEST_CASE("ominus rotation matches the relative rotation log") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const PoseSE3 a = random_pose(rng, 5.0, 3.0);
    const PoseSE3 b = random_pose(rng, 5.0, 3.0);
    const TangentVector err = ominus(a, b);
    const PoseSE3 rel = compose(inverse(b), a);
    CHECK((err.rot - log_so3(rel.rotation())).norm() < 1e-12);
    CHECK((err.trans - rel.translation()).norm() < 1e-12);
  }
}

TEST_CASE("tangent vector ordering is rotation first") {
  TangentVector delta(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(4, 5, 6));
  const Vector6d v = delta.vector();
  CHECK(v(0) == 1.0);
  CHECK(v(2) == 3.0);
  CHECK(v(3) == 4.0);
  CHECK(v(5) == 6.0);
  const TangentVector back(v);
  CHECK((back.rot - delta.rot).norm() == 0.0);
  CHECK((back.trans - delta.trans).norm() == 0.0);
}
