#pragma once

#include <random>

#include "obsloc/lie.hpp"
#include "obsloc/point_cloud.hpp"
#include "obsloc/rng.hpp"

namespace test_util {

inline Eigen::Vector3d random_vec(std::mt19937_64& rng, double scale) {
  return {scale * (2.0 * obsloc::uniform01(rng) - 1.0),
          scale * (2.0 * obsloc::uniform01(rng) - 1.0),
          scale * (2.0 * obsloc::uniform01(rng) - 1.0)};
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  while (true) {
    const Eigen::Vector3d v = random_vec(rng, 1.0);
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

inline obsloc::PoseSE3 random_pose(std::mt19937_64& rng, double trans_scale, double max_angle) {
  const Eigen::Vector3d axis = random_unit(rng);
  const double angle = max_angle * (2.0 * obsloc::uniform01(rng) - 1.0);
  return obsloc::PoseSE3(obsloc::exp_so3(angle * axis), random_vec(rng, trans_scale));
}

inline double rotation_angle_between(const obsloc::PoseSE3& a, const obsloc::PoseSE3& b) {
  return obsloc::log_so3(a.rotation().conjugate() * b.rotation()).norm();
}

inline double translation_distance(const obsloc::PoseSE3& a, const obsloc::PoseSE3& b) {
  return (a.translation() - b.translation()).norm();
}

}  // namespace test_util
