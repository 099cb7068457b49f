#pragma once

#include <cstdint>

#include "obsloc/point_cloud.hpp"
#include "obsloc/trajectory.hpp"

namespace obsloc {

/// Synthetic environments. All are surface samplings with exact analytic
/// normals (oriented toward the interior / sensor side) and planarity 1.
///
///   Plane:     z = 0, x in [0, length], y in [-width/2, width/2].
///   Corridor:  two walls y = +-width/2, floor z = 0, ceiling z = height,
///              x in [0, length]. Open at both ends.
///   Room:      corridor plus end walls at x = 0 and x = length.
///   Tunnel:    cylinder y^2 + z^2 = radius^2 around the x axis,
///              x in [0, length].
///   Staircase: steps ascending along +x: riser k at x = k*step_depth
///              climbing step_height, tread k on top of it, width wide.
enum class SceneKind { Plane, Corridor, Room, Tunnel, Staircase };

struct SceneSpec {
  SceneKind kind = SceneKind::Corridor;
  double length = 50.0;
  double width = 2.0;
  double height = 3.0;
  double radius = 2.0;      // tunnel only
  int steps = 10;           // staircase only
  double step_depth = 0.3;  // staircase only
  double step_height = 0.2; // staircase only
  double density = 100.0;      // samples per square meter of surface
  double noise_sigma = 0.0;    // Gaussian displacement along the normal
};

/// Samples the scene surfaces uniformly at the requested density. Each patch
/// contributes round(area * density) points. Deterministic in (spec, seed).
PointCloud generate_map(const SceneSpec& spec, std::uint64_t seed);

struct SensorModel {
  double max_range = 30.0;
  int rays = 2000;  // cap on returned points per scan
  double horizontal_fov_deg = 360.0;
  double vertical_fov_deg = 180.0;
  double range_noise_sigma = 0.0;  // Gaussian noise along the ray
};

/// Visibility-culls the map from the sensor pose (range and field of view),
/// subsamples to at most sensor.rays points, and perturbs ranges. Returns the
/// scan in the sensor frame, without normals.
PointCloud simulate_scan(const PointCloud& map, const PoseSE3& sensor_pose,
                         const SensorModel& sensor, std::uint64_t seed);

/// Constant-velocity trajectory sampled at the given rate, inclusive of both
/// endpoints: round(duration * rate) + 1 poses.
Trajectory straight_trajectory(const PoseSE3& start, const Eigen::Vector3d& velocity,
                               double duration, double rate);

/// Relative ground-truth motions between consecutive trajectory poses,
/// corrupted by Gaussian noise: per-axis translation noise (meters) and an
/// axis-angle rotation perturbation (radians), both composed on the right.
std::vector<TimedRelativePose> noisy_priors(const Trajectory& traj, double trans_sigma,
                                            double rot_sigma, std::uint64_t seed);

}  // namespace obsloc
