#include "obsloc/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "obsloc/rng.hpp"

namespace obsloc {

namespace {

struct Patch {
  double area;
  // Draws one surface point and its inward unit normal.
  std::function<void(std::mt19937_64&, Eigen::Vector3d&, Eigen::Vector3d&)> sample;
};

Patch rect_patch(const Eigen::Vector3d& origin, const Eigen::Vector3d& u_dir, double u_len,
                 const Eigen::Vector3d& v_dir, double v_len, const Eigen::Vector3d& normal) {
  Patch patch;
  patch.area = u_len * v_len;
  patch.sample = [=](std::mt19937_64& rng, Eigen::Vector3d& p, Eigen::Vector3d& n) {
    const double a = uniform(rng, 0.0, u_len);
    const double b = uniform(rng, 0.0, v_len);
    p = origin + a * u_dir + b * v_dir;
    n = normal;
  };
  return patch;
}

std::vector<Patch> scene_patches(const SceneSpec& s) {
  const Eigen::Vector3d ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
  std::vector<Patch> patches;
  switch (s.kind) {
    case SceneKind::Plane:
      patches.push_back(rect_patch({0, -s.width / 2, 0}, ex, s.length, ey, s.width, ez));
      break;
    case SceneKind::Room:
      patches.push_back(rect_patch({0, -s.width / 2, 0}, ey, s.width, ez, s.height, ex));
      patches.push_back(rect_patch({s.length, -s.width / 2, 0}, ey, s.width, ez, s.height, -ex));
      [[fallthrough]];
    case SceneKind::Corridor:
      patches.push_back(rect_patch({0, s.width / 2, 0}, ex, s.length, ez, s.height, -ey));
      patches.push_back(rect_patch({0, -s.width / 2, 0}, ex, s.length, ez, s.height, ey));
      patches.push_back(rect_patch({0, -s.width / 2, 0}, ex, s.length, ey, s.width, ez));
      patches.push_back(rect_patch({0, -s.width / 2, s.height}, ex, s.length, ey, s.width, -ez));
      break;
    case SceneKind::Tunnel: {
      Patch wall;
      wall.area = 2.0 * M_PI * s.radius * s.length;
      const double radius = s.radius, length = s.length;
      wall.sample = [radius, length](std::mt19937_64& rng, Eigen::Vector3d& p,
                                     Eigen::Vector3d& n) {
        const double x = uniform(rng, 0.0, length);
        const double phi = uniform(rng, 0.0, 2.0 * M_PI);
        const Eigen::Vector3d radial(0.0, std::cos(phi), std::sin(phi));
        p = Eigen::Vector3d(x, 0, 0) + radius * radial;
        n = -radial;
      };
      patches.push_back(wall);
      break;
    }
    case SceneKind::Staircase: {
      if (s.steps < 1) throw std::invalid_argument("staircase needs at least one step");
      for (int k = 0; k < s.steps; ++k) {
        const double x = k * s.step_depth;
        const double z = k * s.step_height;
        patches.push_back(rect_patch({x, -s.width / 2, z}, ey, s.width, ez, s.step_height, -ex));
        patches.push_back(rect_patch({x, -s.width / 2, z + s.step_height}, ex, s.step_depth, ey,
                                     s.width, ez));
      }
      break;
    }
  }
  return patches;
}

}  // namespace

PointCloud generate_map(const SceneSpec& spec, std::uint64_t seed) {
  if (!(spec.density > 0.0)) throw std::invalid_argument("scene density must be positive");
  if (spec.noise_sigma < 0.0) throw std::invalid_argument("scene noise_sigma must be >= 0");

  PointCloud map;
  map.frame_id = "map";
  std::mt19937_64 rng(mix_seed(seed, 0x5ce9e));
  GaussianSampler gauss;

  const auto patches = scene_patches(spec);
  std::size_t total = 0;
  for (const Patch& patch : patches)
    total += static_cast<std::size_t>(std::llround(patch.area * spec.density));
  map.points.reserve(total);
  map.normals.reserve(total);
  map.planarity.reserve(total);

  for (const Patch& patch : patches) {
    const auto count = std::llround(patch.area * spec.density);
    for (long long i = 0; i < count; ++i) {
      Eigen::Vector3d p, n;
      patch.sample(rng, p, n);
      if (spec.noise_sigma > 0.0) p += spec.noise_sigma * gauss(rng) * n;
      map.points.push_back(p);
      map.normals.push_back(n);
      map.planarity.push_back(1.0);
    }
  }
  return map;
}

PointCloud simulate_scan(const PointCloud& map, const PoseSE3& sensor_pose,
                         const SensorModel& sensor, std::uint64_t seed) {
  PointCloud scan;
  scan.frame_id = "sensor";
  const PoseSE3 world_to_sensor = inverse(sensor_pose);
  const Eigen::Matrix3d r = world_to_sensor.rotation_matrix();
  const Eigen::Vector3d t = world_to_sensor.translation();

  const double half_h = 0.5 * sensor.horizontal_fov_deg * M_PI / 180.0;
  const double half_v = 0.5 * sensor.vertical_fov_deg * M_PI / 180.0;

  std::vector<Eigen::Vector3d> visible;
  visible.reserve(map.size());
  for (const Eigen::Vector3d& pw : map.points) {
    const Eigen::Vector3d p = r * pw + t;
    const double range = p.norm();
    if (range <= 0.0 || range > sensor.max_range) continue;
    if (std::abs(std::atan2(p.y(), p.x())) > half_h) continue;
    if (std::abs(std::asin(std::clamp(p.z() / range, -1.0, 1.0))) > half_v) continue;
    visible.push_back(p);
  }

  std::mt19937_64 rng(mix_seed(seed, 0x5ca9));
  if (sensor.rays > 0 && visible.size() > static_cast<std::size_t>(sensor.rays)) {
    // Partial Fisher-Yates draw of `rays` slots, then restore map order.
    std::vector<std::size_t> order(visible.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t take = static_cast<std::size_t>(sensor.rays);
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(order.size() - i));
      std::swap(order[i], order[std::min(j, order.size() - 1)]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + take);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Eigen::Vector3d> picked;
    picked.reserve(take);
    for (const std::size_t idx : chosen) picked.push_back(visible[idx]);
    visible.swap(picked);
  }

  GaussianSampler gauss;
  scan.points.reserve(visible.size());
  for (Eigen::Vector3d p : visible) {
    if (sensor.range_noise_sigma > 0.0) {
      const double range = p.norm();
      p += (sensor.range_noise_sigma * gauss(rng) / range) * p;
    }
    scan.points.push_back(p);
  }
  return scan;
}

Trajectory straight_trajectory(const PoseSE3& start, const Eigen::Vector3d& velocity,
                               double duration, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("trajectory rate must be positive");
  if (duration < 0.0) throw std::invalid_argument("trajectory duration must be >= 0");
  const long long count = std::llround(duration * rate);
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(count) + 1);
  for (long long i = 0; i <= count; ++i) {
    const double t = static_cast<double>(i) / rate;
    traj.push_back({t, PoseSE3(start.rotation(), start.translation() + velocity * t)});
  }
  return traj;
}

std::vector<TimedRelativePose> noisy_priors(const Trajectory& traj, double trans_sigma,
                                            double rot_sigma, std::uint64_t seed) {
  std::vector<TimedRelativePose> priors;
  if (traj.size() < 2) return priors;
  priors.reserve(traj.size() - 1);
  std::mt19937_64 rng(mix_seed(seed, 0x9410));
  GaussianSampler gauss;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const PoseSE3 rel = compose(inverse(traj[k - 1].pose), traj[k].pose);
    const Eigen::Vector3d dt(trans_sigma * gauss(rng), trans_sigma * gauss(rng),
                             trans_sigma * gauss(rng));
    const Eigen::Vector3d dr(rot_sigma * gauss(rng), rot_sigma * gauss(rng),
                             rot_sigma * gauss(rng));
    const PoseSE3 noise(exp_so3(dr), dt);
    priors.push_back({traj[k].timestamp, compose(rel, noise)});
  }
  return priors;
}

}  // namespace obsloc
