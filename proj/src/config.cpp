#include "obsloc/config.hpp"

#include "obsloc/errors.hpp"

namespace obsloc {

SceneKind scene_kind_from_string(const std::string& name) {
  if (name == "plane") return SceneKind::Plane;
  if (name == "corridor") return SceneKind::Corridor;
  if (name == "room") return SceneKind::Room;
  if (name == "tunnel") return SceneKind::Tunnel;
  if (name == "staircase") return SceneKind::Staircase;
  throw ConfigError("unknown scene kind '" + name + "'");
}

RegistrationConfig load_registration_config(const TomlTable& toml,
                                            const RegistrationConfig& defaults) {
  RegistrationConfig cfg = defaults;
  cfg.max_iterations = static_cast<int>(toml.get_int("registration.max_iterations",
                                                     cfg.max_iterations));
  cfg.step_tol = toml.get_double("registration.step_tol", cfg.step_tol);
  cfg.max_dist = toml.get_double("registration.max_dist", cfg.max_dist);
  cfg.cond_limit = toml.get_double("registration.cond_limit", cfg.cond_limit);
  cfg.weight_by_planarity = toml.get_bool("registration.weight_by_planarity",
                                          cfg.weight_by_planarity);
  return cfg;
}

SynthConfig load_synth_config(const TomlTable& toml) {
  SynthConfig cfg;
  cfg.scene.kind = scene_kind_from_string(toml.get_string("scene.kind"));
  cfg.scene.length = toml.get_double("scene.length", cfg.scene.length);
  cfg.scene.width = toml.get_double("scene.width", cfg.scene.width);
  cfg.scene.height = toml.get_double("scene.height", cfg.scene.height);
  cfg.scene.radius = toml.get_double("scene.radius", cfg.scene.radius);
  cfg.scene.steps = static_cast<int>(toml.get_int("scene.steps", cfg.scene.steps));
  cfg.scene.step_depth = toml.get_double("scene.step_depth", cfg.scene.step_depth);
  cfg.scene.step_height = toml.get_double("scene.step_height", cfg.scene.step_height);
  cfg.scene.density = toml.get_double("scene.density");
  cfg.scene.noise_sigma = toml.get_double("scene.noise_sigma", cfg.scene.noise_sigma);

  cfg.sensor.max_range = toml.get_double("sensor.max_range", cfg.sensor.max_range);
  cfg.sensor.rays = static_cast<int>(toml.get_int("sensor.rays", cfg.sensor.rays));
  cfg.sensor.horizontal_fov_deg =
      toml.get_double("sensor.horizontal_fov_deg", cfg.sensor.horizontal_fov_deg);
  cfg.sensor.vertical_fov_deg =
      toml.get_double("sensor.vertical_fov_deg", cfg.sensor.vertical_fov_deg);
  cfg.sensor.range_noise_sigma =
      toml.get_double("sensor.range_noise_sigma", cfg.sensor.range_noise_sigma);

  if (toml.has("trajectory.start")) {
    const auto v = toml.get_double_array("trajectory.start", 3);
    cfg.traj_start = Eigen::Vector3d(v[0], v[1], v[2]);
  }
  if (toml.has("trajectory.orientation")) {
    const auto v = toml.get_double_array("trajectory.orientation", 4);  // qx qy qz qw
    cfg.traj_orientation = Eigen::Quaterniond(v[3], v[0], v[1], v[2]).normalized();
  }
  if (toml.has("trajectory.velocity")) {
    const auto v = toml.get_double_array("trajectory.velocity", 3);
    cfg.traj_velocity = Eigen::Vector3d(v[0], v[1], v[2]);
  }
  cfg.traj_duration = toml.get_double("trajectory.duration", cfg.traj_duration);
  cfg.traj_rate = toml.get_double("trajectory.rate", cfg.traj_rate);

  cfg.prior_trans_sigma = toml.get_double("priors.trans_sigma", cfg.prior_trans_sigma);
  cfg.prior_rot_sigma = toml.get_double("priors.rot_sigma", cfg.prior_rot_sigma);
  cfg.seed = static_cast<std::uint64_t>(toml.get_int("seed", 0));
  return cfg;
}

LocalizeFileConfig load_localize_config(const TomlTable& toml) {
  LocalizeFileConfig cfg;
  cfg.map_path = toml.get_string("localize.map");
  cfg.scan_list_path = toml.get_string("localize.scans");
  cfg.priors_path = toml.get_string("localize.priors", "");

  const auto init = toml.get_double_array("localize.init_pose", 7);  // tx ty tz qx qy qz qw
  const Eigen::Quaterniond q(init[6], init[3], init[4], init[5]);
  if (q.norm() < 1e-9) throw ConfigError("config field 'localize.init_pose' has a zero quaternion");
  cfg.loc.init_pose = PoseSE3(q, Eigen::Vector3d(init[0], init[1], init[2]));

  cfg.loc.use_priors = toml.get_bool("localize.use_priors", true);
  cfg.loc.degeneracy_threshold =
      toml.get_double("localize.degeneracy_threshold", cfg.loc.degeneracy_threshold);
  cfg.loc.normal_k = static_cast<int>(toml.get_int("localize.normal_k", cfg.loc.normal_k));
  cfg.loc.prior_max_dt = toml.get_double("localize.prior_max_dt", cfg.loc.prior_max_dt);
  cfg.loc.built_map_leaf = toml.get_double("localize.built_map_leaf", cfg.loc.built_map_leaf);
  cfg.export_every = static_cast<int>(toml.get_int("localize.export_every", 0));
  cfg.loc.reg = load_registration_config(toml, cfg.loc.reg);
  return cfg;
}

}  // namespace obsloc
