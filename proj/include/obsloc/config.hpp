#pragma once

#include <cstdint>
#include <string>

#include "obsloc/fusion.hpp"
#include "obsloc/scenes.hpp"
#include "obsloc/toml.hpp"

namespace obsloc {

/// Scene synthesis run: map, trajectory, scans, ground truth and priors.
struct SynthConfig {
  SceneSpec scene;
  SensorModel sensor;
  Eigen::Vector3d traj_start = Eigen::Vector3d::Zero();
  Eigen::Quaterniond traj_orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d traj_velocity = Eigen::Vector3d(1, 0, 0);
  double traj_duration = 10.0;
  double traj_rate = 10.0;
  double prior_trans_sigma = 0.01;
  double prior_rot_sigma = 0.0;
  std::uint64_t seed = 0;
};

SynthConfig load_synth_config(const TomlTable& toml);

/// Localization run: file inputs plus solver settings.
struct LocalizeFileConfig {
  std::string map_path;
  std::string scan_list_path;  // CSV manifest: timestamp,path
  std::string priors_path;     // may be empty when priors are off
  LocalizationConfig loc;
  int export_every = 0;  // observability PLY for every Nth scan, 0 disables
};

LocalizeFileConfig load_localize_config(const TomlTable& toml);

/// Fills registration settings from a [registration] section, on top of the
/// given defaults.
RegistrationConfig load_registration_config(const TomlTable& toml,
                                            const RegistrationConfig& defaults = {});

SceneKind scene_kind_from_string(const std::string& name);

}  // namespace obsloc
