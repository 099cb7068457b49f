#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "obsloc/cloud_io.hpp"
#include "obsloc/config.hpp"
#include "obsloc/errors.hpp"
#include "obsloc/evaluation.hpp"
#include "obsloc/features.hpp"
#include "obsloc/fusion.hpp"
#include "obsloc/rng.hpp"
#include "obsloc/text_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace obsloc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTooManyFailures = 4;

// Pins JSON numbers to the same 9-significant-digit precision as the text
// outputs.
double j9(double v) { return std::stod(g9(v)); }

std::string resolve_against(const std::string& base_file, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_file).parent_path() / p).string();
}

PoseSE3 pose_from_seven(const std::vector<double>& v) {
  const Eigen::Quaterniond q(v[6], v[3], v[4], v[5]);
  if (q.norm() < 1e-9) throw ConfigError("pose quaternion must be non-zero");
  return PoseSE3(q, Eigen::Vector3d(v[0], v[1], v[2]));
}

std::string pose_to_line(const PoseSE3& pose) {
  const Eigen::Vector3d& t = pose.translation();
  const Eigen::Quaterniond& q = pose.rotation();
  return g9(t.x()) + " " + g9(t.y()) + " " + g9(t.z()) + " " + g9(q.x()) + " " + g9(q.y()) +
         " " + g9(q.z()) + " " + g9(q.w());
}

PointCloud prepare_target(PointCloud cloud, int normal_k, ExecMode exec) {
  if (!cloud.has_normals()) return estimate_normals(cloud, normal_k, Eigen::Vector3d::Zero(), exec);
  if (!cloud.has_planarity()) cloud.planarity.assign(cloud.size(), 1.0);
  return cloud;
}

struct SynthArgs {
  std::string config;
  std::string out;
  std::int64_t seed = -1;  // <0: take the config's seed
};

int cmd_synth(const SynthArgs& args) {
  const TomlTable toml = TomlTable::parse_file(args.config);
  SynthConfig cfg = load_synth_config(toml);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);

  const PointCloud map = generate_map(cfg.scene, cfg.seed);
  const Trajectory traj = straight_trajectory(PoseSE3(cfg.traj_orientation, cfg.traj_start),
                                              cfg.traj_velocity, cfg.traj_duration, cfg.traj_rate);
  const auto priors = noisy_priors(traj, cfg.prior_trans_sigma, cfg.prior_rot_sigma, cfg.seed);

  const fs::path out(args.out);
  fs::create_directories(out / "scans");
  save_ply((out / "map.ply").string(), map);
  save_trajectory((out / "gt_traj.txt").string(), traj);
  save_priors((out / "priors.csv").string(), priors);

  std::vector<std::pair<double, std::string>> manifest;
  manifest.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const PointCloud scan =
        simulate_scan(map, traj[k].pose, cfg.sensor, mix_seed(cfg.seed, k + 1));
    char name[32];
    std::snprintf(name, sizeof(name), "scans/%06zu.ply", k);
    save_ply((out / name).string(), scan);
    manifest.emplace_back(traj[k].timestamp, name);
  }
  save_scan_manifest((out / "scans.csv").string(), manifest);

  std::cout << "map " << map.size() << " points, " << traj.size() << " scans, seed " << cfg.seed
            << "\n";
  return kExitOk;
}

struct RegisterArgs {
  std::string source;
  std::string target;
  std::vector<double> init;  // empty or 7 values
  RegistrationConfig reg;
  int normal_k = 10;
  std::string report_dir;
};

int cmd_register(const RegisterArgs& args) {
  const PointCloud source = load_cloud(args.source);
  const PointCloud target = prepare_target(load_cloud(args.target), args.normal_k, args.reg.exec);
  const PoseSE3 init = args.init.empty() ? PoseSE3::identity() : pose_from_seven(args.init);

  const KdTree tree(target);
  const RegistrationResult result = solve_registration(source, target, tree, init, args.reg);

  const auto init_corrs =
      find_correspondences(source, target, tree, init, args.reg.max_dist, args.reg.exec);
  const ConfidenceCovariance conf =
      scan_confidence(label_histogram(init_corrs, init, args.reg.exec));
  const DegeneracyReport degeneracy = degeneracy_report(result.alignment, conf);

  std::cout << "pose " << pose_to_line(result.pose) << "\n"
            << "final_error " << g9(result.final_error) << "\n"
            << "iterations " << result.iterations << "\n"
            << "converged " << (result.converged ? 1 : 0) << "\n"
            << "correspondences " << result.correspondence_count << "\n"
            << "min_eig_alignment " << g9(degeneracy.eigenvalues(0)) << "\n"
            << "damped " << (result.degenerate ? 1 : 0) << "\n";

  if (!args.report_dir.empty()) {
    const fs::path dir(args.report_dir);
    fs::create_directories(dir);

    json report;
    const Eigen::Vector3d& t = result.pose.translation();
    const Eigen::Quaterniond& q = result.pose.rotation();
    report["pose"] = {j9(t.x()), j9(t.y()), j9(t.z()), j9(q.x()), j9(q.y()), j9(q.z()), j9(q.w())};
    report["final_error"] = j9(result.final_error);
    report["iterations"] = result.iterations;
    report["converged"] = result.converged;
    report["damped"] = result.degenerate;
    report["correspondence_count"] = result.correspondence_count;
    report["min_eig_alignment"] = j9(degeneracy.eigenvalues(0));
    report["confidence"] = {{"x", j9(conf.trans.x())},   {"y", j9(conf.trans.y())},
                            {"z", j9(conf.trans.z())},   {"roll", j9(conf.rot.x())},
                            {"pitch", j9(conf.rot.y())}, {"yaw", j9(conf.rot.z())}};
    json evs = json::array();
    for (int k = 0; k < 6; ++k) evs.push_back(j9(degeneracy.eigenvalues(k)));
    report["alignment_eigenvalues"] = evs;
    json low = json::array();
    for (const DofLabel axis : degeneracy.low_axes) low.push_back(dof_name(axis));
    report["low_confidence_axes"] = low;
    json history = json::array();
    for (const double e : result.error_history) history.push_back(j9(e));
    report["error_history"] = history;
    atomic_write_text((dir / "report.json").string(), report.dump(2) + "\n");

    const auto labels = point_labels(source, init_corrs, init, args.reg.exec);
    save_ply((dir / "observability.ply").string(),
             observability_scan(transform_cloud(source, result.pose), labels));

    ScanRecord record;
    record.timestamp = 0.0;
    record.confidence = conf;
    save_confidence_csv((dir / "confidence.csv").string(), {record});
  }
  return kExitOk;
}

struct LocalizeArgs {
  std::string config;
  std::string out;
  bool no_prior = false;
  bool serial = false;
  int export_every = -1;  // <0: take the config's value
};

int cmd_localize(const LocalizeArgs& args) {
  const TomlTable toml = TomlTable::parse_file(args.config);
  LocalizeFileConfig cfg = load_localize_config(toml);
  if (args.no_prior) cfg.loc.use_priors = false;
  if (args.export_every >= 0) cfg.export_every = args.export_every;
  cfg.loc.label_every = cfg.export_every;
  if (args.serial) cfg.loc.reg.exec = ExecMode::Serial;

  const PointCloud map = load_cloud(resolve_against(args.config, cfg.map_path));

  const std::string manifest_path = resolve_against(args.config, cfg.scan_list_path);
  const auto manifest = load_scan_manifest(manifest_path);
  std::vector<std::pair<double, PointCloud>> scans;
  scans.reserve(manifest.size());
  for (const auto& [timestamp, file] : manifest) {
    const std::string scan_path = resolve_against(manifest_path, file);
    try {
      scans.emplace_back(timestamp, load_cloud(scan_path));
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping unreadable scan " << scan_path << " (" << e.what()
                << ")\n";
      scans.emplace_back(timestamp, PointCloud{});
    }
  }

  std::vector<TimedRelativePose> priors;
  if (cfg.loc.use_priors) {
    if (cfg.priors_path.empty())
      throw ConfigError("config field 'localize.priors' is required unless priors are disabled");
    priors = load_priors(resolve_against(args.config, cfg.priors_path));
  }

  const LocalizationResult result = run_localization(map, scans, priors, cfg.loc);

  const fs::path out(args.out);
  fs::create_directories(out);
  save_trajectory((out / "est_traj.txt").string(), result.trajectory);
  save_report_csv((out / "report.csv").string(), result.records);
  save_confidence_csv((out / "confidence.csv").string(), result.records);
  if (!result.built_map.empty()) save_ply((out / "built_map.ply").string(), result.built_map);

  std::size_t failed = 0;
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const ScanRecord& record = result.records[k];
    if (record.failed) ++failed;
    if (!record.labels.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "obs_%06zu.ply", k);
      save_ply((out / name).string(),
               observability_scan(transform_cloud(scans[k].second, record.pose), record.labels));
    }
    if (record.failed)
      std::cerr << "warning: scan " << k << " at t=" << g9(record.timestamp)
                << " not registered: " << record.note << "\n";
  }

  std::cout << result.records.size() << " scans, " << failed << " failed, outputs in "
            << out.string() << "\n";
  if (result.records.empty()) return kExitOk;
  if (2 * failed > result.records.size()) return kExitTooManyFailures;
  return kExitOk;
}

struct EvalArgs {
  std::string est;
  std::string gt;
  std::string built;
  std::string gt_map;
  double threshold = 0.10;
  double max_dt = 0.05;
  bool no_align = false;
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  const Trajectory est = load_trajectory(args.est);
  const Trajectory gt = load_trajectory(args.gt);
  const auto pairs = associate(est, gt, args.max_dt);
  const AteResult ate_result = ate(pairs, !args.no_align);

  const PointCloud built = load_cloud(args.built);
  const PointCloud gt_map = load_cloud(args.gt_map);
  const KdTree gt_index(gt_map);
  const MapQualityResult quality = map_outlier_rate(built, gt_index, args.threshold);

  json metrics;
  metrics["ate_rmse"] = j9(ate_result.rmse);
  metrics["outlier_fraction"] = j9(quality.outlier_fraction);
  metrics["threshold"] = j9(quality.threshold);
  metrics["n_points"] = quality.total;
  metrics["n_poses"] = ate_result.pairs;

  const std::string text = metrics.dump(2) + "\n";
  std::cout << text;
  if (!args.out.empty()) atomic_write_text(args.out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degeneracy-aware lidar scan registration and localization"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene dataset");
  synth_cmd->add_option("--config", synth.config, "Scene config (TOML)")
      ->required()
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Overrides the config seed");

  RegisterArgs reg;
  bool reg_serial = false;
  CLI::App* reg_cmd = app.add_subcommand("register", "Register a source cloud onto a target");
  reg_cmd->add_option("source", reg.source, "Source cloud (.ply/.pcd)")
      ->required()
      ->check(CLI::ExistingFile);
  reg_cmd->add_option("target", reg.target, "Target cloud (.ply/.pcd)")
      ->required()
      ->check(CLI::ExistingFile);
  reg_cmd->add_option("--init", reg.init, "Initial pose: tx ty tz qx qy qz qw")->expected(7);
  reg_cmd->add_option("--max-iterations", reg.reg.max_iterations, "Gauss-Newton iteration cap");
  reg_cmd->add_option("--step-tol", reg.reg.step_tol, "Convergence step tolerance");
  reg_cmd->add_option("--max-dist", reg.reg.max_dist, "Correspondence rejection radius");
  reg_cmd->add_option("--cond-limit", reg.reg.cond_limit, "Condition number damping limit");
  reg_cmd->add_flag("--no-planarity-weighting",
                    [&reg](std::int64_t) { reg.reg.weight_by_planarity = false; },
                    "Weight all residuals equally");
  reg_cmd->add_option("--normal-k", reg.normal_k, "Neighbours for target normal estimation");
  reg_cmd->add_option("--report", reg.report_dir, "Write report.json and observability outputs");
  reg_cmd->add_flag("--serial", reg_serial, "Run single-threaded kernels");

  LocalizeArgs loc;
  CLI::App* loc_cmd = app.add_subcommand("localize", "Localize a scan sequence against a map");
  loc_cmd->add_option("--config", loc.config, "Localization config (TOML)")
      ->required()
      ->check(CLI::ExistingFile);
  loc_cmd->add_option("--out", loc.out, "Output directory")->required();
  loc_cmd->add_flag("--no-prior", loc.no_prior,
                    "Disable priors entirely (no fusion, identity motion prediction)");
  loc_cmd->add_option("--export-every", loc.export_every,
                      "Write an observability PLY for every Nth scan (0 disables)");
  loc_cmd->add_flag("--serial", loc.serial, "Run single-threaded kernels");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a trajectory and built map");
  eval_cmd->add_option("--est", eval.est, "Estimated trajectory")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth trajectory")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--built", eval.built, "Built map cloud")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--gt-map", eval.gt_map, "Ground-truth map cloud")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--threshold", eval.threshold, "Map outlier distance threshold");
  eval_cmd->add_option("--max-dt", eval.max_dt, "Trajectory association tolerance");
  eval_cmd->add_flag("--no-align", eval.no_align, "Skip rigid trajectory alignment");
  eval_cmd->add_option("--out", eval.out, "Write metrics JSON here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth);
    if (reg_cmd->parsed()) {
      if (reg_serial) reg.reg.exec = ExecMode::Serial;
      return cmd_register(reg);
    }
    if (loc_cmd->parsed()) return cmd_localize(loc);
    if (eval_cmd->parsed()) return cmd_eval(eval);
  } catch (const InsufficientCorrespondences& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NoConstraints& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const EmptyCloud& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
