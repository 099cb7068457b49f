#pragma once

#include <string>
#include <utility>

#include "obsloc/fusion.hpp"
#include "obsloc/trajectory.hpp"

namespace obsloc {

/// Formats a double with 9 significant digits (%.9g), the fixed precision of
/// every text file this library writes.
std::string g9(double v);

/// Writes content to path atomically (temp file in the same directory, then
/// rename), so readers never observe a partially written file.
void atomic_write_text(const std::string& path, const std::string& content);

/// Trajectory file: one `timestamp tx ty tz qx qy qz qw` line per pose,
/// space separated.
Trajectory load_trajectory(const std::string& path);
void save_trajectory(const std::string& path, const Trajectory& traj);

/// Relative-prior file: CSV with header `timestamp,dx,dy,dz,qx,qy,qz,qw`.
std::vector<TimedRelativePose> load_priors(const std::string& path);
void save_priors(const std::string& path, const std::vector<TimedRelativePose>& priors);

/// Per-scan confidence: CSV with header
/// `timestamp,conf_x,conf_y,conf_z,conf_roll,conf_pitch,conf_yaw`.
void save_confidence_csv(const std::string& path, const std::vector<ScanRecord>& records);

/// Per-scan localization report: confidence, smallest alignment eigenvalue,
/// iteration count, final error and status flags.
void save_report_csv(const std::string& path, const std::vector<ScanRecord>& records);

/// Scan manifest: CSV with header `timestamp,path`. Paths are stored as
/// written; relative ones are interpreted against the manifest's directory by
/// the caller.
std::vector<std::pair<double, std::string>> load_scan_manifest(const std::string& path);
void save_scan_manifest(const std::string& path,
                        const std::vector<std::pair<double, std::string>>& entries);

}  // namespace obsloc
