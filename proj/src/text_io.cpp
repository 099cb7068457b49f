#include "obsloc/text_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "obsloc/errors.hpp"

namespace obsloc {

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::vector<double> parse_numbers(const std::string& line, char sep, const std::string& path,
                                  int lineno) {
  std::vector<double> vals;
  std::string token;
  std::istringstream ss(line);
  while (std::getline(ss, token, sep)) {
    if (token.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": not a number: '" + token + "'");
    }
    if (token.find_first_not_of(" \t\r", pos) != std::string::npos)
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": trailing junk in '" + token + "'");
    vals.push_back(v);
  }
  return vals;
}

PoseSE3 pose_from_tq(const std::vector<double>& v, std::size_t off, const std::string& path,
                     int lineno) {
  const Eigen::Quaterniond q(v[off + 6], v[off + 3], v[off + 4], v[off + 5]);  // w, x, y, z
  if (q.norm() < 1e-9)
    throw MalformedFile(path + ":" + std::to_string(lineno) + ": zero quaternion");
  return PoseSE3(q, Eigen::Vector3d(v[off], v[off + 1], v[off + 2]));
}

}  // namespace

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFile("cannot open trajectory file " + path);
  Trajectory traj;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto vals = parse_numbers(line, ' ', path, lineno);
    if (vals.empty()) continue;
    if (vals.size() != 8)
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected 8 fields, got " +
                          std::to_string(vals.size()));
    traj.push_back({vals[0], pose_from_tq(vals, 1, path, lineno)});
  }
  return traj;
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  std::string out;
  for (const auto& [t, pose] : traj) {
    const Eigen::Quaterniond& q = pose.rotation();
    const Eigen::Vector3d& p = pose.translation();
    out += g9(t) + " " + g9(p.x()) + " " + g9(p.y()) + " " + g9(p.z()) + " " + g9(q.x()) + " " +
           g9(q.y()) + " " + g9(q.z()) + " " + g9(q.w()) + "\n";
  }
  atomic_write_text(path, out);
}

std::vector<TimedRelativePose> load_priors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFile("cannot open prior file " + path);
  std::vector<TimedRelativePose> priors;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      saw_header = true;
      if (line.rfind("timestamp", 0) == 0) continue;  // header row
    }
    const auto vals = parse_numbers(line, ',', path, lineno);
    if (vals.empty()) continue;
    if (vals.size() != 8)
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected 8 fields, got " +
                          std::to_string(vals.size()));
    priors.push_back({vals[0], pose_from_tq(vals, 1, path, lineno)});
  }
  return priors;
}

void save_priors(const std::string& path, const std::vector<TimedRelativePose>& priors) {
  std::string out = "timestamp,dx,dy,dz,qx,qy,qz,qw\n";
  for (const auto& [t, rel] : priors) {
    const Eigen::Quaterniond& q = rel.rotation();
    const Eigen::Vector3d& p = rel.translation();
    out += g9(t) + "," + g9(p.x()) + "," + g9(p.y()) + "," + g9(p.z()) + "," + g9(q.x()) + "," +
           g9(q.y()) + "," + g9(q.z()) + "," + g9(q.w()) + "\n";
  }
  atomic_write_text(path, out);
}

namespace {

std::string confidence_fields(const ScanRecord& r) {
  return g9(r.confidence.trans.x()) + "," + g9(r.confidence.trans.y()) + "," +
         g9(r.confidence.trans.z()) + "," + g9(r.confidence.rot.x()) + "," +
         g9(r.confidence.rot.y()) + "," + g9(r.confidence.rot.z());
}

}  // namespace

void save_confidence_csv(const std::string& path, const std::vector<ScanRecord>& records) {
  std::string out = "timestamp,conf_x,conf_y,conf_z,conf_roll,conf_pitch,conf_yaw\n";
  for (const ScanRecord& r : records) out += g9(r.timestamp) + "," + confidence_fields(r) + "\n";
  atomic_write_text(path, out);
}

void save_report_csv(const std::string& path, const std::vector<ScanRecord>& records) {
  std::string out =
      "timestamp,conf_x,conf_y,conf_z,conf_roll,conf_pitch,conf_yaw,min_eig_c,iterations,"
      "final_error,converged,n_correspondences,used_prior,failed\n";
  for (const ScanRecord& r : records) {
    out += g9(r.timestamp) + "," + confidence_fields(r) + "," + g9(r.min_eig_alignment) + "," +
           std::to_string(r.iterations) + "," + g9(r.final_error) + "," +
           (r.converged ? "1" : "0") + "," + std::to_string(r.correspondence_count) + "," +
           (r.used_prior ? "1" : "0") + "," + (r.failed ? "1" : "0") + "\n";
  }
  atomic_write_text(path, out);
}

std::vector<std::pair<double, std::string>> load_scan_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFile("cannot open scan manifest " + path);
  std::vector<std::pair<double, std::string>> entries;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      saw_header = true;
      if (line.rfind("timestamp", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected 'timestamp,path'");
    double t = 0.0;
    try {
      t = std::stod(line.substr(0, comma));
    } catch (const std::exception&) {
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": bad timestamp");
    }
    const std::string file = line.substr(comma + 1);
    if (file.empty())
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": empty scan path");
    entries.emplace_back(t, file);
  }
  return entries;
}

void save_scan_manifest(const std::string& path,
                        const std::vector<std::pair<double, std::string>>& entries) {
  std::string out = "timestamp,path\n";
  for (const auto& [t, file] : entries) out += g9(t) + "," + file + "\n";
  atomic_write_text(path, out);
}

}  // namespace obsloc
