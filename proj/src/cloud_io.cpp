#include "obsloc/cloud_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "obsloc/errors.hpp"
#include "obsloc/text_io.hpp"

namespace obsloc {

namespace {

std::string next_content_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    return line;
  }
  return {};
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

double to_double(const std::string& tok, const std::string& path, int lineno) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedFile(path + ":" + std::to_string(lineno) + ": not a number: '" + tok + "'");
  }
  if (pos != tok.size())
    throw MalformedFile(path + ":" + std::to_string(lineno) + ": trailing junk in '" + tok + "'");
  return v;
}

}  // namespace

PointCloud load_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFile("cannot open " + path);
  int lineno = 0;

  std::string line = next_content_line(in, lineno);
  if (line != "ply") throw MalformedFile(path + ": missing ply magic line");

  long long vertex_count = -1;
  bool in_vertex_element = false;
  bool saw_format = false;
  std::vector<std::string> prop_names;  // vertex properties in file order

  while (true) {
    line = next_content_line(in, lineno);
    if (line.empty()) throw MalformedFile(path + ": header not terminated by end_header");
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii")
        throw UnsupportedFormat(path + ": only ascii PLY is supported");
      saw_format = true;
      continue;
    }
    if (tok[0] == "element") {
      if (tok.size() != 3) throw MalformedFile(path + ": malformed element line");
      if (tok[1] == "vertex") {
        in_vertex_element = true;
        try {
          vertex_count = std::stoll(tok[2]);
        } catch (const std::exception&) {
          throw MalformedFile(path + ": bad vertex count '" + tok[2] + "'");
        }
        if (vertex_count < 0) throw MalformedFile(path + ": negative vertex count");
      } else {
        if (tok[1] == "face" && tok[2] != "0")
          throw UnsupportedFormat(path + ": face elements are not supported");
        in_vertex_element = false;
      }
      continue;
    }
    if (tok[0] == "property") {
      if (tok.size() >= 2 && tok[1] == "list")
        throw UnsupportedFormat(path + ": list properties are not supported");
      if (in_vertex_element) {
        if (tok.size() != 3) throw MalformedFile(path + ": malformed property line");
        prop_names.push_back(tok[2]);
      }
      continue;
    }
    if (tok[0] == "end_header") break;
    throw MalformedFile(path + ":" + std::to_string(lineno) + ": unexpected header line '" + line +
                        "'");
  }
  if (!saw_format) throw MalformedFile(path + ": missing format line");
  if (vertex_count < 0) throw MalformedFile(path + ": missing vertex element");

  auto index_of = [&prop_names](const char* name) -> int {
    const auto it = std::find(prop_names.begin(), prop_names.end(), name);
    return it == prop_names.end() ? -1 : static_cast<int>(it - prop_names.begin());
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  if (ix < 0 || iy < 0 || iz < 0)
    throw MalformedFile(path + ": vertex element lacks x, y, z properties");
  const int inx = index_of("nx"), iny = index_of("ny"), inz = index_of("nz");
  const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;
  const int ipl = index_of("planarity");
  const int ir = index_of("red"), ig = index_of("green"), ib = index_of("blue");
  const bool with_colors = ir >= 0 && ig >= 0 && ib >= 0;

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(vertex_count));
  if (with_normals) cloud.normals.reserve(static_cast<std::size_t>(vertex_count));

  for (long long v = 0; v < vertex_count; ++v) {
    line = next_content_line(in, lineno);
    const auto tok = split_ws(line);
    if (tok.empty())
      throw MalformedFile(path + ": header declares " + std::to_string(vertex_count) +
                          " vertices but data ends after " + std::to_string(v));
    if (tok.size() != prop_names.size())
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(prop_names.size()) + " values, got " +
                          std::to_string(tok.size()));
    cloud.points.emplace_back(to_double(tok[ix], path, lineno), to_double(tok[iy], path, lineno),
                              to_double(tok[iz], path, lineno));
    if (with_normals)
      cloud.normals.emplace_back(to_double(tok[inx], path, lineno),
                                 to_double(tok[iny], path, lineno),
                                 to_double(tok[inz], path, lineno));
    if (ipl >= 0) cloud.planarity.push_back(to_double(tok[ipl], path, lineno));
    if (with_colors)
      cloud.colors.push_back({static_cast<std::uint8_t>(to_double(tok[ir], path, lineno)),
                              static_cast<std::uint8_t>(to_double(tok[ig], path, lineno)),
                              static_cast<std::uint8_t>(to_double(tok[ib], path, lineno))});
  }
  return cloud;
}

void save_ply(const std::string& path, const PointCloud& cloud) {
  cloud.validate();
  std::string out;
  out.reserve(64 * cloud.size() + 256);
  out += "ply\nformat ascii 1.0\n";
  out += "element vertex " + std::to_string(cloud.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_normals()) out += "property float nx\nproperty float ny\nproperty float nz\n";
  if (cloud.has_planarity()) out += "property float planarity\n";
  if (cloud.has_colors())
    out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    out += g9(p.x()) + " " + g9(p.y()) + " " + g9(p.z());
    if (cloud.has_normals()) {
      const auto& n = cloud.normals[i];
      out += " " + g9(n.x()) + " " + g9(n.y()) + " " + g9(n.z());
    }
    if (cloud.has_planarity()) out += " " + g9(cloud.planarity[i]);
    if (cloud.has_colors()) {
      const auto& c = cloud.colors[i];
      out += " " + std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]);
    }
    out += "\n";
  }
  atomic_write_text(path, out);
}

PointCloud load_pcd(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFile("cannot open " + path);
  int lineno = 0;

  std::vector<std::string> fields;
  long long points_declared = -1;
  bool data_seen = false;

  std::string line;
  while (!data_seen) {
    line = next_content_line(in, lineno);
    if (line.empty()) throw MalformedFile(path + ": truncated PCD header");
    if (line[0] == '#') continue;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "FIELDS") {
      fields.assign(tok.begin() + 1, tok.end());
    } else if (key == "POINTS") {
      if (tok.size() != 2) throw MalformedFile(path + ": malformed POINTS line");
      points_declared = std::stoll(tok[1]);
    } else if (key == "DATA") {
      if (tok.size() != 2 || tok[1] != "ascii")
        throw UnsupportedFormat(path + ": only DATA ascii is supported");
      data_seen = true;
    }
    // VERSION, SIZE, TYPE, COUNT, WIDTH, HEIGHT, VIEWPOINT carry no
    // information we need for ascii parsing.
  }
  if (fields.empty()) throw MalformedFile(path + ": missing FIELDS line");
  if (points_declared < 0) throw MalformedFile(path + ": missing POINTS line");

  auto index_of = [&fields](const char* name) -> int {
    const auto it = std::find(fields.begin(), fields.end(), name);
    return it == fields.end() ? -1 : static_cast<int>(it - fields.begin());
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  if (ix < 0 || iy < 0 || iz < 0) throw MalformedFile(path + ": FIELDS lacks x y z");
  const int inx = index_of("normal_x"), iny = index_of("normal_y"), inz = index_of("normal_z");
  const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(points_declared));
  for (long long v = 0; v < points_declared; ++v) {
    line = next_content_line(in, lineno);
    const auto tok = split_ws(line);
    if (tok.empty())
      throw MalformedFile(path + ": POINTS declares " + std::to_string(points_declared) +
                          " but data ends after " + std::to_string(v));
    if (tok.size() != fields.size())
      throw MalformedFile(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(fields.size()) + " values, got " +
                          std::to_string(tok.size()));
    cloud.points.emplace_back(to_double(tok[ix], path, lineno), to_double(tok[iy], path, lineno),
                              to_double(tok[iz], path, lineno));
    if (with_normals)
      cloud.normals.emplace_back(to_double(tok[inx], path, lineno),
                                 to_double(tok[iny], path, lineno),
                                 to_double(tok[inz], path, lineno));
  }
  return cloud;
}

PointCloud load_cloud(const std::string& path) {
  std::string ext;
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos) ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "ply") return load_ply(path);
  if (ext == "pcd") return load_pcd(path);
  throw UnsupportedFormat(path + ": unknown point cloud extension '" + ext + "'");
}

}  // namespace obsloc
