#pragma once

#include <string>

#include "obsloc/point_cloud.hpp"

namespace obsloc {

/// ASCII PLY reader. Requires x, y, z vertex properties; picks up nx, ny, nz,
/// planarity and red/green/blue when present; ignores other scalar
/// properties. Binary formats and list properties raise UnsupportedFormat;
/// header/data inconsistencies raise MalformedFile. A zero-vertex file is a
/// valid empty cloud.
PointCloud load_ply(const std::string& path);

/// ASCII PLY writer: x y z, then normals, planarity and colors when the cloud
/// carries them. Floats use 9 significant digits; the write is atomic.
void save_ply(const std::string& path, const PointCloud& cloud);

/// ASCII PCD (v0.7) reader. FIELDS must include x y z; normal_x/normal_y/
/// normal_z are picked up when present. DATA must be ascii.
PointCloud load_pcd(const std::string& path);

/// Dispatches on the file extension (.ply or .pcd, case-insensitive).
PointCloud load_cloud(const std::string& path);

}  // namespace obsloc
