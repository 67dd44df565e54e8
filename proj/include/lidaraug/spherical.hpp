/*
 * Copyright 2026 The lidaraug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIDARAUG_SPHERICAL_HPP
#define LIDARAUG_SPHERICAL_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lidaraug/bev_map.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug::aug {
struct InsertableObject;
}

namespace lidaraug::sph {

struct ProjectionParams {
  int rows = 64;
  int cols = 2048;
  double fov_up = deg_to_rad(2.0);
  double fov_down = deg_to_rad(-24.8);
  // Hole-closing seed: 5 rows x 3 columns.
  int closing_rows = 5;
  int closing_cols = 3;
};

// Spherical projection. Each pixel stores the minimum range over the points
// that project there plus their indices; pixels created by morphological
// closing carry an averaged depth, the filled flag, and no points.
struct RangeImage {
  int rows = 0;
  int cols = 0;
  double fov_up = 0.0;
  double fov_down = 0.0;
  std::vector<double> depth;                          // +inf when empty
  std::vector<std::vector<std::uint32_t>> point_indices;
  std::vector<std::uint8_t> filled;
  std::size_t dropped_points = 0;  // outside the vertical FOV (or zero range)

  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols + c;
  }
};

/// Projects a scan. Column from azimuth, row from elevation; rows outside
/// [fov_down, fov_up] are dropped and counted, boundary hits are clamped
/// into the image.
RangeImage project(const LidarScan& scan, const ProjectionParams& params);

/// Pixel (row, col) for one point; false when the point is out of FOV.
bool project_point(const Point& p, const ProjectionParams& params, int& row,
                   int& col);

/// Closes the occupancy of the image with a rows x cols rectangle. Newly
/// turned-on pixels get filled=true and depth = mean of the original finite
/// depths inside their seed neighborhood; existing pixels are untouched.
RangeImage close_range_image(const RangeImage& img, int seed_rows = 5,
                             int seed_cols = 3);

struct OcclusionResult {
  bool success = false;
  LidarScan augmented;
  std::size_t added_count = 0;
  std::size_t removed_count = 0;
  // Indices into the object's point set that were added, ascending.
  std::vector<std::uint32_t> added_object_indices;
  // Indices into the scene that would be removed, ascending. Applied to the
  // output only on success.
  std::vector<std::uint32_t> removed_scene_indices;
};

/// Resolves visibility between a scene and an already placed object
/// (Algorithm: project both, close both, then per pixel where the object is
/// strictly nearer remove the scene points behind it and add the object's
/// real points). success iff added_count > min_insert_points; on failure the
/// scene is returned unchanged. Added points are appended at the end of the
/// augmented scan, stamped with the object's class label and the given
/// instance id when the scene carries those channels.
OcclusionResult resolve_occlusion(const LidarScan& scene,
                                  const aug::InsertableObject& object,
                                  const ProjectionParams& params,
                                  std::uint16_t instance_id = 0);

/// Depth-order violation count at pixel granularity: pixels holding points
/// of two different instances, at least one of them in `inserted`, whose
/// ranges differ by more than margin. A clean insertion pipeline yields 0.
/// Requires the instance channel.
std::size_t count_depth_order_violations(
    const LidarScan& scan, const std::set<std::uint16_t>& inserted,
    const ProjectionParams& params, double margin = 0.01);

/// Debug raster: depth normalized to [1, 255], +inf black. Binary PGM.
void write_depth_pgm(const RangeImage& img, const std::string& path);

}  // namespace lidaraug::sph

#endif  // LIDARAUG_SPHERICAL_HPP
