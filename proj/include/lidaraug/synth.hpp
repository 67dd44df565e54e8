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

#ifndef LIDARAUG_SYNTH_HPP
#define LIDARAUG_SYNTH_HPP

#include <optional>
#include <string>
#include <vector>

#include "lidaraug/bev_map.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug::synth {

// Default semantic ids for generated surfaces (SemanticKITTI-compatible).
inline constexpr int kRoadLabel = 40;
inline constexpr int kSidewalkLabel = 48;
inline constexpr int kTerrainLabel = 72;
inline constexpr int kBuildingLabel = 50;

struct SensorModel {
  int beams = 64;
  int azimuth_steps = 2048;
  double fov_up = deg_to_rad(2.0);
  double fov_down = deg_to_rad(-24.8);
  double max_range = 80.0;
};

// Ground plane z = z0 + slope_x * x + slope_y * y.
struct GroundProfile {
  double z0 = -1.73;
  double slope_x = 0.0;
  double slope_y = 0.0;

  double height_at(double x, double y) const {
    return z0 + slope_x * x + slope_y * y;
  }
};

// Oriented ground strip (road or sidewalk).
struct Strip {
  double cx = 0.0, cy = 0.0;
  double length = 0.0, width = 0.0;
  double yaw = 0.0;
};

// Vertical rectangular wall above segment a-b.
struct Wall {
  Vec2 a, b;
  double base_z = 0.0;
  double height = 0.0;
};

// Boxy object standing on the ground.
struct ObjectTemplate {
  int class_id = 0;
  double l = 1.0, w = 1.0, h = 1.0;
  double cx = 0.0, cy = 0.0;
  double yaw = 0.0;
};

struct SceneSpec {
  std::string frame_id;
  std::uint64_t seed = 0;
  SensorModel sensor;
  GroundProfile ground;
  std::vector<Strip> roads;
  std::vector<Strip> sidewalks;
  std::vector<Wall> walls;
  std::vector<ObjectTemplate> objects;
};

struct GeneratedScene {
  LidarScan scan;                    // labeled + instanced
  std::vector<OrientedBox> boxes;    // ground-truth object boxes
  std::vector<int> box_class_ids;
};

/// Simulates one spinning-lidar sweep by casting a ray per (beam, azimuth)
/// against the spec geometry; the nearest hit within max_range wins and is
/// labeled by the surface it hit. Objects get instance ids 1..n in spec
/// order; everything else is instance 0.
GeneratedScene generate(const SceneSpec& spec);

/// Exact BEV masks for a given grid geometry: a cell is road/sidewalk iff
/// its center lies inside a corresponding strip.
void ground_truth_masks(const SceneSpec& spec, const bev::GridSpec& grid,
                        std::vector<std::uint8_t>& road,
                        std::vector<std::uint8_t>& sidewalk);

/// Spec files: a JSON document with a "scenes" array. Throws SchemaViolation
/// when malformed.
std::vector<SceneSpec> read_spec_json(const std::string& path);
void write_spec_json(const std::vector<SceneSpec>& specs,
                     const std::string& path);

}  // namespace lidaraug::synth

#endif  // LIDARAUG_SYNTH_HPP
