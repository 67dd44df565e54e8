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

#ifndef LIDARAUG_KITTI_IO_HPP
#define LIDARAUG_KITTI_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lidaraug/augmentor.hpp"
#include "lidaraug/bev_map.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug::io {

// --- velodyne .bin: packed (x, y, z, intensity) float32 little-endian ---

/// Throws MalformedFile when the byte count is not a multiple of 16,
/// IoFailure on read errors.
LidarScan read_scan(const std::string& path);
void write_scan(const LidarScan& scan, const std::string& path);

// --- .label: one uint32 LE per point; low 16 bits semantic class, high 16
// bits instance id ---

struct LabelChannels {
  std::vector<std::uint16_t> labels;
  std::vector<std::uint16_t> instances;
};

/// expected_count < 0 skips the count check; otherwise CountMismatch when
/// the file does not pair with the scan.
LabelChannels read_labels(const std::string& path,
                          std::int64_t expected_count = -1);
void write_labels(const std::vector<std::uint16_t>& labels,
                  const std::vector<std::uint16_t>& instances,
                  const std::string& path);

// --- pose file: 12 whitespace-separated decimals per line, row-major 3x4 ---

/// Throws MalformedFile when a line is malformed or a rotation block is not
/// orthonormal within 1e-4.
std::vector<Pose> read_poses(const std::string& path);
void write_poses(const std::vector<Pose>& poses, const std::string& path);

// --- calibration + detection labels (camera-frame box convention) ---

struct Calib {
  Mat3 rect;        // R0_rect
  Pose velo_to_cam; // Tr_velo_to_cam
};

/// Parses "R0_rect:" and "Tr_velo_to_cam:" entries. Throws MissingCalib when
/// a key is absent or the transform is not invertible.
Calib read_calib(const std::string& path);
void write_calib(const Calib& calib, const std::string& path);

struct DetectionLabel {
  std::string type;
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  double bbox[4] = {0, 0, 0, 0};
  double h = 0.0, w = 0.0, l = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;  // camera frame, bottom-face center
  double rotation_y = 0.0;
};

/// Converts lidar-frame boxes to camera-frame label lines. location is the
/// bottom-face center of the box, rotation_y = -yaw - pi/2.
std::vector<DetectionLabel> boxes_lidar_to_camera(
    const std::vector<OrientedBox>& boxes, const std::vector<std::string>& types,
    const Calib& calib);

/// Inverse of boxes_lidar_to_camera.
std::vector<OrientedBox> boxes_camera_to_lidar(
    const std::vector<DetectionLabel>& labels, const Calib& calib);

std::vector<DetectionLabel> read_detection_labels(const std::string& path);
void write_detection_labels(const std::vector<DetectionLabel>& labels,
                            const std::string& path);

// --- native scene format (versioned JSON; full in-memory fidelity) ---

struct Scene {
  LidarScan scan;
  std::vector<OrientedBox> boxes;
  std::vector<int> box_class_ids;  // parallel to boxes
  double map_cell_size = 1.0;
};

/// Throws SchemaViolation on unknown schema versions or malformed content.
Scene read_scene_json(const std::string& path);
void write_scene_json(const Scene& scene, const std::string& path);

// --- object bank ---

std::vector<aug::InsertableObject> read_bank_json(
    const std::string& path, const std::vector<SemanticClass>& classes);
void write_bank_json(const std::vector<aug::InsertableObject>& bank,
                     const std::string& path);

// --- placement map ---

bev::BevGrid read_grid_json(const std::string& path);
void write_grid_json(const bev::BevGrid& grid, const std::string& path);

}  // namespace lidaraug::io

#endif  // LIDARAUG_KITTI_IO_HPP
