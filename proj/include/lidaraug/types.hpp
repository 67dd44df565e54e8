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

#ifndef LIDARAUG_TYPES_HPP
#define LIDARAUG_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lidaraug/vec.hpp"

namespace lidaraug {

// Sensor-frame lidar return: x forward, y left, z up, in meters.
// Intensity is unitless reflectance in [0, 1]. Coordinates are kept in
// double precision in memory; on-disk formats quantize to float32.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  float intensity = 0.0f;

  Vec3 position() const { return {x, y, z}; }
  Vec2 xy() const { return {x, y}; }
  double range() const { return std::sqrt(x * x + y * y + z * z); }
};

// Ordered point collection with optional per-point semantic class and
// instance channels. When a channel is present it has exactly one entry
// per point.
struct LidarScan {
  std::vector<Point> points;
  std::optional<std::vector<std::uint16_t>> labels;
  std::optional<std::vector<std::uint16_t>> instances;
  std::string frame_id;

  std::size_t size() const { return points.size(); }
  bool channels_consistent() const {
    return (!labels || labels->size() == points.size()) &&
           (!instances || instances->size() == points.size());
  }
};

// 3D box with heading. Yaw is normalized into [-pi, pi) at construction;
// dimensions are l (along heading), w, h. Zero dimensions mark a degenerate
// box that downstream extraction refuses to use.
struct OrientedBox {
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double l = 0.0, w = 0.0, h = 0.0;
  double yaw = 0.0;

  OrientedBox() = default;
  OrientedBox(double cx_, double cy_, double cz_, double l_, double w_,
              double h_, double yaw_)
      : cx(cx_), cy(cy_), cz(cz_), l(l_), w(w_), h(h_),
        yaw(normalize_angle(yaw_)) {}

  Vec2 center_bev() const { return {cx, cy}; }
  double bottom_z() const { return cz - h / 2.0; }
  double top_z() const { return cz + h / 2.0; }
  bool degenerate() const { return l <= 0.0 || w <= 0.0 || h <= 0.0; }
};

enum class SurfaceKind { Road, PedestrianArea };

// Insertable object class: which surface it may stand on and how many of
// its points must survive occlusion for an insertion to count.
struct SemanticClass {
  int id = 0;
  std::string name;
  SurfaceKind surface_kind = SurfaceKind::Road;
  int min_insert_points = 0;
};

// Rigid transform from sensor frame to a global frame. The rotation block
// must be orthonormal (checked by is_valid, tolerance 1e-6).
struct Pose {
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  Pose inverse() const {
    const Mat3 rt = rotation.transposed();
    return {rt, (rt * translation) * -1.0};
  }

  Pose compose(const Pose& inner) const {
    // (*this) o inner: applies inner first.
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  bool is_valid(double tol = 1e-6) const {
    const Mat3 should_be_identity = rotation * rotation.transposed();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expect = (i == j) ? 1.0 : 0.0;
        if (std::abs(should_be_identity(i, j) - expect) > tol) return false;
      }
    return true;
  }

  static Pose identity() { return {}; }
};

}  // namespace lidaraug

#endif  // LIDARAUG_TYPES_HPP
