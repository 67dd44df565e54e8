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

#include "lidaraug/core.hpp"

namespace lidaraug {

LidarScan transform_scan(const LidarScan& scan, const Pose& pose) {
  LidarScan out = scan;
  for (Point& p : out.points) {
    const Vec3 q = pose.apply({p.x, p.y, p.z});
    p.x = q.x;
    p.y = q.y;
    p.z = q.z;
  }
  return out;
}

std::array<Vec2, 4> box_corners_bev(const OrientedBox& box) {
  const Vec2 c = box.center_bev();
  const Vec2 d = Vec2{std::cos(box.yaw), std::sin(box.yaw)} * (box.l / 2.0);
  const Vec2 n = Vec2{-std::sin(box.yaw), std::cos(box.yaw)} * (box.w / 2.0);
  return {c + d + n, c - d + n, c - d - n, c + d - n};
}

bool point_in_box(const Point& p, const OrientedBox& box) {
  if (std::abs(p.z - box.cz) > box.h / 2.0) return false;
  const double dx = p.x - box.cx;
  const double dy = p.y - box.cy;
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double local_x = c * dx + s * dy;
  const double local_y = -s * dx + c * dy;
  return std::abs(local_x) <= box.l / 2.0 && std::abs(local_y) <= box.w / 2.0;
}

std::vector<std::uint32_t> points_in_box(const LidarScan& scan,
                                         const OrientedBox& box) {
  std::vector<std::uint32_t> idx;
  for (std::uint32_t i = 0; i < scan.points.size(); ++i) {
    if (point_in_box(scan.points[i], box)) idx.push_back(i);
  }
  return idx;
}

geom::FitRect footprint(const OrientedBox& box) {
  geom::FitRect r;
  r.center = box.center_bev();
  if (box.l >= box.w) {
    r.length = box.l;
    r.width = box.w;
    r.yaw = normalize_half_angle(box.yaw);
  } else {
    r.length = box.w;
    r.width = box.l;
    r.yaw = normalize_half_angle(box.yaw + kPi / 2.0);
  }
  return r;
}

}  // namespace lidaraug
