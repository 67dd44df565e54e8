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

#ifndef LIDARAUG_CORE_HPP
#define LIDARAUG_CORE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "lidaraug/geometry.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug {

/// Applies a rigid transform to every point; labels, instances and
/// intensities are carried over unchanged.
LidarScan transform_scan(const LidarScan& scan, const Pose& pose);

/// Ground-plane corners of the box footprint, counter-clockwise. The corner
/// centroid equals the box center.
std::array<Vec2, 4> box_corners_bev(const OrientedBox& box);

/// Indices of points inside the box volume. Points exactly on a face count
/// as inside.
std::vector<std::uint32_t> points_in_box(const LidarScan& scan,
                                         const OrientedBox& box);

bool point_in_box(const Point& p, const OrientedBox& box);

/// BEV footprint of a box as a canonical FitRect (for overlap tests).
geom::FitRect footprint(const OrientedBox& box);

}  // namespace lidaraug

#endif  // LIDARAUG_CORE_HPP
