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

#ifndef LIDARAUG_BOX_FITTING_HPP
#define LIDARAUG_BOX_FITTING_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lidaraug/types.hpp"

namespace lidaraug::boxfit {

// Per-class dimension bounds: min is the empirical lowest decile of each
// dimension, max the largest value observed.
struct ClassDimStats {
  int class_id = 0;
  double min_l = 0, min_w = 0, min_h = 0;
  double max_l = 0, max_w = 0, max_h = 0;
};

struct ClassDimSample {
  int class_id = 0;
  double l = 0, w = 0, h = 0;
};

/// Fits an oriented box to a point set: BEV convex hull -> minimum-area
/// rectangle for (cx, cy, l, w, yaw); h from the z extent. With a ground
/// elevation the box bottom is seated on it, otherwise cz is the z midpoint.
/// Throws EmptyInput for an empty set. Single points produce degenerate
/// (zero-dim) boxes that refine_box or the caller must repair or reject.
OrientedBox fit_box(std::span<const Point> points,
                    std::optional<double> ground_elevation = std::nullopt);

/// Lowest decile (linear interpolation between order statistics at fractional
/// index 0.1*(n-1)) and maximum, per class and per dimension. Throws
/// InsufficientData naming every class with fewer than 10 samples; when
/// required_classes is given those must all be present with >= 10 samples.
std::map<int, ClassDimStats> compute_class_stats(
    const std::vector<ClassDimSample>& samples,
    const std::vector<int>& required_classes = {});

/// Clamps each dimension into [min, max], keeping (cx, cy) and yaw and
/// preserving the bottom-face height. Without stats the box is returned
/// unchanged.
OrientedBox refine_box(const OrientedBox& box,
                       const std::optional<ClassDimStats>& stats);

/// Key-value text serialization:
///   class <id> min <l> <w> <h> max <l> <w> <h>
void write_stats(const std::map<int, ClassDimStats>& stats,
                 const std::string& path);
std::map<int, ClassDimStats> read_stats(const std::string& path);

}  // namespace lidaraug::boxfit

#endif  // LIDARAUG_BOX_FITTING_HPP
