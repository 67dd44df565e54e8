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

#ifndef LIDARAUG_GEOMETRY_HPP
#define LIDARAUG_GEOMETRY_HPP

#include <array>
#include <span>
#include <vector>

#include "lidaraug/vec.hpp"

namespace lidaraug::geom {

// Convex polygon, vertices counter-clockwise, no three consecutive
// collinear. Degenerate inputs yield 1 (all points equal) or 2 (collinear)
// vertices.
struct Hull2D {
  std::vector<Vec2> vertices;
};

// Oriented rectangle in canonical form: length >= width, yaw in
// [-pi/2, pi/2) along the longer side. Width 0 marks a degenerate fit
// (collinear input) that box refinement repairs downstream.
struct FitRect {
  Vec2 center;
  double length = 0.0;
  double width = 0.0;
  double yaw = 0.0;

  std::array<Vec2, 4> corners() const {
    const Vec2 d{std::cos(yaw), std::sin(yaw)};
    const Vec2 n = d.perp();
    const Vec2 a = d * (length / 2.0), b = n * (width / 2.0);
    return {center + a + b, center - a + b, center - a - b, center + a - b};
  }

  double area() const { return length * width; }
};

/// Minimal convex polygon containing all input points (monotone chain).
/// Throws EmptyInput for an empty span.
Hull2D convex_hull(std::span<const Vec2> points);

/// True if p lies inside the hull or on its boundary, within tol.
bool hull_contains(const Hull2D& hull, const Vec2& p, double tol = 1e-9);

/// Smallest-area enclosing rectangle with one side parallel to a hull edge
/// (rotating calipers). Degenerate hulls give zero-width rectangles.
FitRect min_area_rect(const Hull2D& hull);

/// Closed-rectangle intersection via the separating-axis test over the four
/// edge normals. Boundary contact counts as overlap.
bool rects_overlap(const FitRect& a, const FitRect& b);

/// Largest signed SAT gap between the two rectangles: positive means
/// separated by at least that margin along some tested axis, negative means
/// no tested axis separates them. Used for near-tangency diagnostics.
double sat_gap(const FitRect& a, const FitRect& b);

/// True if p is inside the closed rectangle.
bool rect_contains(const FitRect& r, const Vec2& p);

}  // namespace lidaraug::geom

#endif  // LIDARAUG_GEOMETRY_HPP
