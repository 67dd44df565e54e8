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

#include "lidaraug/geometry.hpp"

#include <algorithm>
#include <limits>

#include "lidaraug/errors.hpp"

namespace lidaraug::geom {

namespace {

double cross3(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a - o).cross(b - o);
}

}  // namespace

Hull2D convex_hull(std::span<const Vec2> points) {
  if (points.empty()) throw EmptyInput("convex_hull: no input points");

  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const std::size_t n = pts.size();
  if (n == 1) return Hull2D{{pts[0]}};

  // Monotone chain with strict turns: collinear and interior points are
  // dropped, so a fully collinear input reduces to its two endpoints.
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross3(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross3(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return Hull2D{std::move(hull)};
}

bool hull_contains(const Hull2D& hull, const Vec2& p, double tol) {
  const auto& v = hull.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return (p - v[0]).norm() <= tol;
  if (v.size() == 2) {
    const Vec2 d = v[1] - v[0];
    const double len2 = d.squared_norm();
    const double t = std::clamp((p - v[0]).dot(d) / len2, 0.0, 1.0);
    return (p - (v[0] + d * t)).norm() <= tol;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const Vec2 edge = b - a;
    // Signed distance of p left of edge; CCW hull keeps interior positive.
    if (edge.cross(p - a) < -tol * edge.norm()) return false;
  }
  return true;
}

FitRect min_area_rect(const Hull2D& hull) {
  const auto& v = hull.vertices;
  if (v.empty()) throw EmptyInput("min_area_rect: empty hull");

  auto canonical = [](Vec2 center, double along, double across,
                      double angle) {
    FitRect r;
    r.center = center;
    if (along >= across) {
      r.length = along;
      r.width = across;
      r.yaw = normalize_half_angle(angle);
    } else {
      r.length = across;
      r.width = along;
      r.yaw = normalize_half_angle(angle + kPi / 2.0);
    }
    return r;
  };

  if (v.size() == 1) return canonical(v[0], 0.0, 0.0, 0.0);
  if (v.size() == 2) {
    const Vec2 d = v[1] - v[0];
    return canonical((v[0] + v[1]) * 0.5, d.norm(), 0.0,
                     std::atan2(d.y, d.x));
  }

  double best_area = std::numeric_limits<double>::infinity();
  FitRect best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e = v[(i + 1) % v.size()] - v[i];
    const double len = e.norm();
    if (len == 0.0) continue;
    const Vec2 dir{e.x / len, e.y / len};
    const Vec2 nrm = dir.perp();

    double min_d = std::numeric_limits<double>::infinity(), max_d = -min_d;
    double min_n = min_d, max_n = -min_d;
    for (const Vec2& p : v) {
      const double pd = p.dot(dir);
      const double pn = p.dot(nrm);
      min_d = std::min(min_d, pd);
      max_d = std::max(max_d, pd);
      min_n = std::min(min_n, pn);
      max_n = std::max(max_n, pn);
    }
    const double along = max_d - min_d;
    const double across = max_n - min_n;
    const double area = along * across;
    if (area < best_area) {
      best_area = area;
      const double cd = (min_d + max_d) / 2.0;
      const double cn = (min_n + max_n) / 2.0;
      best = canonical({dir.x * cd + nrm.x * cn, dir.y * cd + nrm.y * cn},
                       along, across, std::atan2(dir.y, dir.x));
    }
  }
  return best;
}

double sat_gap(const FitRect& a, const FitRect& b) {
  const Vec2 axes[4] = {
      Vec2{std::cos(a.yaw), std::sin(a.yaw)},
      Vec2{std::cos(a.yaw), std::sin(a.yaw)}.perp(),
      Vec2{std::cos(b.yaw), std::sin(b.yaw)},
      Vec2{std::cos(b.yaw), std::sin(b.yaw)}.perp(),
  };
  const Vec2 a_dir = axes[0], a_nrm = axes[1];
  const Vec2 b_dir = axes[2], b_nrm = axes[3];
  const Vec2 t = b.center - a.center;

  double max_gap = -std::numeric_limits<double>::infinity();
  for (const Vec2& axis : axes) {
    const double ra = a.length / 2.0 * std::abs(axis.dot(a_dir)) +
                      a.width / 2.0 * std::abs(axis.dot(a_nrm));
    const double rb = b.length / 2.0 * std::abs(axis.dot(b_dir)) +
                      b.width / 2.0 * std::abs(axis.dot(b_nrm));
    max_gap = std::max(max_gap, std::abs(t.dot(axis)) - (ra + rb));
  }
  return max_gap;
}

bool rects_overlap(const FitRect& a, const FitRect& b) {
  return sat_gap(a, b) <= 0.0;
}

bool rect_contains(const FitRect& r, const Vec2& p) {
  const Vec2 d = p - r.center;
  const double c = std::cos(r.yaw), s = std::sin(r.yaw);
  const double local_x = c * d.x + s * d.y;
  const double local_y = -s * d.x + c * d.y;
  return std::abs(local_x) <= r.length / 2.0 &&
         std::abs(local_y) <= r.width / 2.0;
}

}  // namespace lidaraug::geom
