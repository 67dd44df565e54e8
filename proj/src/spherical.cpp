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

#include "lidaraug/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "lidaraug/augmentor.hpp"
#include "lidaraug/errors.hpp"

namespace lidaraug::sph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool project_point(const Point& p, const ProjectionParams& params, int& row,
                   int& col) {
  const double range = p.range();
  if (range <= 0.0) return false;
  const double elevation = std::asin(std::clamp(p.z / range, -1.0, 1.0));
  if (elevation > params.fov_up || elevation < params.fov_down) return false;

  const double azimuth = std::atan2(p.y, p.x);
  col = static_cast<int>(
      std::floor(params.cols * (azimuth + kPi) / (2.0 * kPi)));
  col = std::clamp(col, 0, params.cols - 1);

  const double span = params.fov_up - params.fov_down;
  row = static_cast<int>(
      std::floor(params.rows * (params.fov_up - elevation) / span));
  row = std::clamp(row, 0, params.rows - 1);
  return true;
}

RangeImage project(const LidarScan& scan, const ProjectionParams& params) {
  if (params.rows < 1 || params.cols < 1 || !(params.fov_up > params.fov_down))
    throw Error("project: invalid image geometry");
  RangeImage img;
  img.rows = params.rows;
  img.cols = params.cols;
  img.fov_up = params.fov_up;
  img.fov_down = params.fov_down;
  const std::size_t n = static_cast<std::size_t>(params.rows) * params.cols;
  img.depth.assign(n, kInf);
  img.point_indices.assign(n, {});
  img.filled.assign(n, 0);

  for (std::uint32_t i = 0; i < scan.points.size(); ++i) {
    int row, col;
    if (!project_point(scan.points[i], params, row, col)) {
      img.dropped_points += 1;
      continue;
    }
    const std::size_t px = img.index(row, col);
    img.point_indices[px].push_back(i);
    img.depth[px] = std::min(img.depth[px], scan.points[i].range());
  }
  return img;
}

RangeImage close_range_image(const RangeImage& img, int seed_rows,
                             int seed_cols) {
  const auto seed = bev::StructuringElement::rect(seed_rows, seed_cols);
  std::vector<std::uint8_t> occupancy(img.depth.size());
  for (std::size_t i = 0; i < img.depth.size(); ++i)
    occupancy[i] = std::isfinite(img.depth[i]) ? 1 : 0;

  const auto closed =
      bev::close_mask(occupancy, img.rows, img.cols, seed);

  RangeImage out = img;
  const int hr = seed_rows / 2, hc = seed_cols / 2;
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const std::size_t px = img.index(r, c);
      if (!closed[px] || occupancy[px]) continue;
      // New pixel: average of the original finite depths in the seed window.
      double sum = 0.0;
      int n = 0;
      for (int dr = -hr; dr <= hr; ++dr) {
        for (int dc = -hc; dc <= hc; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= img.rows || cc < 0 || cc >= img.cols) continue;
          const double d = img.depth[img.index(rr, cc)];
          if (std::isfinite(d) && !img.filled[img.index(rr, cc)]) {
            sum += d;
            n += 1;
          }
        }
      }
      if (n > 0) {
        out.depth[px] = sum / n;
        out.filled[px] = 1;
      }
    }
  }
  return out;
}

OcclusionResult resolve_occlusion(const LidarScan& scene,
                                  const aug::InsertableObject& object,
                                  const ProjectionParams& params,
                                  std::uint16_t instance_id) {
  LidarScan object_scan;
  object_scan.points = object.points;

  const RangeImage scene_closed = close_range_image(
      project(scene, params), params.closing_rows, params.closing_cols);
  const RangeImage object_closed = close_range_image(
      project(object_scan, params), params.closing_rows, params.closing_cols);

  OcclusionResult res;
  std::vector<std::uint8_t> removed(scene.points.size(), 0);
  for (std::size_t px = 0; px < object_closed.depth.size(); ++px) {
    const double obj_depth = object_closed.depth[px];
    // Ties go to the scene: only a strictly nearer object wins a pixel.
    if (!(obj_depth < scene_closed.depth[px])) continue;
    for (const std::uint32_t si : scene_closed.point_indices[px]) {
      if (scene.points[si].range() > obj_depth) removed[si] = 1;
    }
    for (const std::uint32_t oi : object_closed.point_indices[px])
      res.added_object_indices.push_back(oi);
  }
  std::sort(res.added_object_indices.begin(), res.added_object_indices.end());
  for (std::uint32_t i = 0; i < removed.size(); ++i)
    if (removed[i]) res.removed_scene_indices.push_back(i);

  res.added_count = res.added_object_indices.size();
  res.removed_count = res.removed_scene_indices.size();
  res.success =
      res.added_count > static_cast<std::size_t>(object.cls.min_insert_points);

  if (!res.success) {
    res.augmented = scene;
    return res;
  }

  LidarScan out;
  out.frame_id = scene.frame_id;
  out.points.reserve(scene.points.size() - res.removed_count + res.added_count);
  if (scene.labels) out.labels.emplace();
  if (scene.instances) out.instances.emplace();
  for (std::uint32_t i = 0; i < scene.points.size(); ++i) {
    if (removed[i]) continue;
    out.points.push_back(scene.points[i]);
    if (out.labels) out.labels->push_back((*scene.labels)[i]);
    if (out.instances) out.instances->push_back((*scene.instances)[i]);
  }
  for (const std::uint32_t oi : res.added_object_indices) {
    out.points.push_back(object.points[oi]);
    if (out.labels)
      out.labels->push_back(static_cast<std::uint16_t>(object.cls.id));
    if (out.instances) out.instances->push_back(instance_id);
  }
  res.augmented = std::move(out);
  return res;
}

std::size_t count_depth_order_violations(
    const LidarScan& scan, const std::set<std::uint16_t>& inserted,
    const ProjectionParams& params, double margin) {
  if (!scan.instances)
    throw MissingLabels("violation check requires an instance channel");
  const RangeImage img = project(scan, params);
  const auto& inst = *scan.instances;

  std::size_t violations = 0;
  for (std::size_t px = 0; px < img.point_indices.size(); ++px) {
    const auto& pts = img.point_indices[px];
    if (pts.size() < 2) continue;
    bool bad = false;
    for (std::size_t a = 0; a < pts.size() && !bad; ++a) {
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const std::uint32_t pa = pts[a], pb = pts[b];
        if (inst[pa] == inst[pb]) continue;
        if (!inserted.count(inst[pa]) && !inserted.count(inst[pb])) continue;
        if (std::abs(scan.points[pa].range() - scan.points[pb].range()) >
            margin) {
          bad = true;
          break;
        }
      }
    }
    violations += bad ? 1 : 0;
  }
  return violations;
}

void write_depth_pgm(const RangeImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  double max_depth = 0.0;
  for (const double d : img.depth)
    if (std::isfinite(d)) max_depth = std::max(max_depth, d);
  f << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const double d = img.depth[img.index(r, c)];
      unsigned char v = 0;
      if (std::isfinite(d) && max_depth > 0.0)
        v = static_cast<unsigned char>(
            std::clamp(255.0 - 254.0 * d / max_depth, 1.0, 255.0));
      f.put(static_cast<char>(v));
    }
  }
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

}  // namespace lidaraug::sph
