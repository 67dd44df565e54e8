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

#include "lidaraug/bev_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "lidaraug/core.hpp"
#include "lidaraug/errors.hpp"

namespace lidaraug::bev {

StructuringElement StructuringElement::disk(int radius) {
  StructuringElement se;
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc)
      if (dr * dr + dc * dc <= radius * radius) se.offsets.emplace_back(dr, dc);
  return se;
}

StructuringElement StructuringElement::rect(int rows, int cols) {
  StructuringElement se;
  const int hr = rows / 2, hc = cols / 2;
  for (int dr = -hr; dr <= hr; ++dr)
    for (int dc = -hc; dc <= hc; ++dc) se.offsets.emplace_back(dr, dc);
  return se;
}

const Cell* BevGrid::cell_at(double x, double y) const {
  int row, col;
  if (!cell_index(x, y, row, col)) return nullptr;
  return &at(row, col);
}

bool BevGrid::cell_index(double x, double y, int& row, int& col) const {
  const double fc = std::floor((x - spec_.origin_x) / spec_.cell_size);
  const double fr = std::floor((y - spec_.origin_y) / spec_.cell_size);
  if (fc < 0 || fr < 0 || fc >= spec_.width || fr >= spec_.height) return false;
  col = static_cast<int>(fc);
  row = static_cast<int>(fr);
  return true;
}

std::vector<std::uint8_t> BevGrid::road_mask() const {
  std::vector<std::uint8_t> m(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) m[i] = cells_[i].road;
  return m;
}

std::vector<std::uint8_t> BevGrid::pedestrian_mask() const {
  std::vector<std::uint8_t> m(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) m[i] = cells_[i].pedestrian;
  return m;
}

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask,
                                 int height, int width,
                                 const StructuringElement& se) {
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (const auto& [dr, dc] : se.offsets) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
        if (mask[static_cast<std::size_t>(rr) * width + cc]) {
          out[static_cast<std::size_t>(r) * width + c] = 1;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& mask,
                                int height, int width,
                                const StructuringElement& se) {
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      bool all = true;
      for (const auto& [dr, dc] : se.offsets) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
        if (!mask[static_cast<std::size_t>(rr) * width + cc]) {
          all = false;
          break;
        }
      }
      out[static_cast<std::size_t>(r) * width + c] = all ? 1 : 0;
    }
  }
  return out;
}

std::vector<std::uint8_t> close_mask(const std::vector<std::uint8_t>& mask,
                                     int height, int width,
                                     const StructuringElement& se) {
  return erode(dilate(mask, height, width, se), height, width, se);
}

GridSpec fit_grid(const std::vector<Point>& points, double cell_size,
                  int pad_cells) {
  GridSpec spec;
  spec.cell_size = cell_size;
  if (points.empty()) {
    spec.width = spec.height = 0;
    return spec;
  }
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const Point& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  spec.origin_x = std::floor(min_x / cell_size) * cell_size - pad_cells * cell_size;
  spec.origin_y = std::floor(min_y / cell_size) * cell_size - pad_cells * cell_size;
  spec.width = static_cast<int>(
                   std::ceil((max_x - spec.origin_x) / cell_size)) + pad_cells + 1;
  spec.height = static_cast<int>(
                    std::ceil((max_y - spec.origin_y) / cell_size)) + pad_cells + 1;
  return spec;
}

namespace {

void rasterize_into(BevGrid& grid, const LidarScan& scan,
                    const std::set<int>& road_class_ids,
                    const std::set<int>& sidewalk_class_ids) {
  if (!scan.labels)
    throw MissingLabels("rasterize: scan '" + scan.frame_id +
                        "' has no label channel");
  const auto& labels = *scan.labels;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const int label = labels[i];
    const bool is_road = road_class_ids.count(label) > 0;
    const bool is_sidewalk = !is_road && sidewalk_class_ids.count(label) > 0;
    if (!is_road && !is_sidewalk) continue;
    int row, col;
    if (!grid.cell_index(scan.points[i].x, scan.points[i].y, row, col))
      continue;
    Cell& cell = grid.at(row, col);
    if (is_road) {
      cell.road = true;
      cell.elev_sum += scan.points[i].z;
      cell.hit_count += 1;
    } else {
      cell.pedestrian = true;
    }
  }
}

std::vector<Point> labeled_surface_points(const LidarScan& scan,
                                          const std::set<int>& road_class_ids,
                                          const std::set<int>& sidewalk_class_ids) {
  if (!scan.labels)
    throw MissingLabels("rasterize: scan '" + scan.frame_id +
                        "' has no label channel");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const int label = (*scan.labels)[i];
    if (road_class_ids.count(label) || sidewalk_class_ids.count(label))
      pts.push_back(scan.points[i]);
  }
  return pts;
}

}  // namespace

BevGrid rasterize(const LidarScan& scan, const std::set<int>& road_class_ids,
                  const std::set<int>& sidewalk_class_ids,
                  const GridSpec& spec) {
  BevGrid grid(spec);
  rasterize_into(grid, scan, road_class_ids, sidewalk_class_ids);
  return grid;
}

BevGrid rasterize(const LidarScan& scan, const std::set<int>& road_class_ids,
                  const std::set<int>& sidewalk_class_ids, double cell_size,
                  int pad_cells) {
  const auto pts = labeled_surface_points(scan, road_class_ids, sidewalk_class_ids);
  return rasterize(scan, road_class_ids, sidewalk_class_ids,
                   fit_grid(pts, cell_size, pad_cells));
}

BevGrid accumulate(const std::vector<LidarScan>& scans,
                   const std::vector<Pose>& poses,
                   const std::set<int>& road_class_ids,
                   const std::set<int>& sidewalk_class_ids, double cell_size,
                   int pad_cells) {
  if (scans.size() != poses.size())
    throw LengthMismatch("accumulate: " + std::to_string(scans.size()) +
                         " scans vs " + std::to_string(poses.size()) +
                         " poses");
  std::vector<LidarScan> global;
  global.reserve(scans.size());
  std::vector<Point> extent;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    global.push_back(transform_scan(scans[i], poses[i]));
    const auto pts =
        labeled_surface_points(global.back(), road_class_ids, sidewalk_class_ids);
    extent.insert(extent.end(), pts.begin(), pts.end());
  }
  BevGrid grid(fit_grid(extent, cell_size, pad_cells));
  for (const LidarScan& scan : global)
    rasterize_into(grid, scan, road_class_ids, sidewalk_class_ids);
  return grid;
}

BevGrid close_road(const BevGrid& grid, const StructuringElement& seed) {
  const int h = grid.height(), w = grid.width();
  BevGrid out = grid;
  const auto before = grid.road_mask();
  const auto closed = close_mask(before, h, w, seed);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      if (!closed[i] || before[i]) continue;
      Cell& cell = out.at(r, c);
      cell.road = true;
      // Interpolated elevation: mean over pre-closing road cells that have
      // one, within the seed neighborhood. No neighbor -> stays absent.
      double sum = 0.0;
      int n = 0;
      for (const auto& [dr, dc] : seed.offsets) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        if (!before[static_cast<std::size_t>(rr) * w + cc]) continue;
        const Cell& src = grid.at(rr, cc);
        if (!src.has_elevation()) continue;
        sum += src.elevation();
        n += 1;
      }
      if (n > 0) {
        cell.elev_sum = sum / n;
        cell.hit_count = 1;
      }
    }
  }
  return out;
}

BevGrid derive_pedestrian_area(const BevGrid& grid, int border_dist,
                               const StructuringElement& seed) {
  const int h = grid.height(), w = grid.width();
  const auto road = grid.road_mask();
  const auto raw_sidewalk = grid.pedestrian_mask();

  // Border band: non-road cells within border_dist (Chebyshev) of road.
  std::vector<std::uint8_t> band(road.size(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      if (road[i]) continue;
      bool near_road = false;
      for (int dr = -border_dist; dr <= border_dist && !near_road; ++dr) {
        for (int dc = -border_dist; dc <= border_dist; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          if (road[static_cast<std::size_t>(rr) * w + cc]) {
            near_road = true;
            break;
          }
        }
      }
      band[i] = near_road ? 1 : 0;
    }
  }

  const auto dilated = dilate(band, h, w, seed);

  BevGrid out = grid;
  std::vector<std::pair<int, int>> elevated_road;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (grid.at(r, c).road && grid.at(r, c).has_elevation())
        elevated_road.emplace_back(r, c);

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const bool ped = (dilated[i] || raw_sidewalk[i]) && !road[i];
      Cell& cell = out.at(r, c);
      cell.pedestrian = ped;
      if (ped && !cell.has_elevation() && !elevated_road.empty()) {
        // Inherit from the nearest road cell (Euclidean over cell centers,
        // ties broken by row-major order).
        double best = std::numeric_limits<double>::infinity();
        const Cell* best_cell = nullptr;
        for (const auto& [rr, cc] : elevated_road) {
          const double dr = rr - r, dc = cc - c;
          const double d2 = dr * dr + dc * dc;
          if (d2 < best) {
            best = d2;
            best_cell = &grid.at(rr, cc);
          }
        }
        cell.elev_sum = best_cell->elevation();
        cell.hit_count = 1;
      }
    }
  }
  return out;
}

void write_debug_pgm(const BevGrid& grid, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f << "P5\n" << grid.width() << " " << grid.height() << "\n255\n";
  // Row 0 of the grid is the smallest y; render top-down.
  for (int r = grid.height() - 1; r >= 0; --r) {
    for (int c = 0; c < grid.width(); ++c) {
      const Cell& cell = grid.at(r, c);
      const unsigned char v = cell.road ? 255 : (cell.pedestrian ? 128 : 0);
      f.put(static_cast<char>(v));
    }
  }
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

}  // namespace lidaraug::bev
