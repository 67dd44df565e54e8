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

#ifndef LIDARAUG_BEV_MAP_HPP
#define LIDARAUG_BEV_MAP_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lidaraug/types.hpp"

namespace lidaraug::bev {

// Neighborhood shape for the morphological operations. A disk of radius r
// contains exactly the integer offsets with Euclidean norm <= r; a rect of
// rows x cols (odd) spans the centered window.
struct StructuringElement {
  std::vector<std::pair<int, int>> offsets;  // (drow, dcol)

  static StructuringElement disk(int radius);
  static StructuringElement rect(int rows, int cols);
};

struct GridSpec {
  double origin_x = 0.0;  // world x of cell (row 0, col 0) corner
  double origin_y = 0.0;
  double cell_size = 1.0;
  int width = 0;   // columns, along x
  int height = 0;  // rows, along y
};

// Per-cell record. Elevation is a running mean over contributing point
// heights; it is "present" iff hit_count >= 1 (interpolated cells are
// stored with hit_count 1).
struct Cell {
  bool road = false;
  bool pedestrian = false;
  double elev_sum = 0.0;
  int hit_count = 0;

  bool has_elevation() const { return hit_count >= 1; }
  double elevation() const { return elev_sum / hit_count; }
};

// Discretized ground-plane grid holding the road / pedestrian-area masks
// and ground elevation used for placement.
class BevGrid {
 public:
  BevGrid() = default;
  explicit BevGrid(const GridSpec& spec)
      : spec_(spec),
        cells_(static_cast<std::size_t>(spec.width) * spec.height) {
    if (spec.cell_size <= 0.0 || spec.width < 0 || spec.height < 0)
      throw std::invalid_argument("BevGrid: bad grid spec");
  }

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < spec_.height && col >= 0 && col < spec_.width;
  }

  Cell& at(int row, int col) { return cells_[index(row, col)]; }
  const Cell& at(int row, int col) const { return cells_[index(row, col)]; }

  /// Cell containing world point (x, y), or nullptr when outside the grid
  /// (out-of-bounds means "invalid for placement", not an error). Cells are
  /// half-open: [k*cell, (k+1)*cell).
  const Cell* cell_at(double x, double y) const;

  /// (row, col) of the cell containing (x, y); false return = out of bounds.
  bool cell_index(double x, double y, int& row, int& col) const;

  /// World coordinates of a cell center.
  Vec2 cell_center(int row, int col) const {
    return {spec_.origin_x + (col + 0.5) * spec_.cell_size,
            spec_.origin_y + (row + 0.5) * spec_.cell_size};
  }

  std::vector<std::uint8_t> road_mask() const;
  std::vector<std::uint8_t> pedestrian_mask() const;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * spec_.width + col;
  }

  GridSpec spec_;
  std::vector<Cell> cells_;
};

// --- binary morphology primitives (row-major masks of height*width) ---

/// Dilation: a cell turns on iff any in-bounds structuring-element neighbor
/// is on. Cells outside the grid are background.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask,
                                 int height, int width,
                                 const StructuringElement& se);

/// Erosion: a cell stays on iff every in-bounds neighbor is on. Offsets
/// falling outside the grid are ignored, which keeps closing extensive and
/// idempotent on finite grids.
std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& mask,
                                int height, int width,
                                const StructuringElement& se);

std::vector<std::uint8_t> close_mask(const std::vector<std::uint8_t>& mask,
                                     int height, int width,
                                     const StructuringElement& se);

// --- map construction ---

/// Grid spec covering the BEV extent of the given points, padded by
/// pad_cells on every side.
GridSpec fit_grid(const std::vector<Point>& points, double cell_size,
                  int pad_cells);

/// Projects labeled points into the grid: road-labeled points mark road and
/// feed the cell elevation mean, sidewalk-labeled points mark pedestrian.
/// Throws MissingLabels when the scan has no label channel.
BevGrid rasterize(const LidarScan& scan, const std::set<int>& road_class_ids,
                  const std::set<int>& sidewalk_class_ids,
                  const GridSpec& spec);

/// Auto-fitting variant: bounds derived from the scan extent.
BevGrid rasterize(const LidarScan& scan, const std::set<int>& road_class_ids,
                  const std::set<int>& sidewalk_class_ids,
                  double cell_size = 1.0, int pad_cells = 8);

/// Transforms each scan into the global frame by its pose and rasterizes
/// everything into one grid. Flags union; elevations merge by running mean
/// over all contributing points. Throws LengthMismatch when pose and scan
/// counts differ.
BevGrid accumulate(const std::vector<LidarScan>& scans,
                   const std::vector<Pose>& poses,
                   const std::set<int>& road_class_ids,
                   const std::set<int>& sidewalk_class_ids,
                   double cell_size = 1.0, int pad_cells = 8);

/// Morphological closing of the road mask (default disk(3)). Newly closed
/// cells get the mean elevation of pre-closing road cells inside the seed
/// neighborhood; with no such neighbor they stay elevation-absent and
/// therefore invalid for placement.
BevGrid close_road(const BevGrid& grid,
                   const StructuringElement& seed = StructuringElement::disk(3));

/// Pedestrian area: non-road cells within border_dist (Chebyshev) of a road
/// cell, dilated by the seed (default disk(2)), unioned with raw sidewalk
/// cells, minus the road mask. Pedestrian cells missing elevation inherit it
/// from the nearest road cell that has one.
BevGrid derive_pedestrian_area(
    const BevGrid& grid, int border_dist = 2,
    const StructuringElement& seed = StructuringElement::disk(2));

/// Debug raster: road=white, pedestrian=gray, everything else black.
/// Binary PGM (P5), row 0 at top.
void write_debug_pgm(const BevGrid& grid, const std::string& path);

}  // namespace lidaraug::bev

#endif  // LIDARAUG_BEV_MAP_HPP
