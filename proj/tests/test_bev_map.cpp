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

#include <doctest.h>

#include <array>
#include <set>

#include "lidaraug/bev_map.hpp"
#include "lidaraug/errors.hpp"
#include "lidaraug/rng.hpp"
#include "oracles.hpp"

using namespace lidaraug;
using bev::BevGrid;
using bev::GridSpec;
using bev::StructuringElement;

namespace {

const std::set<int> kRoadIds = {40};
const std::set<int> kSidewalkIds = {48};

LidarScan labeled_scan(const std::vector<std::array<double, 3>>& pts,
                       const std::vector<int>& labels) {
  LidarScan scan;
  scan.labels.emplace();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    scan.points.push_back({pts[i][0], pts[i][1], pts[i][2], 0.0f});
    scan.labels->push_back(static_cast<std::uint16_t>(labels[i]));
  }
  return scan;
}

GridSpec small_spec(int w, int h) {
  GridSpec spec;
  spec.origin_x = 0;
  spec.origin_y = 0;
  spec.cell_size = 1.0;
  spec.width = w;
  spec.height = h;
  return spec;
}

std::vector<std::uint8_t> random_mask(Rng& rng, int h, int w, double density) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(h) * w);
  for (auto& v : m) v = rng.bernoulli(density) ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("structuring element sizes") {
  CHECK(StructuringElement::disk(3).offsets.size() == 29);
  CHECK(StructuringElement::disk(2).offsets.size() == 13);
  CHECK(StructuringElement::rect(5, 3).offsets.size() == 15);
}

TEST_CASE("rasterize bins one road point and averages elevations") {
  const LidarScan scan = labeled_scan({{3.2, 4.7, -1.6}}, {40});
  const BevGrid grid = bev::rasterize(scan, kRoadIds, kSidewalkIds,
                                      small_spec(10, 10));
  const bev::Cell* cell = grid.cell_at(3.2, 4.7);
  REQUIRE(cell != nullptr);
  CHECK(cell->road);
  CHECK(cell->has_elevation());
  CHECK(cell->elevation() == doctest::Approx(-1.6));
  CHECK(&grid.at(4, 3) == cell);  // (row 4, col 3)

  const LidarScan two = labeled_scan({{3.2, 4.7, -1.6}, {3.9, 4.1, -1.4}},
                                     {40, 40});
  const BevGrid grid2 = bev::rasterize(two, kRoadIds, kSidewalkIds,
                                       small_spec(10, 10));
  CHECK(grid2.at(4, 3).elevation() == doctest::Approx(-1.5));
  CHECK(grid2.at(4, 3).hit_count == 2);
}

TEST_CASE("rasterize without road or sidewalk points gives an empty grid") {
  const LidarScan scan = labeled_scan({{1, 1, 0}, {2, 2, 0}}, {70, 50});
  const BevGrid grid = bev::rasterize(scan, kRoadIds, kSidewalkIds,
                                      small_spec(5, 5));
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      CHECK_FALSE(grid.at(r, c).road);
      CHECK_FALSE(grid.at(r, c).pedestrian);
    }
}

TEST_CASE("rasterize requires labels") {
  LidarScan scan;
  scan.points.push_back({1, 1, 0, 0});
  CHECK_THROWS_AS(
      bev::rasterize(scan, kRoadIds, kSidewalkIds, small_spec(5, 5)),
      MissingLabels);
}

TEST_CASE("cell_at boundary conventions") {
  const BevGrid grid{small_spec(4, 4)};
  CHECK(grid.cell_at(0.5, 0.5) == &grid.at(0, 0));
  CHECK(grid.cell_at(-0.1, 0.0) == nullptr);
  CHECK(grid.cell_at(4.0, 1.0) == nullptr);  // exclusive upper edge
  CHECK(grid.cell_at(3.999, 1.0) == &grid.at(1, 3));
}

TEST_CASE("accumulate equals rasterize for one scan with identity pose") {
  const LidarScan scan = labeled_scan(
      {{1.2, 2.4, -1.7}, {5.5, 1.1, -1.6}, {3.3, 3.3, 0.0}}, {40, 48, 70});
  const BevGrid direct = bev::rasterize(scan, kRoadIds, kSidewalkIds, 1.0, 2);
  const BevGrid acc = bev::accumulate({scan}, {Pose::identity()}, kRoadIds,
                                      kSidewalkIds, 1.0, 2);
  REQUIRE(acc.width() == direct.width());
  REQUIRE(acc.height() == direct.height());
  CHECK(acc.road_mask() == direct.road_mask());
  CHECK(acc.pedestrian_mask() == direct.pedestrian_mask());
  for (int r = 0; r < acc.height(); ++r)
    for (int c = 0; c < acc.width(); ++c)
      CHECK(acc.at(r, c).elev_sum == direct.at(r, c).elev_sum);
}

TEST_CASE("accumulate same scan twice keeps flags and elevations") {
  const LidarScan scan = labeled_scan({{1.2, 2.4, -1.7}}, {40});
  const BevGrid once = bev::accumulate({scan}, {Pose::identity()}, kRoadIds,
                                       kSidewalkIds, 1.0, 2);
  const BevGrid twice =
      bev::accumulate({scan, scan}, {Pose::identity(), Pose::identity()},
                      kRoadIds, kSidewalkIds, 1.0, 2);
  REQUIRE(once.width() == twice.width());
  CHECK(once.road_mask() == twice.road_mask());
  for (int r = 0; r < once.height(); ++r)
    for (int c = 0; c < once.width(); ++c)
      if (once.at(r, c).has_elevation()) {
        REQUIRE(twice.at(r, c).has_elevation());
        CHECK(once.at(r, c).elevation() ==
              doctest::Approx(twice.at(r, c).elevation()));
      }
}

TEST_CASE("accumulate of two translated scans is the union of shifted masks") {
  const LidarScan scan =
      labeled_scan({{0.5, 0.5, -1.7}, {1.5, 0.5, -1.7}}, {40, 40});
  Pose shift;
  shift.translation = {3, 0, 0};
  const BevGrid acc = bev::accumulate({scan, scan}, {Pose::identity(), shift},
                                      kRoadIds, kSidewalkIds, 1.0, 1);
  std::set<std::pair<int, int>> road_cells;
  for (int r = 0; r < acc.height(); ++r)
    for (int c = 0; c < acc.width(); ++c)
      if (acc.at(r, c).road) road_cells.insert({r, c});
  // Source cells x in {0,1} plus shifted copies x in {3,4}, one row, after
  // a 1-cell pad on each side.
  const std::set<std::pair<int, int>> expect = {{1, 1}, {1, 2}, {1, 4}, {1, 5}};
  CHECK(road_cells == expect);
}

TEST_CASE("accumulate rejects mismatched pose counts") {
  const LidarScan scan = labeled_scan({{0.5, 0.5, -1.7}}, {40});
  CHECK_THROWS_AS(
      bev::accumulate({scan, scan}, {Pose::identity()}, kRoadIds, kSidewalkIds),
      LengthMismatch);
}

TEST_CASE("close_road on an empty mask stays empty") {
  const BevGrid grid{small_spec(8, 8)};
  const BevGrid closed = bev::close_road(grid);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) CHECK_FALSE(closed.at(r, c).road);
}

TEST_CASE("close_road leaves a well-padded solid block unchanged") {
  // Margin of at least twice the seed radius keeps border effects away,
  // matching the auto-fit padding the pipeline uses.
  BevGrid grid{small_spec(24, 24)};
  for (int r = 7; r < 17; ++r)
    for (int c = 7; c < 17; ++c) {
      grid.at(r, c).road = true;
      grid.at(r, c).elev_sum = -1.7;
      grid.at(r, c).hit_count = 1;
    }
  const BevGrid closed = bev::close_road(grid);
  CHECK(closed.road_mask() == grid.road_mask());
}

TEST_CASE("close_road fills a two-cell gap across a road strip") {
  // 5-cell-thick road with a full-height 2-column gap.
  BevGrid grid{small_spec(28, 17)};
  for (int r = 6; r <= 10; ++r)
    for (int c = 6; c <= 21; ++c) {
      if (c == 13 || c == 14) continue;  // the gap
      grid.at(r, c).road = true;
      grid.at(r, c).elev_sum = -1.5;
      grid.at(r, c).hit_count = 1;
    }
  const BevGrid closed = bev::close_road(grid);
  CHECK(closed.at(8, 13).road);
  CHECK(closed.at(8, 14).road);
  CHECK(closed.at(8, 13).has_elevation());
  CHECK(closed.at(8, 13).elevation() == doctest::Approx(-1.5));

  // Full-mask equality against the independent set-based oracle.
  const auto expect = oracles::close(grid.road_mask(), 17, 28,
                                     oracles::disk_offsets(3));
  CHECK(closed.road_mask() == expect);
}

TEST_CASE("morphology laws on random masks") {
  Rng rng(313);
  const auto se = StructuringElement::disk(2);
  const auto se_offsets = oracles::disk_offsets(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = 4 + static_cast<int>(rng.uniform_index(20));
    const int w = 4 + static_cast<int>(rng.uniform_index(20));
    const auto mask = random_mask(rng, h, w, rng.uniform_real(0.05, 0.5));

    const auto dilated = bev::dilate(mask, h, w, se);
    const auto eroded = bev::erode(mask, h, w, se);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) CHECK(dilated[i]);  // dilation extensive
      if (eroded[i]) CHECK(mask[i]);   // erosion anti-extensive
    }

    const auto closed = bev::close_mask(mask, h, w, se);
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) CHECK(closed[i]);  // closing extensive
    CHECK(bev::close_mask(closed, h, w, se) == closed);  // idempotent

    CHECK(closed == oracles::close(mask, h, w, se_offsets));
  }
}

TEST_CASE("derive_pedestrian_area: empty road leaves only raw sidewalk") {
  BevGrid grid{small_spec(10, 10)};
  grid.at(5, 5).pedestrian = true;  // raw sidewalk rasterization
  const BevGrid out = bev::derive_pedestrian_area(grid);
  int count = 0;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) count += out.at(r, c).pedestrian ? 1 : 0;
  CHECK(count == 1);
  CHECK(out.at(5, 5).pedestrian);
}

TEST_CASE("derive_pedestrian_area ring around a single road cell") {
  const int n = 13, mid = 6;
  BevGrid grid{small_spec(n, n)};
  grid.at(mid, mid).road = true;
  grid.at(mid, mid).elev_sum = -1.7;
  grid.at(mid, mid).hit_count = 1;
  const BevGrid out = bev::derive_pedestrian_area(grid, 2,
                                                  StructuringElement::disk(2));

  // Oracle: band = non-road cells with Chebyshev distance in [1, 2],
  // dilated by disk(2), minus road.
  std::vector<std::uint8_t> band(n * n, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const int cheb = std::max(std::abs(r - mid), std::abs(c - mid));
      if (cheb >= 1 && cheb <= 2) band[r * n + c] = 1;
    }
  auto expect = oracles::dilate(band, n, n, oracles::disk_offsets(2));
  expect[mid * n + mid] = 0;
  CHECK(out.pedestrian_mask() == expect);

  // Every pedestrian cell inherits the road elevation.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (out.at(r, c).pedestrian) {
        REQUIRE(out.at(r, c).has_elevation());
        CHECK(out.at(r, c).elevation() == doctest::Approx(-1.7));
      }
}

TEST_CASE("derive_pedestrian_area band along a half-plane road") {
  const int n = 24;
  const int road_rows = 8;  // rows 0..7 are road
  BevGrid grid{small_spec(n, n)};
  for (int r = 0; r < road_rows; ++r)
    for (int c = 0; c < n; ++c) {
      grid.at(r, c).road = true;
      grid.at(r, c).elev_sum = -1.6;
      grid.at(r, c).hit_count = 1;
    }
  const BevGrid out = bev::derive_pedestrian_area(grid, 2,
                                                  StructuringElement::disk(2));
  // Analytic: band of width border_dist + seed radius = 4 rows beyond the
  // road, full width, nothing else.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const bool expect = r >= road_rows && r < road_rows + 4;
      CHECK(out.at(r, c).pedestrian == expect);
    }
}

TEST_CASE("pedestrian mask is disjoint from road mask") {
  Rng rng(317);
  for (int trial = 0; trial < 10; ++trial) {
    BevGrid grid{small_spec(18, 18)};
    for (int r = 0; r < 18; ++r)
      for (int c = 0; c < 18; ++c)
        if (rng.bernoulli(0.25)) {
          grid.at(r, c).road = true;
          grid.at(r, c).elev_sum = -1.5;
          grid.at(r, c).hit_count = 1;
        } else if (rng.bernoulli(0.1)) {
          grid.at(r, c).pedestrian = true;
        }
    const BevGrid closed = bev::close_road(grid);
    const BevGrid out = bev::derive_pedestrian_area(closed);
    for (int r = 0; r < 18; ++r)
      for (int c = 0; c < 18; ++c) {
        const bool both = out.at(r, c).road && out.at(r, c).pedestrian;
        CHECK_FALSE(both);
      }

    // Closing is extensive at the grid level too.
    for (int r = 0; r < 18; ++r)
      for (int c = 0; c < 18; ++c)
        if (grid.at(r, c).road) CHECK(closed.at(r, c).road);
  }
}

TEST_CASE("close_road interpolates elevation only from known neighbors") {
  BevGrid grid{small_spec(28, 17)};
  for (int r = 6; r <= 10; ++r)
    for (int c = 6; c <= 21; ++c) {
      if (c == 13) continue;
      grid.at(r, c).road = true;  // no elevations anywhere
    }
  const BevGrid closed = bev::close_road(grid);
  CHECK(closed.at(8, 13).road);
  CHECK_FALSE(closed.at(8, 13).has_elevation());
}
