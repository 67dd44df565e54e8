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

// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Expectations come from independent
// oracles or analytic results, never from the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

#include "lidaraug/augmentor.hpp"
#include "lidaraug/bev_map.hpp"
#include "lidaraug/box_fitting.hpp"
#include "lidaraug/core.hpp"
#include "lidaraug/geometry.hpp"
#include "lidaraug/kitti_io.hpp"
#include "lidaraug/pipeline.hpp"
#include "lidaraug/rng.hpp"
#include "lidaraug/run_config.hpp"
#include "lidaraug/spherical.hpp"
#include "lidaraug/synth.hpp"
#include "oracles.hpp"

using namespace lidaraug;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
  std::string what;
};

#define ACCEPT_CHECK(cond, msg)                                    \
  do {                                                             \
    if (!(cond)) throw Failure{std::string(msg) + " [" #cond "]"}; \
  } while (0)

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d{LIDARAUG_SCRATCH_DIR};
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  static int counter = 0;
  const std::string log =
      (scratch_dir() / ("cli_" + std::to_string(counter++) + ".log")).string();
  const std::string cmd =
      std::string(LIDARAUG_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::vector<char> slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  return std::vector<char>((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
}

// --------------------------------------------------------------------------
// criterion 1: geometry oracle equivalence
// --------------------------------------------------------------------------

void criterion_geometry() {
  Rng rng(0xC1);

  // Convex hull vs the brute-force triangle oracle, exact.
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(198);  // 3..200
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back({rng.uniform_real(-50, 50), rng.uniform_real(-50, 50)});
    auto got = geom::convex_hull(pts).vertices;
    std::sort(got.begin(), got.end(), [](const Vec2& a, const Vec2& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    const auto expect = oracles::hull_points(pts);
    ACCEPT_CHECK(got == expect,
                 "hull mismatch at trial " + std::to_string(trial));
  }

  // Minimum-area rectangle vs the per-edge enumeration oracle, 1e-9.
  Rng rng2(0xC1A);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng2.uniform_index(198);
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back({rng2.uniform_real(-50, 50), rng2.uniform_real(-50, 50)});
    const geom::Hull2D hull = geom::convex_hull(pts);
    const double got = geom::min_area_rect(hull).area();
    const double expect = oracles::min_area_rect_area(hull.vertices);
    ACCEPT_CHECK(std::abs(got - expect) < 1e-9,
                 "min-area mismatch at trial " + std::to_string(trial));
  }

  // Rectangle overlap vs the sampling oracle, tangency band excused.
  Rng rng3(0xC1B);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto mk = [&rng3] {
      geom::FitRect r;
      r.center = {rng3.uniform_real(-6, 6), rng3.uniform_real(-6, 6)};
      const double a = rng3.uniform_real(0.3, 6), b = rng3.uniform_real(0.3, 6);
      r.length = std::max(a, b);
      r.width = std::min(a, b);
      r.yaw = normalize_half_angle(rng3.uniform_real(-kPi, kPi));
      return r;
    };
    const geom::FitRect a = mk(), b = mk();
    const bool got = geom::rects_overlap(a, b);
    ACCEPT_CHECK(got == geom::rects_overlap(b, a), "overlap not symmetric");
    if (std::abs(geom::sat_gap(a, b)) < 1e-6) continue;  // separation band
    const bool expect = oracles::rects_overlap_sampling(a, b, 2000, 64);
    ACCEPT_CHECK(got == expect,
                 "overlap mismatch at trial " + std::to_string(trial));
    ++compared;
  }
  ACCEPT_CHECK(compared > 900, "tangency band swallowed too many pairs");
}

// --------------------------------------------------------------------------
// criterion 2: morphology laws
// --------------------------------------------------------------------------

void criterion_morphology() {
  Rng rng(0xC2);
  const auto seed = bev::StructuringElement::disk(3);

  // 500 random masks: closing extensive and idempotent.
  for (int trial = 0; trial < 500; ++trial) {
    const int h = 5 + static_cast<int>(rng.uniform_index(28));
    const int w = 5 + static_cast<int>(rng.uniform_index(28));
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(h) * w);
    const double density = rng.uniform_real(0.02, 0.6);
    for (auto& v : mask) v = rng.bernoulli(density) ? 1 : 0;

    const auto closed = bev::close_mask(mask, h, w, seed);
    for (std::size_t i = 0; i < mask.size(); ++i)
      ACCEPT_CHECK(!mask[i] || closed[i], "closing not extensive");
    ACCEPT_CHECK(bev::close_mask(closed, h, w, seed) == closed,
                 "closing not idempotent");
  }

  // Pedestrian mask disjoint from road mask on random derived grids.
  Rng rng2(0xC2A);
  for (int trial = 0; trial < 100; ++trial) {
    bev::GridSpec spec;
    spec.width = 20;
    spec.height = 20;
    bev::BevGrid grid(spec);
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 20; ++c) {
        if (rng2.bernoulli(0.2)) {
          grid.at(r, c).road = true;
          grid.at(r, c).elev_sum = -1.6;
          grid.at(r, c).hit_count = 1;
        } else if (rng2.bernoulli(0.1)) {
          grid.at(r, c).pedestrian = true;
        }
      }
    const bev::BevGrid out = bev::derive_pedestrian_area(bev::close_road(grid));
    for (int r = 0; r < 20; ++r)
      for (int c = 0; c < 20; ++c) {
        const bool both = out.at(r, c).road && out.at(r, c).pedestrian;
        ACCEPT_CHECK(!both, "pedestrian mask intersects road mask");
      }
  }

  // Single-pixel hole in a constant-depth block: filled with that depth.
  {
    sph::RangeImage img;
    img.rows = 16;
    img.cols = 32;
    img.depth.assign(16 * 32, std::numeric_limits<double>::infinity());
    img.point_indices.assign(16 * 32, {});
    img.filled.assign(16 * 32, 0);
    for (int r = 4; r < 11; ++r)
      for (int c = 10; c < 17; ++c)
        if (!(r == 7 && c == 13)) img.depth[img.index(r, c)] = 8.0;
    const sph::RangeImage closed = sph::close_range_image(img, 5, 3);
    ACCEPT_CHECK(closed.filled[img.index(7, 13)] == 1, "hole not filled");
    ACCEPT_CHECK(closed.depth[img.index(7, 13)] == 8.0,
                 "hole depth is not the neighborhood mean");
  }

  // Two-column gap across a thick road strip: filled, equal to the oracle.
  {
    bev::GridSpec spec;
    spec.width = 28;
    spec.height = 17;
    bev::BevGrid grid(spec);
    for (int r = 6; r <= 10; ++r)
      for (int c = 6; c <= 21; ++c) {
        if (c == 13 || c == 14) continue;
        grid.at(r, c).road = true;
        grid.at(r, c).elev_sum = -1.5;
        grid.at(r, c).hit_count = 1;
      }
    const bev::BevGrid closed = bev::close_road(grid);
    ACCEPT_CHECK(closed.at(8, 13).road && closed.at(8, 14).road,
                 "strip gap not closed");
    const auto expect =
        oracles::close(grid.road_mask(), 17, 28, oracles::disk_offsets(3));
    ACCEPT_CHECK(closed.road_mask() == expect,
                 "closed mask differs from oracle");
  }

  // Half-plane road: pedestrian band of exactly border + seed-radius rows.
  {
    bev::GridSpec spec;
    spec.width = 24;
    spec.height = 24;
    bev::BevGrid grid(spec);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 24; ++c) {
        grid.at(r, c).road = true;
        grid.at(r, c).elev_sum = -1.6;
        grid.at(r, c).hit_count = 1;
      }
    const bev::BevGrid out = bev::derive_pedestrian_area(grid);
    for (int r = 0; r < 24; ++r)
      for (int c = 0; c < 24; ++c) {
        const bool expect = r >= 8 && r < 12;
        ACCEPT_CHECK(out.at(r, c).pedestrian == expect,
                     "half-plane band mismatch");
      }
  }
}

// --------------------------------------------------------------------------
// criterion 3: box-fitting recovery
// --------------------------------------------------------------------------

void criterion_box_fitting() {
  Rng rng(0xC3);
  for (int trial = 0; trial < 200; ++trial) {
    const double l = rng.uniform_real(0.5, 6.0);
    const double w = rng.uniform_real(0.5, 6.0);
    const double h = rng.uniform_real(0.5, 3.0);
    const OrientedBox truth(rng.uniform_real(-10, 10),
                            rng.uniform_real(-10, 10), h / 2 - 1.7, l, w, h,
                            rng.uniform_real(-kPi, kPi));

    // Side faces sampled at uniform arclength with a random phase, so
    // corners are not handed to the fitter verbatim.
    const double perimeter = 2.0 * (l + w);
    const double spacing = std::min(0.05, perimeter / 200.0);
    const int per_side = 3;
    std::vector<Point> pts;
    const auto corners = box_corners_bev(truth);
    const double phase = rng.uniform_real(0, spacing);
    for (int e = 0; e < 4; ++e) {
      const Vec2 a = corners[e], b = corners[(e + 1) % 4];
      const double len = (b - a).norm();
      for (double s = phase; s < len; s += spacing) {
        const double t = s / len;
        for (int zi = 0; zi < per_side; ++zi) {
          const double z = truth.bottom_z() + truth.h * zi / (per_side - 1.0);
          pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), z, 0});
        }
      }
    }
    ACCEPT_CHECK(pts.size() >= 200, "undersampled surface");

    const OrientedBox fit = boxfit::fit_box(pts, truth.bottom_z());

    const double truth_len = std::max(l, w), truth_wid = std::min(l, w);
    ACCEPT_CHECK(std::abs(fit.l - truth_len) <= 2 * spacing,
                 "length off at trial " + std::to_string(trial));
    ACCEPT_CHECK(std::abs(fit.w - truth_wid) <= 2 * spacing,
                 "width off at trial " + std::to_string(trial));
    ACCEPT_CHECK(std::abs(fit.h - truth.h) <= 2 * spacing, "height off");

    // Yaw within 1 degree modulo 90 degrees.
    double d = std::fmod(fit.yaw - truth.yaw, kPi / 2);
    if (d < 0) d += kPi / 2;
    d = std::min(d, kPi / 2 - d);
    ACCEPT_CHECK(d <= deg_to_rad(1.0),
                 "yaw off at trial " + std::to_string(trial));
  }
}

// --------------------------------------------------------------------------
// criterion 4: occlusion correctness
// --------------------------------------------------------------------------

synth::SceneSpec street_spec(const std::string& id, double object_shift,
                             bool with_wall) {
  synth::SceneSpec spec;
  spec.frame_id = id;
  spec.sensor.beams = 64;
  spec.sensor.azimuth_steps = 2048;
  spec.sensor.max_range = 60;
  spec.roads.push_back({0, 0, 70, 12, 0});
  spec.sidewalks.push_back({0, 9, 70, 6, 0});
  spec.sidewalks.push_back({0, -9, 70, 6, 0});
  if (with_wall) spec.walls.push_back({{6, -5}, {6, 5}, -1.73, 4.0});
  spec.objects.push_back({30, 0.6, 0.6, 1.7, 10 + object_shift, 7.5, 0.3});
  spec.objects.push_back({31, 1.8, 0.6, 1.7, -11, 2 + object_shift * 0.3, 1.2});
  return spec;
}

void criterion_occlusion() {
  RunConfig cfg;
  const sph::ProjectionParams params = cfg.augment.projection;

  // Bank objects cut from a clean scene.
  const synth::GeneratedScene source =
      synth::generate(street_spec("src", 0, false));
  io::Scene source_scene;
  source_scene.scan = source.scan;
  source_scene.boxes = source.boxes;
  source_scene.box_class_ids = source.box_class_ids;
  const auto bank = build_bank_from_scene(source_scene, cfg);
  ACCEPT_CHECK(bank.size() == 2, "bank extraction from generator failed");

  // Target scene with a wall in front of part of the road.
  const synth::GeneratedScene target =
      synth::generate(street_spec("dst", 2, true));

  // resolve_occlusion vs the per-pixel brute-force oracle on placements
  // that are blocked, clear, and grazing relative to the wall.
  for (const double yaw_offset : {0.0, 0.35, kPi / 2, kPi, -kPi / 2, -0.2}) {
    for (const auto& obj : bank) {
      aug::PlacementCandidate cand;
      cand.yaw_offset = yaw_offset;
      const Vec2 c = obj.box.center_bev().rotated(yaw_offset);
      cand.ground_z = -1.73;
      cand.box = OrientedBox(c.x, c.y, cand.ground_z + obj.box.h / 2, obj.box.l,
                             obj.box.w, obj.box.h, obj.box.yaw + yaw_offset);
      const aug::InsertableObject placed = aug::place_object(obj, cand);
      const auto got = sph::resolve_occlusion(target.scan, placed, params, 77);
      const auto expect = oracles::resolve_occlusion(target.scan.points,
                                                     placed.points, params);
      ACCEPT_CHECK(got.added_object_indices == expect.added_object_indices,
                   "added set differs from oracle");
      ACCEPT_CHECK(got.removed_scene_indices == expect.removed_scene_indices,
                   "removed set differs from oracle");
    }
  }

  // Zero violations on every augment_scene output across seeds.
  const bev::BevGrid map = build_map(target.scan, cfg);
  for (const std::uint64_t seed : {11ULL, 22ULL, 33ULL, 44ULL, 55ULL}) {
    Rng rng(seed);
    const auto res =
        aug::augment_scene(target.scan, target.boxes, target.box_class_ids,
                           bank, map, cfg.augment, rng);
    std::set<std::uint16_t> inserted;
    for (const auto& ins : res.report.insertions)
      inserted.insert(ins.instance_id);
    ACCEPT_CHECK(
        sph::count_depth_order_violations(res.scan, inserted, params) == 0,
        "violations in augment_scene output, seed " + std::to_string(seed));
  }

  // Constructed naive wall case: rotate a cutout so its "source" pose sits
  // straight behind the target's wall, then paste verbatim.
  {
    aug::InsertableObject behind_wall = bank[0];
    const double az = std::atan2(behind_wall.box.cy, behind_wall.box.cx);
    aug::PlacementCandidate cand;
    cand.yaw_offset = -az;
    const Vec2 c = behind_wall.box.center_bev().rotated(cand.yaw_offset);
    cand.ground_z = -1.73;
    cand.box = OrientedBox(c.x, c.y, cand.ground_z + behind_wall.box.h / 2,
                           behind_wall.box.l, behind_wall.box.w,
                           behind_wall.box.h, behind_wall.box.yaw - az);
    behind_wall = aug::place_object(behind_wall, cand);
    behind_wall.source_range = behind_wall.box.center_bev().norm();

    aug::AugmentConfig acfg = cfg.augment;
    acfg.max_objects_per_scene = 1;
    Rng rng(5);
    const auto res =
        aug::naive_gt_aug(target.scan, {}, {}, {behind_wall}, acfg, rng);
    ACCEPT_CHECK(res.report.insertions.size() == 1, "naive paste did not land");
    const std::set<std::uint16_t> inserted = {
        res.report.insertions[0].instance_id};
    ACCEPT_CHECK(
        sph::count_depth_order_violations(res.scan, inserted, params) >= 1,
        "naive paste through a wall not flagged");
  }
}

// --------------------------------------------------------------------------
// criterion 5: placement contract (independent post-hoc validator)
// --------------------------------------------------------------------------

void criterion_placement_contract() {
  // Minimum point counts pinned here, independent of the config machinery.
  const std::map<int, int> min_points = {{11, 10}, {15, 10}, {18, 40},
                                         {30, 20}, {31, 30}, {32, 30}};
  const double range_tolerance = 0.5;

  RunConfig cfg;
  cfg.augment.projection.rows = 32;
  cfg.augment.projection.cols = 1024;
  cfg.augment.max_objects_per_scene = 6;

  std::vector<synth::GeneratedScene> scenes;
  std::vector<bev::BevGrid> maps;
  std::vector<aug::InsertableObject> bank;
  for (int i = 0; i < 2; ++i) {
    synth::SceneSpec spec =
        street_spec("scene_" + std::to_string(i), static_cast<double>(i),
                    i == 1);
    spec.sensor.beams = 32;
    spec.sensor.azimuth_steps = 1024;
    scenes.push_back(synth::generate(spec));
    maps.push_back(build_map(scenes.back().scan, cfg));
    io::Scene s;
    s.scan = scenes.back().scan;
    s.boxes = scenes.back().boxes;
    s.box_class_ids = scenes.back().box_class_ids;
    const auto objs = build_bank_from_scene(s, cfg);
    bank.insert(bank.end(), objs.begin(), objs.end());
  }
  ACCEPT_CHECK(bank.size() >= 3, "bank too small for the contract check");

  std::size_t total_insertions = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto& gen = scenes[seed % scenes.size()];
    const auto& map = maps[seed % scenes.size()];
    Rng rng(seed);
    const auto res = aug::augment_scene(gen.scan, gen.boxes, gen.box_class_ids,
                                        bank, map, cfg.augment, rng);

    for (std::size_t k = 0; k < res.report.insertions.size(); ++k) {
      const auto& ins = res.report.insertions[k];
      const OrientedBox& box = res.boxes[gen.boxes.size() + k];
      const aug::InsertableObject& src = bank[ins.bank_index];

      // (a) Footprint fully on the class surface with known ground; dense
      // interior sampling as an independent cell enumeration.
      const bool want_road = src.cls.surface_kind == SurfaceKind::Road;
      const geom::FitRect fp = footprint(box);
      const Vec2 dir{std::cos(fp.yaw), std::sin(fp.yaw)};
      const Vec2 nrm = dir.perp();
      for (int i = 0; i <= 24; ++i) {
        for (int j = 0; j <= 24; ++j) {
          const double u = (i / 24.0 - 0.5) * fp.length;
          const double v = (j / 24.0 - 0.5) * fp.width;
          const Vec2 p = fp.center + dir * u + nrm * v;
          const bev::Cell* cell = map.cell_at(p.x, p.y);
          ACCEPT_CHECK(cell != nullptr, "footprint outside the map");
          ACCEPT_CHECK(want_road ? cell->road : cell->pedestrian,
                       "footprint cell lacks the surface flag");
          ACCEPT_CHECK(cell->has_elevation(), "footprint cell lacks ground");
        }
      }

      // (b) No box overlap with anything else in the result.
      for (std::size_t other = 0; other < res.boxes.size(); ++other) {
        if (other == gen.boxes.size() + k) continue;
        ACCEPT_CHECK(!geom::rects_overlap(fp, footprint(res.boxes[other])),
                     "inserted box overlaps another box");
      }

      // (c) Added points exceed the class minimum, measured from the output
      // instance channel rather than the report.
      std::size_t measured = 0;
      for (std::size_t p = 0; p < res.scan.points.size(); ++p)
        if ((*res.scan.instances)[p] == ins.instance_id) ++measured;
      ACCEPT_CHECK(
          measured > static_cast<std::size_t>(min_points.at(src.cls.id)),
          "insertion below the class minimum point count");
      ACCEPT_CHECK(measured == ins.added_points, "report added count wrong");

      // (d) Range preserved within tolerance, recomputed from the bank.
      const double src_range = src.box.center_bev().norm();
      const double placed_range = box.center_bev().norm();
      ACCEPT_CHECK(std::abs(placed_range - src_range) <= range_tolerance,
                   "source range not preserved");
      ++total_insertions;
    }
  }
  ACCEPT_CHECK(total_insertions >= 100,
               "too few committed insertions to trust the contract check");
}

// --------------------------------------------------------------------------
// criterion 6: parameter conformance
// --------------------------------------------------------------------------

void criterion_parameters() {
  const RunConfig cfg;
  ACCEPT_CHECK(cfg.cell_size == 1.0, "cell size default");
  ACCEPT_CHECK(cfg.road_seed_radius == 3, "road closing seed default");
  ACCEPT_CHECK(cfg.pedestrian_border_cells == 2, "pedestrian border default");
  ACCEPT_CHECK(cfg.pedestrian_seed_radius == 2, "pedestrian seed default");
  ACCEPT_CHECK(cfg.augment.projection.closing_rows == 5 &&
                   cfg.augment.projection.closing_cols == 3,
               "range-image closing seed default");
  ACCEPT_CHECK(cfg.augment.max_objects_per_scene == 10,
               "max insertions default");
  ACCEPT_CHECK(cfg.augment.global_aug.scale_min == 0.95 &&
                   cfg.augment.global_aug.scale_max == 1.05,
               "global scale default");
  ACCEPT_CHECK(cfg.augment.global_aug.rotation_min == deg_to_rad(-45.0) &&
                   cfg.augment.global_aug.rotation_max == deg_to_rad(45.0),
               "global rotation default");
  ACCEPT_CHECK(cfg.augment.global_aug.flip_over_x, "flip default");

  const std::map<std::string, int> expect_min = {
      {"bicycle", 10}, {"motorcycle", 10}, {"truck", 40},
      {"person", 20},  {"bicyclist", 30},  {"motorcyclist", 30}};
  ACCEPT_CHECK(cfg.classes.size() == expect_min.size(), "class table size");
  for (const auto& [name, points] : expect_min) {
    const SemanticClass* cls = cfg.find_class(name);
    ACCEPT_CHECK(cls != nullptr, "class missing: " + name);
    ACCEPT_CHECK(cls->min_insert_points == points,
                 "min point count wrong for " + name);
    const bool want_ped = name == "person";
    ACCEPT_CHECK((cls->surface_kind == SurfaceKind::PedestrianArea) == want_ped,
                 "surface kind wrong for " + name);
  }

  // The config a run echoes to disk carries the same defaults.
  const fs::path path = scratch_dir() / "default_config.json";
  save_run_config(cfg, path.string());
  const RunConfig back = load_run_config(path.string());
  ACCEPT_CHECK(back.cell_size == 1.0 && back.road_seed_radius == 3 &&
                   back.augment.max_objects_per_scene == 10,
               "defaults do not survive the config file");
}

// --------------------------------------------------------------------------
// criterion 7: determinism & round-trips
// --------------------------------------------------------------------------

void write_sequence_spec(const fs::path& path, int scenes) {
  std::vector<synth::SceneSpec> specs;
  for (int i = 0; i < scenes; ++i) {
    synth::SceneSpec spec;
    std::ostringstream id;
    id << "scene_" << std::setw(3) << std::setfill('0') << i;
    spec.frame_id = id.str();
    spec.sensor.max_range = 60;
    spec.roads.push_back({0, 0, 70, 12, 0});
    spec.sidewalks.push_back({0, 9, 70, 6, 0});
    spec.sidewalks.push_back({0, -9, 70, 6, 0});
    spec.walls.push_back({{-30, 13}, {30, 13}, -1.73, 4});
    const double j = 0.4 * i;
    spec.objects.push_back({30, 0.6, 0.6, 1.7, 9 + j, 7.2, 0.3 + 0.1 * i});
    spec.objects.push_back({31, 1.75 + 0.02 * i, 0.6, 1.7, -11 - j, 2, 1.2});
    spec.objects.push_back({11, 1.7, 0.55 + 0.01 * i, 1.1, 13 + j, -2, 2.1});
    spec.objects.push_back({15, 2.1, 0.8, 1.4 + 0.02 * i, -8, -3 + j, 0.7});
    spec.objects.push_back({32, 2.1, 0.8, 1.6, 17 - j, 2.5, -0.6});
    spec.objects.push_back({18, 6.5 + 0.1 * i, 2.4, 3.0, 23, -3.5, 0.05});
    specs.push_back(spec);
  }
  synth::write_spec_json(specs, path.string());
}

void criterion_determinism() {
  const fs::path dir = scratch_dir() / "determinism";
  fs::create_directories(dir);
  write_sequence_spec(dir / "spec.json", 3);
  ACCEPT_CHECK(run_cli("synth --spec " + (dir / "spec.json").string() +
                       " --out " + (dir / "scenes").string()) == 0,
               "synth failed");

  const std::string in = (dir / "scenes").string();
  ACCEPT_CHECK(run_cli("augment --in " + in + " --out " + (dir / "a").string() +
                       " --seed 7 --jobs 1") == 0,
               "augment run a failed");
  ACCEPT_CHECK(run_cli("augment --in " + in + " --out " + (dir / "b").string() +
                       " --seed 7 --jobs 1") == 0,
               "augment run b failed");
  ACCEPT_CHECK(run_cli("augment --in " + in + " --out " + (dir / "c").string() +
                       " --seed 7 --jobs 3") == 0,
               "augment run c failed");

  int compared_files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    ACCEPT_CHECK(slurp(entry.path()) == slurp(dir / "b" / name),
                 "rerun differs: " + name.string());
    ACCEPT_CHECK(slurp(entry.path()) == slurp(dir / "c" / name),
                 "--jobs changes output: " + name.string());
    ++compared_files;
  }
  ACCEPT_CHECK(compared_files >= 5, "determinism compared too few files");

  // Binary round-trips on random payloads.
  Rng rng(0xC7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(400);
    LidarScan scan;
    for (std::size_t i = 0; i < n; ++i)
      scan.points.push_back({rng.uniform_real(-100, 100),
                             rng.uniform_real(-100, 100),
                             rng.uniform_real(-10, 10),
                             static_cast<float>(rng.uniform_real(0, 1))});
    const fs::path bin = scratch_dir() / "rt.bin";
    io::write_scan(scan, bin.string());
    const LidarScan back = io::read_scan(bin.string());
    const fs::path bin2 = scratch_dir() / "rt2.bin";
    io::write_scan(back, bin2.string());
    ACCEPT_CHECK(slurp(bin) == slurp(bin2), "velodyne round-trip not stable");

    std::vector<std::uint16_t> labels(n), instances(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<std::uint16_t>(rng.uniform_index(65536));
      instances[i] = static_cast<std::uint16_t>(rng.uniform_index(65536));
    }
    const fs::path lab = scratch_dir() / "rt.label";
    io::write_labels(labels, instances, lab.string());
    const auto ch = io::read_labels(lab.string(), static_cast<std::int64_t>(n));
    ACCEPT_CHECK(ch.labels == labels && ch.instances == instances,
                 "label round-trip lost bits");
  }

  // Scene JSON: write(read(write(x))) byte-identical, floats exact.
  Rng rng2(0xC7A);
  io::Scene scene;
  scene.scan.frame_id = "rt";
  scene.scan.labels.emplace();
  scene.scan.instances.emplace();
  for (int i = 0; i < 500; ++i) {
    scene.scan.points.push_back({rng2.uniform_real(-80, 80),
                                 rng2.uniform_real(-80, 80),
                                 rng2.uniform_real(-4, 4),
                                 static_cast<float>(rng2.uniform_real(0, 1))});
    scene.scan.labels->push_back(
        static_cast<std::uint16_t>(rng2.uniform_index(65536)));
    scene.scan.instances->push_back(
        static_cast<std::uint16_t>(rng2.uniform_index(65536)));
  }
  for (int i = 0; i < 8; ++i) {
    scene.boxes.emplace_back(
        rng2.uniform_real(-30, 30), rng2.uniform_real(-30, 30),
        rng2.uniform_real(-2, 0), rng2.uniform_real(0.5, 5),
        rng2.uniform_real(0.5, 2), rng2.uniform_real(1, 2),
        rng2.uniform_real(-kPi, kPi));
    scene.box_class_ids.push_back(static_cast<int>(rng2.uniform_index(99)));
  }
  const fs::path s1 = scratch_dir() / "scene1.json";
  const fs::path s2 = scratch_dir() / "scene2.json";
  io::write_scene_json(scene, s1.string());
  const io::Scene back = io::read_scene_json(s1.string());
  io::write_scene_json(back, s2.string());
  ACCEPT_CHECK(slurp(s1) == slurp(s2), "scene json round-trip not stable");
  for (std::size_t i = 0; i < scene.scan.points.size(); ++i) {
    ACCEPT_CHECK(
        back.scan.points[i].x == scene.scan.points[i].x &&
            back.scan.points[i].intensity == scene.scan.points[i].intensity,
        "scene json lost float precision");
  }

  // Pose file: values exact after one round-trip.
  std::vector<Pose> poses;
  for (int i = 0; i < 10; ++i) {
    Pose p;
    p.rotation = Mat3::rotation_z(rng2.uniform_real(-kPi, kPi));
    p.translation = {rng2.uniform_real(-100, 100),
                     rng2.uniform_real(-100, 100), rng2.uniform_real(-5, 5)};
    poses.push_back(p);
  }
  const fs::path pose_path = scratch_dir() / "poses.txt";
  io::write_poses(poses, pose_path.string());
  const auto poses_back = io::read_poses(pose_path.string());
  ACCEPT_CHECK(poses_back.size() == poses.size(), "pose count changed");
  for (std::size_t i = 0; i < poses.size(); ++i)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        ACCEPT_CHECK(poses_back[i].rotation(r, c) == poses[i].rotation(r, c),
                     "pose rotation lost precision");
}

// --------------------------------------------------------------------------
// criterion 8: end-to-end smoke
// --------------------------------------------------------------------------

void criterion_smoke() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = scratch_dir() / "smoke";
  fs::create_directories(dir);
  write_sequence_spec(dir / "spec.json", 10);

  ACCEPT_CHECK(run_cli("synth --spec " + (dir / "spec.json").string() +
                       " --out " + (dir / "scenes").string()) == 0,
               "synth failed");
  ACCEPT_CHECK(run_cli("make-maps --in " + (dir / "scenes").string() +
                       " --out " + (dir / "maps").string()) == 0,
               "make-maps failed");
  ACCEPT_CHECK(run_cli("stats --in " + (dir / "scenes").string() + " --out " +
                       (dir / "stats.txt").string()) == 0,
               "stats failed");
  ACCEPT_CHECK(run_cli("augment --in " + (dir / "scenes").string() +
                       " --out " + (dir / "aug").string() + " --maps " +
                       (dir / "maps").string() + " --stats " +
                       (dir / "stats.txt").string() + " --seed 12") == 0,
               "augment failed");

  const auto stats = boxfit::read_stats((dir / "stats.txt").string());
  for (const int cls : {11, 15, 18, 30, 31, 32}) {
    ACCEPT_CHECK(stats.count(cls) == 1,
                 "stats missing class " + std::to_string(cls));
    ACCEPT_CHECK(
        stats.at(cls).min_l > 0 && stats.at(cls).min_l <= stats.at(cls).max_l,
        "stats bounds inverted");
  }

  std::ifstream rf(dir / "aug" / "report.json");
  ACCEPT_CHECK(rf.good(), "report.json missing");
  const json report = json::parse(rf);
  std::map<int, int> totals;
  for (const auto& scene : report["scenes"])
    for (const auto& ins : scene["insertions"])
      totals[ins["class_id"].get<int>()] += 1;
  for (const int cls : {11, 15, 18, 30, 31, 32})
    ACCEPT_CHECK(totals[cls] >= 1,
                 "no insertion for class " + std::to_string(cls));

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ACCEPT_CHECK(elapsed < 120.0, "smoke exceeded the 120 s budget");
}

struct Criterion {
  int number;
  std::string name;
  std::function<void()> run;
  double budget_seconds;  // 0 = no explicit budget
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "geometry oracle equivalence", criterion_geometry, 60.0},
      {2, "morphology laws", criterion_morphology, 0.0},
      {3, "box-fitting recovery", criterion_box_fitting, 0.0},
      {4, "occlusion correctness", criterion_occlusion, 0.0},
      {5, "placement contract", criterion_placement_contract, 0.0},
      {6, "parameter conformance", criterion_parameters, 0.0},
      {7, "determinism and round-trips", criterion_determinism, 0.0},
      {8, "end-to-end smoke", criterion_smoke, 120.0},
  };

  scratch_dir();  // reset once up front
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.run();
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (error.empty() && criterion.budget_seconds > 0 &&
        elapsed > criterion.budget_seconds) {
      error =
          "exceeded " + std::to_string(criterion.budget_seconds) + " s budget";
    }
    std::ostringstream line;
    line << "criterion " << criterion.number << " ["
         << (error.empty() ? "PASS" : "FAIL") << "] " << criterion.name << " ("
         << std::fixed << std::setprecision(1) << elapsed << "s)";
    if (!error.empty()) line << " -- " << error;
    std::cout << line.str() << std::endl;
    failures += error.empty() ? 0 : 1;
  }
  if (failures != 0)
    std::cout << failures << " criterion(s) failed" << std::endl;
  else
    std::cout << "all acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
