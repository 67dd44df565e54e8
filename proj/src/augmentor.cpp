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

#include "lidaraug/augmentor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lidaraug/core.hpp"
#include "lidaraug/errors.hpp"
#include "lidaraug/geometry.hpp"

namespace lidaraug::aug {

InsertableObject extract_object(const LidarScan& scan, const OrientedBox& box,
                                const SemanticClass& cls, Task task,
                                const ExtractOptions& opts) {
  if (task == Task::Segmentation && (!scan.labels || !scan.instances))
    throw MissingLabels(
        "extract_object: segmentation extraction needs labels and instances");

  InsertableObject obj;
  obj.box = box;
  obj.cls = cls;
  obj.source_frame = scan.frame_id;

  for (const std::uint32_t i : points_in_box(scan, box)) {
    if (task == Task::Segmentation) {
      if ((*scan.labels)[i] != static_cast<std::uint16_t>(cls.id)) continue;
      if (opts.instance_id && (*scan.instances)[i] != *opts.instance_id)
        continue;
    } else if (scan.labels) {
      const int label = (*scan.labels)[i];
      if (opts.road_class_ids.count(label) ||
          opts.sidewalk_class_ids.count(label))
        continue;
    }
    obj.points.push_back(scan.points[i]);
  }

  if (obj.points.empty())
    throw TooFewPoints("extract_object: empty cutout for class " + cls.name +
                       " in frame " + scan.frame_id);
  obj.source_range = box.center_bev().norm();
  return obj;
}

PlacementEnumerator::PlacementEnumerator(
    const InsertableObject& obj, const bev::BevGrid& map,
    const std::vector<OrientedBox>& scene_boxes, Rng& rng,
    double range_tolerance)
    : obj_(obj), map_(map), scene_boxes_(scene_boxes),
      range_tolerance_(range_tolerance) {
  // Step fine enough that consecutive rotations land in adjacent map cells.
  const double step =
      std::min(map.spec().cell_size / std::max(obj.source_range, 1e-6),
               2.0 * kPi);
  const int count = std::max(1, static_cast<int>(std::floor(2.0 * kPi / step)));
  yaw_offsets_.reserve(count);
  for (int k = 0; k < count; ++k) yaw_offsets_.push_back(k * step);
  rng.shuffle(yaw_offsets_);
}

std::optional<PlacementCandidate> PlacementEnumerator::next() {
  const SurfaceKind kind = obj_.cls.surface_kind;
  while (cursor_ < yaw_offsets_.size()) {
    const double yaw_offset = yaw_offsets_[cursor_++];
    const Vec2 center = obj_.box.center_bev().rotated(yaw_offset);

    const bev::Cell* center_cell = map_.cell_at(center.x, center.y);
    if (center_cell == nullptr || !center_cell->has_elevation()) continue;
    const bool center_ok = (kind == SurfaceKind::Road) ? center_cell->road
                                                       : center_cell->pedestrian;
    if (!center_ok) continue;

    const double ground_z = center_cell->elevation();
    OrientedBox box(center.x, center.y, ground_z + obj_.box.h / 2.0,
                    obj_.box.l, obj_.box.w, obj_.box.h,
                    obj_.box.yaw + yaw_offset);

    // The whole footprint must lie on valid cells of the right kind.
    const geom::FitRect fp = footprint(box);
    const auto corners = fp.corners();
    double min_x = corners[0].x, max_x = corners[0].x;
    double min_y = corners[0].y, max_y = corners[0].y;
    for (const Vec2& c : corners) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
    int r0, c0, r1, c1;
    bool bounds_ok = map_.cell_index(min_x, min_y, r0, c0) &&
                     map_.cell_index(max_x, max_y, r1, c1);
    if (!bounds_ok) continue;

    const double cell = map_.spec().cell_size;
    bool surface_ok = true;
    for (int r = r0; r <= r1 && surface_ok; ++r) {
      for (int c = c0; c <= c1; ++c) {
        geom::FitRect cell_rect;
        cell_rect.center = map_.cell_center(r, c);
        cell_rect.length = cell;
        cell_rect.width = cell;
        cell_rect.yaw = 0.0;
        if (!geom::rects_overlap(fp, cell_rect)) continue;
        const bev::Cell& cc = map_.at(r, c);
        const bool kind_ok = (kind == SurfaceKind::Road) ? cc.road : cc.pedestrian;
        if (!kind_ok || !cc.has_elevation()) {
          surface_ok = false;
          break;
        }
      }
    }
    if (!surface_ok) continue;

    bool collides = false;
    for (const OrientedBox& other : scene_boxes_) {
      if (geom::rects_overlap(fp, footprint(other))) {
        collides = true;
        break;
      }
    }
    if (collides) continue;

    if (std::abs(box.center_bev().norm() - obj_.source_range) >
        range_tolerance_)
      continue;

    PlacementCandidate cand;
    cand.yaw_offset = yaw_offset;
    cand.box = box;
    cand.ground_z = ground_z;
    return cand;
  }
  return std::nullopt;
}

InsertableObject place_object(const InsertableObject& obj,
                              const PlacementCandidate& cand) {
  InsertableObject placed = obj;
  const double dz = cand.ground_z - obj.box.bottom_z();
  for (Point& p : placed.points) {
    const Vec2 xy = Vec2{p.x, p.y}.rotated(cand.yaw_offset);
    p.x = xy.x;
    p.y = xy.y;
    p.z += dz;
  }
  placed.box = cand.box;
  return placed;
}

namespace {

std::uint16_t next_instance_id(const LidarScan& scan) {
  std::uint16_t next = 1;
  if (scan.instances)
    for (const std::uint16_t id : *scan.instances)
      next = std::max<std::uint16_t>(next, static_cast<std::uint16_t>(id + 1));
  return next;
}

// Bank view: objects eligible for insertion (untagged or easy), grouped by
// class, in stable bank order.
struct BankView {
  std::vector<int> class_ids;                        // sorted unique
  std::map<int, std::vector<std::size_t>> by_class;  // -> bank indices

  explicit BankView(const std::vector<InsertableObject>& bank) {
    for (std::size_t i = 0; i < bank.size(); ++i) {
      const InsertableObject& obj = bank[i];
      if (!obj.difficulty.empty() && obj.difficulty != "easy") continue;
      by_class[obj.cls.id].push_back(i);
    }
    for (const auto& [cls, _] : by_class) class_ids.push_back(cls);
  }
};

void stamp_appended(LidarScan& scan, std::size_t count, int class_id,
                    std::uint16_t instance_id) {
  if (scan.labels) {
    for (std::size_t k = 0; k < count; ++k)
      scan.labels->push_back(static_cast<std::uint16_t>(class_id));
  }
  if (scan.instances) {
    for (std::size_t k = 0; k < count; ++k)
      scan.instances->push_back(instance_id);
  }
}

}  // namespace

AugmentResult augment_scene(const LidarScan& scene,
                            const std::vector<OrientedBox>& scene_boxes,
                            const std::vector<int>& scene_box_classes,
                            const std::vector<InsertableObject>& bank,
                            const bev::BevGrid& map, const AugmentConfig& cfg,
                            Rng& rng) {
  AugmentResult res;
  res.scan = scene;
  res.boxes = scene_boxes;
  res.box_class_ids = scene_box_classes;
  res.box_class_ids.resize(scene_boxes.size(), 0);

  const BankView view(bank);
  if (view.class_ids.empty() || cfg.max_objects_per_scene <= 0) return res;

  std::uint16_t instance_id = next_instance_id(scene);

  for (int slot = 0; slot < cfg.max_objects_per_scene; ++slot) {
    const int cls_id = view.class_ids[rng.uniform_index(view.class_ids.size())];
    const auto& members = view.by_class.at(cls_id);
    const InsertableObject& obj = bank[members[rng.uniform_index(members.size())]];

    PlacementEnumerator placements(obj, map, res.boxes, rng,
                                   cfg.range_tolerance);
    int attempts = 0;
    bool committed = false;
    bool saw_candidate = false;
    while (attempts < cfg.max_attempts_per_object) {
      const auto cand = placements.next();
      if (!cand) break;
      saw_candidate = true;
      attempts += 1;

      const InsertableObject placed = place_object(obj, *cand);
      sph::OcclusionResult occ =
          sph::resolve_occlusion(res.scan, placed, cfg.projection, instance_id);
      if (!occ.success) continue;

      InsertionRecord rec;
      rec.class_id = obj.cls.id;
      rec.class_name = obj.cls.name;
      rec.instance_id = instance_id;
      rec.box = placed.box;
      rec.yaw_offset = cand->yaw_offset;
      rec.source_range = obj.source_range;
      rec.placed_range = placed.box.center_bev().norm();
      rec.added_points = occ.added_count;
      rec.removed_points = occ.removed_count;
      rec.bank_index = static_cast<std::size_t>(&obj - bank.data());
      res.report.insertions.push_back(rec);

      res.scan = std::move(occ.augmented);
      res.boxes.push_back(placed.box);
      res.box_class_ids.push_back(obj.cls.id);
      instance_id += 1;
      committed = true;
      break;
    }

    if (!committed) {
      FailureRecord fail;
      fail.class_id = obj.cls.id;
      fail.class_name = obj.cls.name;
      fail.reason = saw_candidate ? "occlusion_rejected" : "no_valid_placement";
      fail.attempts = attempts;
      res.report.failures.push_back(fail);
    }
  }
  return res;
}

AugmentResult naive_gt_aug(const LidarScan& scene,
                           const std::vector<OrientedBox>& scene_boxes,
                           const std::vector<int>& scene_box_classes,
                           const std::vector<InsertableObject>& bank,
                           const AugmentConfig& cfg, Rng& rng) {
  AugmentResult res;
  res.scan = scene;
  res.boxes = scene_boxes;
  res.box_class_ids = scene_box_classes;
  res.box_class_ids.resize(scene_boxes.size(), 0);

  const BankView view(bank);
  if (view.class_ids.empty() || cfg.max_objects_per_scene <= 0) return res;

  std::uint16_t instance_id = next_instance_id(scene);

  for (int slot = 0; slot < cfg.max_objects_per_scene; ++slot) {
    const int cls_id = view.class_ids[rng.uniform_index(view.class_ids.size())];
    const auto& members = view.by_class.at(cls_id);
    const std::size_t bank_index = members[rng.uniform_index(members.size())];
    const InsertableObject& obj = bank[bank_index];

    // Collision rejection only; the object stays exactly where it was cut.
    bool collides = false;
    const geom::FitRect fp = footprint(obj.box);
    for (const OrientedBox& other : res.boxes) {
      if (geom::rects_overlap(fp, footprint(other))) {
        collides = true;
        break;
      }
    }
    if (collides) {
      FailureRecord fail;
      fail.class_id = obj.cls.id;
      fail.class_name = obj.cls.name;
      fail.reason = "collision";
      fail.attempts = 1;
      res.report.failures.push_back(fail);
      continue;
    }

    res.scan.points.insert(res.scan.points.end(), obj.points.begin(),
                           obj.points.end());
    stamp_appended(res.scan, obj.points.size(), obj.cls.id, instance_id);

    InsertionRecord rec;
    rec.class_id = obj.cls.id;
    rec.class_name = obj.cls.name;
    rec.instance_id = instance_id;
    rec.box = obj.box;
    rec.source_range = obj.source_range;
    rec.placed_range = obj.source_range;
    rec.added_points = obj.points.size();
    rec.bank_index = bank_index;
    res.report.insertions.push_back(rec);

    res.boxes.push_back(obj.box);
    res.box_class_ids.push_back(obj.cls.id);
    instance_id += 1;
  }
  return res;
}

GlobalAugDraw global_augment(LidarScan& scan, std::vector<OrientedBox>& boxes,
                             const GlobalAugConfig& cfg, Rng& rng) {
  GlobalAugDraw draw;
  draw.scale = rng.uniform_real(cfg.scale_min, cfg.scale_max);
  draw.rotation = rng.uniform_real(cfg.rotation_min, cfg.rotation_max);
  draw.flip = cfg.flip_over_x && rng.bernoulli(0.5);
  apply_global_augment(scan, boxes, draw);
  return draw;
}

void apply_global_augment(LidarScan& scan, std::vector<OrientedBox>& boxes,
                          const GlobalAugDraw& draw) {
  const double s = draw.scale;
  for (Point& p : scan.points) {
    Vec2 xy = Vec2{p.x * s, p.y * s}.rotated(draw.rotation);
    double z = p.z * s;
    if (draw.flip) xy.y = -xy.y;
    p.x = xy.x;
    p.y = xy.y;
    p.z = z;
  }
  for (OrientedBox& b : boxes) {
    Vec2 c = Vec2{b.cx * s, b.cy * s}.rotated(draw.rotation);
    double yaw = b.yaw + draw.rotation;
    if (draw.flip) {
      c.y = -c.y;
      yaw = -yaw;
    }
    b = OrientedBox(c.x, c.y, b.cz * s, b.l * s, b.w * s, b.h * s, yaw);
  }
}

}  // namespace lidaraug::aug
