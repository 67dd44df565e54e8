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

#include "lidaraug/pipeline.hpp"

#include <algorithm>

#include "lidaraug/errors.hpp"

namespace lidaraug {

bev::BevGrid build_map(const LidarScan& scan, const RunConfig& cfg) {
  bev::BevGrid grid = bev::rasterize(scan, cfg.road_class_ids,
                                     cfg.sidewalk_class_ids, cfg.cell_size,
                                     cfg.pad_cells);
  grid = bev::close_road(grid,
                         bev::StructuringElement::disk(cfg.road_seed_radius));
  grid = bev::derive_pedestrian_area(
      grid, cfg.pedestrian_border_cells,
      bev::StructuringElement::disk(cfg.pedestrian_seed_radius));
  return grid;
}

namespace {

// Segmentation: one bank entry per (insertable class, instance) group.
std::vector<aug::InsertableObject> bank_from_instances(
    const io::Scene& scene, const RunConfig& cfg,
    const std::map<int, boxfit::ClassDimStats>& stats) {
  std::vector<aug::InsertableObject> bank;
  const LidarScan& scan = scene.scan;
  if (!scan.labels || !scan.instances) return bank;

  std::map<std::pair<int, std::uint16_t>, std::vector<Point>> groups;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const int label = (*scan.labels)[i];
    if (cfg.find_class(label) == nullptr) continue;
    groups[{label, (*scan.instances)[i]}].push_back(scan.points[i]);
  }

  for (const auto& [key, points] : groups) {
    const SemanticClass* cls = cfg.find_class(key.first);
    // Seat the cutout box on its lowest point: placement re-seats the bottom
    // on the target road, and this keeps every point inside the box.
    double min_z = points.front().z;
    for (const Point& p : points) min_z = std::min(min_z, p.z);
    OrientedBox box = boxfit::fit_box(points, min_z);
    const auto it = stats.find(cls->id);
    if (it != stats.end()) box = boxfit::refine_box(box, it->second);
    if (box.degenerate()) continue;

    LidarScan group_scan;
    group_scan.frame_id = scan.frame_id;
    group_scan.points = points;
    group_scan.labels.emplace(points.size(), static_cast<std::uint16_t>(cls->id));
    group_scan.instances.emplace(points.size(), key.second);
    try {
      aug::ExtractOptions opts;
      opts.instance_id = key.second;
      bank.push_back(aug::extract_object(group_scan, box, *cls,
                                         aug::Task::Segmentation, opts));
    } catch (const TooFewPoints&) {
      continue;
    }
    if (bank.back().source_range <= 0.0) bank.pop_back();
  }
  return bank;
}

// Detection: one bank entry per ground-truth box of an insertable class.
std::vector<aug::InsertableObject> bank_from_boxes(
    const io::Scene& scene, const RunConfig& cfg,
    const std::map<int, boxfit::ClassDimStats>& stats) {
  std::vector<aug::InsertableObject> bank;
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    const int cls_id =
        i < scene.box_class_ids.size() ? scene.box_class_ids[i] : 0;
    const SemanticClass* cls = cfg.find_class(cls_id);
    if (cls == nullptr) continue;
    OrientedBox box = scene.boxes[i];
    const auto it = stats.find(cls_id);
    if (it != stats.end()) box = boxfit::refine_box(box, it->second);
    if (box.degenerate()) continue;
    try {
      aug::ExtractOptions opts;
      opts.road_class_ids = cfg.road_class_ids;
      opts.sidewalk_class_ids = cfg.sidewalk_class_ids;
      bank.push_back(aug::extract_object(scene.scan, box, *cls,
                                         aug::Task::Detection, opts));
    } catch (const TooFewPoints&) {
      continue;
    }
    if (bank.back().source_range <= 0.0) bank.pop_back();
  }
  return bank;
}

}  // namespace

std::vector<aug::InsertableObject> build_bank_from_scene(
    const io::Scene& scene, const RunConfig& cfg,
    const std::map<int, boxfit::ClassDimStats>& stats) {
  return cfg.augment.task == aug::Task::Segmentation
             ? bank_from_instances(scene, cfg, stats)
             : bank_from_boxes(scene, cfg, stats);
}

std::vector<boxfit::ClassDimSample> dim_samples_from_scene(
    const io::Scene& scene, const RunConfig& cfg) {
  std::vector<boxfit::ClassDimSample> samples;
  if (!scene.boxes.empty()) {
    for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
      const int cls_id =
          i < scene.box_class_ids.size() ? scene.box_class_ids[i] : 0;
      if (cfg.find_class(cls_id) == nullptr) continue;
      const OrientedBox& b = scene.boxes[i];
      samples.push_back({cls_id, b.l, b.w, b.h});
    }
    return samples;
  }
  for (const aug::InsertableObject& obj :
       bank_from_instances(scene, cfg, {})) {
    samples.push_back({obj.cls.id, obj.box.l, obj.box.w, obj.box.h});
  }
  return samples;
}

aug::AugmentResult augment_one(const io::Scene& scene, const bev::BevGrid& map,
                               const std::vector<aug::InsertableObject>& bank,
                               const RunConfig& cfg, std::uint64_t scene_seed,
                               AugmentMode mode,
                               std::optional<aug::GlobalAugDraw>* global_draw,
                               bool apply_global) {
  Rng rng(scene_seed);
  aug::AugmentConfig acfg = cfg.augment;
  aug::AugmentResult res =
      mode == AugmentMode::Real3d
          ? aug::augment_scene(scene.scan, scene.boxes, scene.box_class_ids,
                               bank, map, acfg, rng)
          : aug::naive_gt_aug(scene.scan, scene.boxes, scene.box_class_ids,
                              bank, acfg, rng);
  if (apply_global) {
    const aug::GlobalAugDraw draw =
        aug::global_augment(res.scan, res.boxes, acfg.global_aug, rng);
    if (global_draw != nullptr) *global_draw = draw;
  }
  return res;
}

}  // namespace lidaraug
