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

#ifndef LIDARAUG_AUGMENTOR_HPP
#define LIDARAUG_AUGMENTOR_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lidaraug/bev_map.hpp"
#include "lidaraug/rng.hpp"
#include "lidaraug/spherical.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug::aug {

enum class Task { Detection, Segmentation };

// A cut-out object: its points in the source sensor frame, the box around
// them, and the horizontal distance of the box center from the source
// sensor. Insertion keeps that distance so point density and intensity stay
// physical.
struct InsertableObject {
  std::vector<Point> points;
  OrientedBox box;
  SemanticClass cls;
  double source_range = 0.0;
  std::string source_frame;
  std::string difficulty;  // empty = untagged
};

// One candidate pose for an object: a rotation about the sensor's vertical
// axis plus the resulting box, seated on the map's ground level.
struct PlacementCandidate {
  double yaw_offset = 0.0;
  OrientedBox box;
  double ground_z = 0.0;
};

struct GlobalAugConfig {
  double scale_min = 0.95;
  double scale_max = 1.05;
  double rotation_min = deg_to_rad(-45.0);
  double rotation_max = deg_to_rad(45.0);
  bool flip_over_x = true;
};

struct AugmentConfig {
  int max_objects_per_scene = 10;
  int max_attempts_per_object = 25;
  double range_tolerance = 0.5;  // half a default map cell
  GlobalAugConfig global_aug;
  std::uint64_t rng_seed = 1;
  Task task = Task::Segmentation;
  sph::ProjectionParams projection;
};

struct ExtractOptions {
  std::optional<std::uint16_t> instance_id;  // Segmentation: filter by this
  std::set<int> road_class_ids;              // Detection: dropped from cutout
  std::set<int> sidewalk_class_ids;
};

/// Cuts an object out of a scan: points inside the box, filtered by task
/// (Segmentation keeps the object's label/instance; Detection drops
/// road/sidewalk-labeled points). Throws TooFewPoints when nothing is left.
InsertableObject extract_object(const LidarScan& scan, const OrientedBox& box,
                                const SemanticClass& cls, Task task,
                                const ExtractOptions& opts = {});

// Lazy placement search: yaw rotations about the frame origin, in seeded
// random order, filtered to candidates whose footprint lies fully on cells
// of the object's surface kind (all with elevation) and collides with no
// scene box. Exhausted enumerator = no valid placement.
class PlacementEnumerator {
 public:
  PlacementEnumerator(const InsertableObject& obj, const bev::BevGrid& map,
                      const std::vector<OrientedBox>& scene_boxes, Rng& rng,
                      double range_tolerance = 0.5);

  /// Next valid candidate, or nullopt when exhausted.
  std::optional<PlacementCandidate> next();

 private:
  const InsertableObject& obj_;
  const bev::BevGrid& map_;
  std::vector<OrientedBox> scene_boxes_;
  std::vector<double> yaw_offsets_;
  std::size_t cursor_ = 0;
  double range_tolerance_;
};

/// Applies a candidate to the object: rotate points and box by yaw_offset
/// about the origin's z-axis, then shift vertically so the box bottom rests
/// on the candidate's ground level. Ranges from the origin are preserved.
InsertableObject place_object(const InsertableObject& obj,
                              const PlacementCandidate& cand);

struct InsertionRecord {
  int class_id = 0;
  std::string class_name;
  std::uint16_t instance_id = 0;
  OrientedBox box;
  double yaw_offset = 0.0;
  double source_range = 0.0;
  double placed_range = 0.0;
  std::size_t added_points = 0;
  std::size_t removed_points = 0;
  std::size_t bank_index = 0;
};

struct FailureRecord {
  int class_id = 0;
  std::string class_name;
  std::string reason;  // "no_valid_placement" | "occlusion_rejected"
  int attempts = 0;
};

struct AugmentReport {
  std::vector<InsertionRecord> insertions;
  std::vector<FailureRecord> failures;

  std::size_t insertions_of_class(int class_id) const {
    std::size_t n = 0;
    for (const auto& ins : insertions) n += (ins.class_id == class_id) ? 1 : 0;
    return n;
  }
};

struct AugmentResult {
  LidarScan scan;
  std::vector<OrientedBox> boxes;          // original + inserted
  std::vector<int> box_class_ids;          // parallel to boxes
  AugmentReport report;
};

/// Full insertion pipeline for one scene: up to max_objects_per_scene times,
/// pick a class uniformly from the bank, pick an object of that class, walk
/// its placement candidates and resolve occlusion; commit on success (the
/// committed box becomes an obstacle for later insertions).
/// scene_box_classes is parallel to scene_boxes (class id per original box;
/// pass empty when unknown).
AugmentResult augment_scene(const LidarScan& scene,
                            const std::vector<OrientedBox>& scene_boxes,
                            const std::vector<int>& scene_box_classes,
                            const std::vector<InsertableObject>& bank,
                            const bev::BevGrid& map, const AugmentConfig& cfg,
                            Rng& rng);

/// Naive copy-paste baseline: objects inserted at their original source
/// positions with box-collision rejection only; no surface check, no
/// occlusion handling.
AugmentResult naive_gt_aug(const LidarScan& scene,
                           const std::vector<OrientedBox>& scene_boxes,
                           const std::vector<int>& scene_box_classes,
                           const std::vector<InsertableObject>& bank,
                           const AugmentConfig& cfg, Rng& rng);

struct GlobalAugDraw {
  double scale = 1.0;
  double rotation = 0.0;
  bool flip = false;
};

/// Whole-scene augmentation: one uniform scale, one z rotation, and an
/// optional flip of y -> -y (boxes mirrored: cy -> -cy, yaw -> -yaw).
/// Returns the drawn parameters for reproducibility.
GlobalAugDraw global_augment(LidarScan& scan, std::vector<OrientedBox>& boxes,
                             const GlobalAugConfig& cfg, Rng& rng);

/// global_augment with pre-drawn parameters (deterministic replay).
void apply_global_augment(LidarScan& scan, std::vector<OrientedBox>& boxes,
                          const GlobalAugDraw& draw);

}  // namespace lidaraug::aug

#endif  // LIDARAUG_AUGMENTOR_HPP
