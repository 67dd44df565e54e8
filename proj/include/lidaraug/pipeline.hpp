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

#ifndef LIDARAUG_PIPELINE_HPP
#define LIDARAUG_PIPELINE_HPP

#include <map>
#include <optional>
#include <vector>

#include "lidaraug/augmentor.hpp"
#include "lidaraug/bev_map.hpp"
#include "lidaraug/box_fitting.hpp"
#include "lidaraug/kitti_io.hpp"
#include "lidaraug/run_config.hpp"

namespace lidaraug {

/// Placement map for one labeled scan: rasterize, close the road mask,
/// derive the pedestrian area.
bev::BevGrid build_map(const LidarScan& scan, const RunConfig& cfg);

/// Cuts every insertable-class object out of a scene into bank entries.
/// Segmentation scenes are grouped by (label, instance) and box-fitted;
/// detection scenes use the provided ground-truth boxes. Objects whose box
/// stays degenerate or whose cutout is empty are skipped.
std::vector<aug::InsertableObject> build_bank_from_scene(
    const io::Scene& scene, const RunConfig& cfg,
    const std::map<int, boxfit::ClassDimStats>& stats = {});

/// Dimension samples (class, l, w, h) from one scene, for stats computation.
/// Uses ground-truth boxes when present, otherwise fits boxes per instance.
std::vector<boxfit::ClassDimSample> dim_samples_from_scene(
    const io::Scene& scene, const RunConfig& cfg);

enum class AugmentMode { Real3d, Naive };

/// One scene through the insertion pipeline with a scene-local rng seed.
aug::AugmentResult augment_one(const io::Scene& scene, const bev::BevGrid& map,
                               const std::vector<aug::InsertableObject>& bank,
                               const RunConfig& cfg, std::uint64_t scene_seed,
                               AugmentMode mode,
                               std::optional<aug::GlobalAugDraw>* global_draw = nullptr,
                               bool apply_global = false);

}  // namespace lidaraug

#endif  // LIDARAUG_PIPELINE_HPP
