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

#ifndef LIDARAUG_RUN_CONFIG_HPP
#define LIDARAUG_RUN_CONFIG_HPP

#include <set>
#include <string>
#include <vector>

#include "lidaraug/augmentor.hpp"
#include "lidaraug/types.hpp"

namespace lidaraug {

/// Insertable classes with their placement surfaces and minimum surviving
/// point counts: bicycle 10, motorcycle 10, truck 40, person 20,
/// bicyclist 30, motorcyclist 30 (ids follow the SemanticKITTI scheme).
std::vector<SemanticClass> default_class_table();

// Pipeline-wide configuration. The defaults are the reference operating
// point: 1 m map cells, disk(3) road closing, 2-cell border + disk(2)
// pedestrian dilation, 64x2048 range image with a 5x3 closing seed, at most
// 10 insertions per scene, global scale [0.95, 1.05], rotation +-45 deg.
struct RunConfig {
  double cell_size = 1.0;
  int road_seed_radius = 3;
  int pedestrian_border_cells = 2;
  int pedestrian_seed_radius = 2;
  int pad_cells = 8;

  std::set<int> road_class_ids = {40};
  std::set<int> sidewalk_class_ids = {48};
  std::vector<SemanticClass> classes = default_class_table();

  aug::AugmentConfig augment;

  const SemanticClass* find_class(int id) const {
    for (const SemanticClass& c : classes)
      if (c.id == id) return &c;
    return nullptr;
  }
  const SemanticClass* find_class(const std::string& name) const {
    for (const SemanticClass& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Config file round-trip (JSON). Unknown keys are rejected so typos fail
/// loudly. Missing keys keep their defaults.
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);

}  // namespace lidaraug

#endif  // LIDARAUG_RUN_CONFIG_HPP
