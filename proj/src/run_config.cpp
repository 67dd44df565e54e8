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

#include "lidaraug/run_config.hpp"

#include <fstream>

#include <json.hpp>

#include "lidaraug/errors.hpp"

namespace lidaraug {

namespace {
using nlohmann::json;
}

std::vector<SemanticClass> default_class_table() {
  return {
      {11, "bicycle", SurfaceKind::Road, 10},
      {15, "motorcycle", SurfaceKind::Road, 10},
      {18, "truck", SurfaceKind::Road, 40},
      {30, "person", SurfaceKind::PedestrianArea, 20},
      {31, "bicyclist", SurfaceKind::Road, 30},
      {32, "motorcyclist", SurfaceKind::Road, 30},
  };
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("'" + path + "': " + e.what());
  }
  if (!j.is_object()) throw SchemaViolation("'" + path + "': not an object");

  static const std::set<std::string> known = {
      "task", "cell_size", "road_seed_radius", "pedestrian_border_cells",
      "pedestrian_seed_radius", "pad_cells", "road_class_ids",
      "sidewalk_class_ids", "classes", "max_objects_per_scene",
      "max_attempts_per_object", "range_tolerance", "global_scale",
      "global_rotation_deg", "global_flip_x", "rng_seed", "range_image"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key))
      throw SchemaViolation("'" + path + "': unknown config key '" + key + "'");

  RunConfig cfg;
  if (j.contains("task")) {
    const std::string task = j["task"].get<std::string>();
    if (task == "detection")
      cfg.augment.task = aug::Task::Detection;
    else if (task == "segmentation")
      cfg.augment.task = aug::Task::Segmentation;
    else
      throw SchemaViolation("'" + path + "': task must be detection|segmentation");
  }
  cfg.cell_size = j.value("cell_size", cfg.cell_size);
  cfg.road_seed_radius = j.value("road_seed_radius", cfg.road_seed_radius);
  cfg.pedestrian_border_cells =
      j.value("pedestrian_border_cells", cfg.pedestrian_border_cells);
  cfg.pedestrian_seed_radius =
      j.value("pedestrian_seed_radius", cfg.pedestrian_seed_radius);
  cfg.pad_cells = j.value("pad_cells", cfg.pad_cells);
  if (j.contains("road_class_ids"))
    cfg.road_class_ids =
        std::set<int>(j["road_class_ids"].begin(), j["road_class_ids"].end());
  if (j.contains("sidewalk_class_ids"))
    cfg.sidewalk_class_ids = std::set<int>(j["sidewalk_class_ids"].begin(),
                                           j["sidewalk_class_ids"].end());
  if (j.contains("classes")) {
    cfg.classes.clear();
    for (const auto& e : j["classes"]) {
      SemanticClass cls;
      cls.id = e.at("id").get<int>();
      cls.name = e.at("name").get<std::string>();
      const std::string surface = e.at("surface").get<std::string>();
      if (surface == "road")
        cls.surface_kind = SurfaceKind::Road;
      else if (surface == "pedestrian")
        cls.surface_kind = SurfaceKind::PedestrianArea;
      else
        throw SchemaViolation("'" + path + "': surface must be road|pedestrian");
      cls.min_insert_points = e.at("min_insert_points").get<int>();
      cfg.classes.push_back(cls);
    }
  }
  cfg.augment.max_objects_per_scene =
      j.value("max_objects_per_scene", cfg.augment.max_objects_per_scene);
  cfg.augment.max_attempts_per_object =
      j.value("max_attempts_per_object", cfg.augment.max_attempts_per_object);
  cfg.augment.range_tolerance =
      j.value("range_tolerance", cfg.augment.range_tolerance);
  if (j.contains("global_scale")) {
    cfg.augment.global_aug.scale_min = j["global_scale"].at(0).get<double>();
    cfg.augment.global_aug.scale_max = j["global_scale"].at(1).get<double>();
  }
  if (j.contains("global_rotation_deg")) {
    cfg.augment.global_aug.rotation_min =
        deg_to_rad(j["global_rotation_deg"].at(0).get<double>());
    cfg.augment.global_aug.rotation_max =
        deg_to_rad(j["global_rotation_deg"].at(1).get<double>());
  }
  cfg.augment.global_aug.flip_over_x =
      j.value("global_flip_x", cfg.augment.global_aug.flip_over_x);
  cfg.augment.rng_seed = j.value("rng_seed", cfg.augment.rng_seed);
  if (j.contains("range_image")) {
    const auto& ri = j["range_image"];
    auto& p = cfg.augment.projection;
    p.rows = ri.value("rows", p.rows);
    p.cols = ri.value("cols", p.cols);
    if (ri.contains("fov_up_deg"))
      p.fov_up = deg_to_rad(ri["fov_up_deg"].get<double>());
    if (ri.contains("fov_down_deg"))
      p.fov_down = deg_to_rad(ri["fov_down_deg"].get<double>());
    p.closing_rows = ri.value("closing_rows", p.closing_rows);
    p.closing_cols = ri.value("closing_cols", p.closing_cols);
  }

  const auto& g = cfg.augment.global_aug;
  if (!(g.scale_min > 0.0) || g.scale_min > g.scale_max)
    throw SchemaViolation("'" + path + "': global_scale must satisfy 0 < low <= high");
  if (g.rotation_min > g.rotation_max)
    throw SchemaViolation("'" + path + "': global_rotation_deg low > high");
  if (cfg.cell_size <= 0.0)
    throw SchemaViolation("'" + path + "': cell_size must be positive");
  return cfg;
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
  json j;
  j["task"] =
      cfg.augment.task == aug::Task::Detection ? "detection" : "segmentation";
  j["cell_size"] = cfg.cell_size;
  j["road_seed_radius"] = cfg.road_seed_radius;
  j["pedestrian_border_cells"] = cfg.pedestrian_border_cells;
  j["pedestrian_seed_radius"] = cfg.pedestrian_seed_radius;
  j["pad_cells"] = cfg.pad_cells;
  j["road_class_ids"] = cfg.road_class_ids;
  j["sidewalk_class_ids"] = cfg.sidewalk_class_ids;
  json classes = json::array();
  for (const SemanticClass& cls : cfg.classes) {
    classes.push_back(json{
        {"id", cls.id},
        {"name", cls.name},
        {"surface",
         cls.surface_kind == SurfaceKind::Road ? "road" : "pedestrian"},
        {"min_insert_points", cls.min_insert_points}});
  }
  j["classes"] = std::move(classes);
  j["max_objects_per_scene"] = cfg.augment.max_objects_per_scene;
  j["max_attempts_per_object"] = cfg.augment.max_attempts_per_object;
  j["range_tolerance"] = cfg.augment.range_tolerance;
  j["global_scale"] = json::array(
      {cfg.augment.global_aug.scale_min, cfg.augment.global_aug.scale_max});
  j["global_rotation_deg"] =
      json::array({rad_to_deg(cfg.augment.global_aug.rotation_min),
                   rad_to_deg(cfg.augment.global_aug.rotation_max)});
  j["global_flip_x"] = cfg.augment.global_aug.flip_over_x;
  j["rng_seed"] = cfg.augment.rng_seed;
  j["range_image"] =
      json{{"rows", cfg.augment.projection.rows},
           {"cols", cfg.augment.projection.cols},
           {"fov_up_deg", rad_to_deg(cfg.augment.projection.fov_up)},
           {"fov_down_deg", rad_to_deg(cfg.augment.projection.fov_down)},
           {"closing_rows", cfg.augment.projection.closing_rows},
           {"closing_cols", cfg.augment.projection.closing_cols}};

  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f << j.dump(1) << "\n";
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

}  // namespace lidaraug
