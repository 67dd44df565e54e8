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

#include "lidaraug/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "lidaraug/errors.hpp"
#include "lidaraug/geometry.hpp"

namespace lidaraug::synth {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hit {
  double t = kInf;
  int label = 0;
  std::uint16_t instance = 0;
  float intensity = 0.0f;
};

bool point_in_strip(const Strip& s, double x, double y) {
  const double dx = x - s.cx, dy = y - s.cy;
  const double c = std::cos(s.yaw), sn = std::sin(s.yaw);
  const double lx = c * dx + sn * dy;
  const double ly = -sn * dx + c * dy;
  return std::abs(lx) <= s.length / 2.0 && std::abs(ly) <= s.width / 2.0;
}

// Ray (from origin, unit direction d) against the ground plane
// z = z0 + sx*x + sy*y.
std::optional<double> ray_ground(const Vec3& d, const GroundProfile& g) {
  const double denom = d.z - g.slope_x * d.x - g.slope_y * d.y;
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = g.z0 / denom;
  if (t <= 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_wall(const Vec3& d, const Wall& w) {
  const Vec2 seg = w.b - w.a;
  const double seg_len = seg.norm();
  if (seg_len == 0.0 || w.height <= 0.0) return std::nullopt;
  const Vec2 n = seg.perp();  // wall plane normal (x, y only)
  const double denom = d.x * n.x + d.y * n.y;
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = (w.a.x * n.x + w.a.y * n.y) / denom;
  if (t <= 0.0) return std::nullopt;
  const Vec2 hit{d.x * t, d.y * t};
  const double s = (hit - w.a).dot(seg) / (seg_len * seg_len);
  if (s < 0.0 || s > 1.0) return std::nullopt;
  const double z = d.z * t;
  if (z < w.base_z || z > w.base_z + w.height) return std::nullopt;
  return t;
}

// Slab test in the box frame.
std::optional<double> ray_box(const Vec3& d, const OrientedBox& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const Vec3 o{-(c * box.cx + s * box.cy), -(-s * box.cx + c * box.cy),
               -box.cz};
  const Vec3 dir{c * d.x + s * d.y, -s * d.x + c * d.y, d.z};
  const double half[3] = {box.l / 2.0, box.w / 2.0, box.h / 2.0};
  const double oo[3] = {o.x, o.y, o.z};
  const double dd[3] = {dir.x, dir.y, dir.z};

  double t_enter = 0.0, t_exit = kInf;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(dd[axis]) < 1e-12) {
      if (std::abs(oo[axis]) > half[axis]) return std::nullopt;
      continue;
    }
    double t0 = (-half[axis] - oo[axis]) / dd[axis];
    double t1 = (half[axis] - oo[axis]) / dd[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit || t_enter <= 0.0) return std::nullopt;
  return t_enter;
}

}  // namespace

GeneratedScene generate(const SceneSpec& spec) {
  GeneratedScene out;
  out.scan.frame_id = spec.frame_id;
  out.scan.labels.emplace();
  out.scan.instances.emplace();

  // Ground-truth boxes, seated on the ground under their center.
  for (const ObjectTemplate& obj : spec.objects) {
    const double gz = spec.ground.height_at(obj.cx, obj.cy);
    out.boxes.emplace_back(obj.cx, obj.cy, gz + obj.h / 2.0, obj.l, obj.w,
                           obj.h, obj.yaw);
    out.box_class_ids.push_back(obj.class_id);
  }

  const SensorModel& sensor = spec.sensor;
  const double elev_span = sensor.fov_up - sensor.fov_down;
  for (int b = 0; b < sensor.beams; ++b) {
    // Beam and azimuth directions at pixel centers of the default image.
    const double elev =
        sensor.fov_up - (b + 0.5) * elev_span / sensor.beams;
    const double ce = std::cos(elev), se = std::sin(elev);
    for (int a = 0; a < sensor.azimuth_steps; ++a) {
      const double az = -kPi + (a + 0.5) * 2.0 * kPi / sensor.azimuth_steps;
      const Vec3 d{ce * std::cos(az), ce * std::sin(az), se};

      Hit best;
      if (const auto t = ray_ground(d, spec.ground); t && *t < best.t) {
        const double x = d.x * *t, y = d.y * *t;
        best.t = *t;
        best.instance = 0;
        best.label = kTerrainLabel;
        best.intensity = 0.20f;
        for (const Strip& s : spec.sidewalks) {
          if (point_in_strip(s, x, y)) {
            best.label = kSidewalkLabel;
            best.intensity = 0.35f;
            break;
          }
        }
        for (const Strip& s : spec.roads) {
          if (point_in_strip(s, x, y)) {
            best.label = kRoadLabel;
            best.intensity = 0.25f;
            break;
          }
        }
      }
      for (const Wall& w : spec.walls) {
        if (const auto t = ray_wall(d, w); t && *t < best.t) {
          best.t = *t;
          best.label = kBuildingLabel;
          best.instance = 0;
          best.intensity = 0.50f;
        }
      }
      for (std::size_t i = 0; i < out.boxes.size(); ++i) {
        if (const auto t = ray_box(d, out.boxes[i]); t && *t < best.t) {
          best.t = *t;
          best.label = out.box_class_ids[i];
          best.instance = static_cast<std::uint16_t>(i + 1);
          best.intensity = 0.60f;
        }
      }

      if (!std::isfinite(best.t) || best.t > sensor.max_range) continue;
      Point p;
      p.x = d.x * best.t;
      p.y = d.y * best.t;
      p.z = d.z * best.t;
      p.intensity = best.intensity;
      out.scan.points.push_back(p);
      out.scan.labels->push_back(static_cast<std::uint16_t>(best.label));
      out.scan.instances->push_back(best.instance);
    }
  }
  return out;
}

void ground_truth_masks(const SceneSpec& spec, const bev::GridSpec& grid,
                        std::vector<std::uint8_t>& road,
                        std::vector<std::uint8_t>& sidewalk) {
  const std::size_t n = static_cast<std::size_t>(grid.width) * grid.height;
  road.assign(n, 0);
  sidewalk.assign(n, 0);
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const double x = grid.origin_x + (c + 0.5) * grid.cell_size;
      const double y = grid.origin_y + (r + 0.5) * grid.cell_size;
      const std::size_t i = static_cast<std::size_t>(r) * grid.width + c;
      for (const Strip& s : spec.roads)
        if (point_in_strip(s, x, y)) {
          road[i] = 1;
          break;
        }
      for (const Strip& s : spec.sidewalks)
        if (point_in_strip(s, x, y)) {
          sidewalk[i] = 1;
          break;
        }
    }
  }
}

namespace {

json strip_to_json(const Strip& s) {
  return json{{"cx", s.cx}, {"cy", s.cy}, {"length", s.length},
              {"width", s.width}, {"yaw", s.yaw}};
}

Strip strip_from_json(const json& j) {
  Strip s;
  s.cx = j.at("cx").get<double>();
  s.cy = j.at("cy").get<double>();
  s.length = j.at("length").get<double>();
  s.width = j.at("width").get<double>();
  s.yaw = j.value("yaw", 0.0);
  return s;
}

SceneSpec spec_from_json(const json& j) {
  SceneSpec spec;
  spec.frame_id = j.value("frame_id", std::string{});
  spec.seed = j.value("seed", 0ULL);
  if (j.contains("sensor")) {
    const auto& s = j["sensor"];
    spec.sensor.beams = s.value("beams", spec.sensor.beams);
    spec.sensor.azimuth_steps =
        s.value("azimuth_steps", spec.sensor.azimuth_steps);
    if (s.contains("fov_up_deg"))
      spec.sensor.fov_up = deg_to_rad(s["fov_up_deg"].get<double>());
    if (s.contains("fov_down_deg"))
      spec.sensor.fov_down = deg_to_rad(s["fov_down_deg"].get<double>());
    spec.sensor.max_range = s.value("max_range", spec.sensor.max_range);
  }
  if (j.contains("ground")) {
    const auto& g = j["ground"];
    spec.ground.z0 = g.value("z0", spec.ground.z0);
    spec.ground.slope_x = g.value("slope_x", 0.0);
    spec.ground.slope_y = g.value("slope_y", 0.0);
  }
  for (const auto& e : j.value("roads", json::array()))
    spec.roads.push_back(strip_from_json(e));
  for (const auto& e : j.value("sidewalks", json::array()))
    spec.sidewalks.push_back(strip_from_json(e));
  for (const auto& e : j.value("walls", json::array())) {
    Wall w;
    w.a = {e.at("ax").get<double>(), e.at("ay").get<double>()};
    w.b = {e.at("bx").get<double>(), e.at("by").get<double>()};
    w.base_z = e.at("base_z").get<double>();
    w.height = e.at("height").get<double>();
    spec.walls.push_back(w);
  }
  for (const auto& e : j.value("objects", json::array())) {
    ObjectTemplate o;
    o.class_id = e.at("class_id").get<int>();
    o.l = e.at("l").get<double>();
    o.w = e.at("w").get<double>();
    o.h = e.at("h").get<double>();
    o.cx = e.at("cx").get<double>();
    o.cy = e.at("cy").get<double>();
    o.yaw = e.value("yaw", 0.0);
    spec.objects.push_back(o);
  }
  return spec;
}

json spec_to_json(const SceneSpec& spec) {
  json j;
  j["frame_id"] = spec.frame_id;
  j["seed"] = spec.seed;
  j["sensor"] = json{{"beams", spec.sensor.beams},
                     {"azimuth_steps", spec.sensor.azimuth_steps},
                     {"fov_up_deg", rad_to_deg(spec.sensor.fov_up)},
                     {"fov_down_deg", rad_to_deg(spec.sensor.fov_down)},
                     {"max_range", spec.sensor.max_range}};
  j["ground"] = json{{"z0", spec.ground.z0},
                     {"slope_x", spec.ground.slope_x},
                     {"slope_y", spec.ground.slope_y}};
  json roads = json::array(), sidewalks = json::array();
  for (const Strip& s : spec.roads) roads.push_back(strip_to_json(s));
  for (const Strip& s : spec.sidewalks) sidewalks.push_back(strip_to_json(s));
  j["roads"] = std::move(roads);
  j["sidewalks"] = std::move(sidewalks);
  json walls = json::array();
  for (const Wall& w : spec.walls)
    walls.push_back(json{{"ax", w.a.x}, {"ay", w.a.y}, {"bx", w.b.x},
                         {"by", w.b.y}, {"base_z", w.base_z},
                         {"height", w.height}});
  j["walls"] = std::move(walls);
  json objects = json::array();
  for (const ObjectTemplate& o : spec.objects)
    objects.push_back(json{{"class_id", o.class_id}, {"l", o.l}, {"w", o.w},
                           {"h", o.h}, {"cx", o.cx}, {"cy", o.cy},
                           {"yaw", o.yaw}});
  j["objects"] = std::move(objects);
  return j;
}

}  // namespace

std::vector<SceneSpec> read_spec_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("'" + path + "': " + e.what());
  }
  if (!j.is_object() || j.value("schema_version", -1) != 1 ||
      !j.contains("scenes") || !j["scenes"].is_array())
    throw SchemaViolation("'" + path + "': not a valid scene spec file");
  std::vector<SceneSpec> specs;
  try {
    for (const auto& e : j["scenes"]) specs.push_back(spec_from_json(e));
  } catch (const json::exception& e) {
    throw SchemaViolation("'" + path + "': " + e.what());
  }
  return specs;
}

void write_spec_json(const std::vector<SceneSpec>& specs,
                     const std::string& path) {
  json scenes = json::array();
  for (const SceneSpec& spec : specs) scenes.push_back(spec_to_json(spec));
  json j;
  j["schema_version"] = 1;
  j["scenes"] = std::move(scenes);
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f << j.dump(1) << "\n";
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

}  // namespace lidaraug::synth
