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

#include "lidaraug/kitti_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lidaraug/errors.hpp"

namespace lidaraug::io {

namespace {

using nlohmann::json;

std::vector<char> read_file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  const std::streamsize size = f.tellg();
  f.seekg(0);
  std::vector<char> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !f.read(bytes.data(), size))
    throw IoFailure("read failed: '" + path + "'");
  return bytes;
}

void write_file_bytes(const std::string& path, const char* data,
                      std::size_t size) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.write(data, static_cast<std::streamsize>(size));
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

// On-disk layout is little-endian regardless of host.
float f32_from_le(const unsigned char* b) {
  std::uint32_t u = static_cast<std::uint32_t>(b[0]) |
                    (static_cast<std::uint32_t>(b[1]) << 8) |
                    (static_cast<std::uint32_t>(b[2]) << 16) |
                    (static_cast<std::uint32_t>(b[3]) << 24);
  return std::bit_cast<float>(u);
}

void f32_to_le(float v, unsigned char* b) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
  b[0] = static_cast<unsigned char>(u & 0xff);
  b[1] = static_cast<unsigned char>((u >> 8) & 0xff);
  b[2] = static_cast<unsigned char>((u >> 16) & 0xff);
  b[3] = static_cast<unsigned char>((u >> 24) & 0xff);
}

std::uint32_t u32_from_le(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void u32_to_le(std::uint32_t u, unsigned char* b) {
  b[0] = static_cast<unsigned char>(u & 0xff);
  b[1] = static_cast<unsigned char>((u >> 8) & 0xff);
  b[2] = static_cast<unsigned char>((u >> 16) & 0xff);
  b[3] = static_cast<unsigned char>((u >> 24) & 0xff);
}

json parse_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(f);  // rejects trailing garbage
  } catch (const json::parse_error& e) {
    throw SchemaViolation("'" + path + "': " + e.what());
  }
  return j;
}

void dump_json_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f << j.dump(1) << "\n";
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

}  // namespace

LidarScan read_scan(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() % 16 != 0)
    throw MalformedFile("'" + path + "': size " + std::to_string(bytes.size()) +
                        " not a multiple of 16");
  LidarScan scan;
  scan.points.resize(bytes.size() / 16);
  const unsigned char* b = reinterpret_cast<const unsigned char*>(bytes.data());
  for (Point& p : scan.points) {
    p.x = f32_from_le(b);
    p.y = f32_from_le(b + 4);
    p.z = f32_from_le(b + 8);
    p.intensity = f32_from_le(b + 12);
    b += 16;
  }
  return scan;
}

void write_scan(const LidarScan& scan, const std::string& path) {
  std::vector<unsigned char> bytes(scan.points.size() * 16);
  unsigned char* b = bytes.data();
  for (const Point& p : scan.points) {
    f32_to_le(static_cast<float>(p.x), b);
    f32_to_le(static_cast<float>(p.y), b + 4);
    f32_to_le(static_cast<float>(p.z), b + 8);
    f32_to_le(p.intensity, b + 12);
    b += 16;
  }
  write_file_bytes(path, reinterpret_cast<const char*>(bytes.data()),
                   bytes.size());
}

LabelChannels read_labels(const std::string& path, std::int64_t expected_count) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() % 4 != 0)
    throw MalformedFile("'" + path + "': size " + std::to_string(bytes.size()) +
                        " not a multiple of 4");
  const std::size_t n = bytes.size() / 4;
  if (expected_count >= 0 && n != static_cast<std::size_t>(expected_count))
    throw CountMismatch("'" + path + "': " + std::to_string(n) +
                        " labels for " + std::to_string(expected_count) +
                        " points");
  LabelChannels out;
  out.labels.resize(n);
  out.instances.resize(n);
  const unsigned char* b = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t v = u32_from_le(b + 4 * i);
    out.labels[i] = static_cast<std::uint16_t>(v & 0xffff);
    out.instances[i] = static_cast<std::uint16_t>(v >> 16);
  }
  return out;
}

void write_labels(const std::vector<std::uint16_t>& labels,
                  const std::vector<std::uint16_t>& instances,
                  const std::string& path) {
  if (labels.size() != instances.size())
    throw LengthMismatch("write_labels: label/instance count mismatch");
  std::vector<unsigned char> bytes(labels.size() * 4);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t v = static_cast<std::uint32_t>(labels[i]) |
                            (static_cast<std::uint32_t>(instances[i]) << 16);
    u32_to_le(v, bytes.data() + 4 * i);
  }
  write_file_bytes(path, reinterpret_cast<const char*>(bytes.data()),
                   bytes.size());
}

std::vector<Pose> read_poses(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  std::vector<Pose> poses;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double v[12];
    for (double& x : v) {
      if (!(ss >> x))
        throw MalformedFile("'" + path + "' line " + std::to_string(lineno) +
                            ": expected 12 values");
    }
    std::string extra;
    if (ss >> extra)
      throw MalformedFile("'" + path + "' line " + std::to_string(lineno) +
                          ": trailing tokens");
    Pose pose;
    pose.rotation.m = {v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10]};
    pose.translation = {v[3], v[7], v[11]};
    if (!pose.is_valid(1e-4))
      throw MalformedFile("'" + path + "' line " + std::to_string(lineno) +
                          ": rotation not orthonormal");
    poses.push_back(pose);
  }
  return poses;
}

void write_poses(const std::vector<Pose>& poses, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.precision(17);
  for (const Pose& p : poses) {
    const auto& r = p.rotation;
    f << r(0, 0) << " " << r(0, 1) << " " << r(0, 2) << " " << p.translation.x
      << " " << r(1, 0) << " " << r(1, 1) << " " << r(1, 2) << " "
      << p.translation.y << " " << r(2, 0) << " " << r(2, 1) << " " << r(2, 2)
      << " " << p.translation.z << "\n";
  }
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

Calib read_calib(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  bool have_rect = false, have_tr = false;
  Calib calib;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "R0_rect:" || key == "R_rect:") {
      for (double& v : calib.rect.m)
        if (!(ss >> v)) throw MissingCalib("'" + path + "': bad R0_rect");
      have_rect = true;
    } else if (key == "Tr_velo_to_cam:" || key == "Tr:") {
      double v[12];
      for (double& x : v)
        if (!(ss >> x)) throw MissingCalib("'" + path + "': bad Tr_velo_to_cam");
      calib.velo_to_cam.rotation.m = {v[0], v[1], v[2], v[4], v[5],
                                      v[6], v[8], v[9], v[10]};
      calib.velo_to_cam.translation = {v[3], v[7], v[11]};
      have_tr = true;
    }
  }
  if (!have_rect || !have_tr)
    throw MissingCalib("'" + path + "': missing R0_rect or Tr_velo_to_cam");
  if (std::abs(calib.rect.det()) < 1e-9 ||
      std::abs(calib.velo_to_cam.rotation.det()) < 1e-9)
    throw MissingCalib("'" + path + "': calibration transform not invertible");
  return calib;
}

void write_calib(const Calib& calib, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.precision(17);
  f << "R0_rect:";
  for (const double v : calib.rect.m) f << " " << v;
  f << "\nTr_velo_to_cam:";
  const auto& r = calib.velo_to_cam.rotation;
  const auto& t = calib.velo_to_cam.translation;
  f << " " << r(0, 0) << " " << r(0, 1) << " " << r(0, 2) << " " << t.x << " "
    << r(1, 0) << " " << r(1, 1) << " " << r(1, 2) << " " << t.y << " "
    << r(2, 0) << " " << r(2, 1) << " " << r(2, 2) << " " << t.z << "\n";
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

std::vector<DetectionLabel> boxes_lidar_to_camera(
    const std::vector<OrientedBox>& boxes,
    const std::vector<std::string>& types, const Calib& calib) {
  if (!types.empty() && types.size() != boxes.size())
    throw LengthMismatch("boxes_lidar_to_camera: types/boxes size mismatch");
  std::vector<DetectionLabel> out;
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const OrientedBox& b = boxes[i];
    // KITTI convention: location is the bottom-face center in camera coords.
    const Vec3 bottom{b.cx, b.cy, b.bottom_z()};
    const Vec3 cam = calib.rect * calib.velo_to_cam.apply(bottom);
    DetectionLabel lab;
    lab.type = types.empty() ? "DontCare" : types[i];
    lab.h = b.h;
    lab.w = b.w;
    lab.l = b.l;
    lab.x = cam.x;
    lab.y = cam.y;
    lab.z = cam.z;
    lab.rotation_y = normalize_angle(-b.yaw - kPi / 2.0);
    lab.alpha = normalize_angle(lab.rotation_y - std::atan2(cam.x, cam.z));
    out.push_back(lab);
  }
  return out;
}

std::vector<OrientedBox> boxes_camera_to_lidar(
    const std::vector<DetectionLabel>& labels, const Calib& calib) {
  if (std::abs(calib.rect.det()) < 1e-9 ||
      std::abs(calib.velo_to_cam.rotation.det()) < 1e-9)
    throw MissingCalib("boxes_camera_to_lidar: calibration not invertible");
  const Mat3 rect_inv = calib.rect.inverse();
  const Mat3 rot_inv = calib.velo_to_cam.rotation.inverse();
  std::vector<OrientedBox> out;
  out.reserve(labels.size());
  for (const DetectionLabel& lab : labels) {
    const Vec3 cam{lab.x, lab.y, lab.z};
    const Vec3 bottom =
        rot_inv * (rect_inv * cam - calib.velo_to_cam.translation);
    const double yaw = normalize_angle(-lab.rotation_y - kPi / 2.0);
    out.emplace_back(bottom.x, bottom.y, bottom.z + lab.h / 2.0, lab.l, lab.w,
                     lab.h, yaw);
  }
  return out;
}

std::vector<DetectionLabel> read_detection_labels(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  std::vector<DetectionLabel> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    DetectionLabel lab;
    ss >> lab.type >> lab.truncated >> lab.occluded >> lab.alpha >>
        lab.bbox[0] >> lab.bbox[1] >> lab.bbox[2] >> lab.bbox[3] >> lab.h >>
        lab.w >> lab.l >> lab.x >> lab.y >> lab.z >> lab.rotation_y;
    if (!ss)
      throw MalformedFile("'" + path + "' line " + std::to_string(lineno) +
                          ": expected 15 fields");
    std::string extra;
    if (ss >> extra)
      throw MalformedFile("'" + path + "' line " + std::to_string(lineno) +
                          ": trailing tokens");
    out.push_back(lab);
  }
  return out;
}

void write_detection_labels(const std::vector<DetectionLabel>& labels,
                            const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  f.precision(17);
  for (const DetectionLabel& lab : labels) {
    f << lab.type << " " << lab.truncated << " " << lab.occluded << " "
      << lab.alpha << " " << lab.bbox[0] << " " << lab.bbox[1] << " "
      << lab.bbox[2] << " " << lab.bbox[3] << " " << lab.h << " " << lab.w
      << " " << lab.l << " " << lab.x << " " << lab.y << " " << lab.z << " "
      << lab.rotation_y << "\n";
  }
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

namespace {

json box_to_json(const OrientedBox& b, int class_id) {
  return json{{"cx", b.cx}, {"cy", b.cy}, {"cz", b.cz}, {"l", b.l},
              {"w", b.w},   {"h", b.h},   {"yaw", b.yaw},
              {"class_id", class_id}};
}

std::pair<OrientedBox, int> box_from_json(const json& j) {
  if (!j.is_object()) throw SchemaViolation("box entry must be an object");
  for (const char* key : {"cx", "cy", "cz", "l", "w", "h", "yaw", "class_id"})
    if (!j.contains(key))
      throw SchemaViolation(std::string("box entry missing '") + key + "'");
  OrientedBox b(j["cx"].get<double>(), j["cy"].get<double>(),
                j["cz"].get<double>(), j["l"].get<double>(),
                j["w"].get<double>(), j["h"].get<double>(),
                j["yaw"].get<double>());
  return {b, j["class_id"].get<int>()};
}

json points_to_json(const std::vector<Point>& points) {
  json arr = json::array();
  for (const Point& p : points)
    arr.push_back(json::array(
        {p.x, p.y, p.z, static_cast<double>(p.intensity)}));
  return arr;
}

std::vector<Point> points_from_json(const json& arr) {
  if (!arr.is_array()) throw SchemaViolation("'points' must be an array");
  std::vector<Point> points;
  points.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 4)
      throw SchemaViolation("point entry must be [x, y, z, intensity]");
    Point p;
    p.x = e[0].get<double>();
    p.y = e[1].get<double>();
    p.z = e[2].get<double>();
    p.intensity = static_cast<float>(e[3].get<double>());
    points.push_back(p);
  }
  return points;
}

template <typename T>
std::vector<T> u16_channel_from_json(const json& arr, const char* name,
                                     std::size_t expected) {
  if (!arr.is_array())
    throw SchemaViolation(std::string("'") + name + "' must be an array");
  if (arr.size() != expected)
    throw SchemaViolation(std::string("'") + name + "' has " +
                          std::to_string(arr.size()) + " entries for " +
                          std::to_string(expected) + " points");
  std::vector<T> out;
  out.reserve(arr.size());
  for (const auto& e : arr) out.push_back(static_cast<T>(e.get<unsigned>()));
  return out;
}

}  // namespace

Scene read_scene_json(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("schema_version"))
    throw SchemaViolation("'" + path + "': missing schema_version");
  if (j["schema_version"].get<int>() != 1)
    throw SchemaViolation("'" + path + "': unknown schema_version " +
                          j["schema_version"].dump());
  if (!j.contains("points"))
    throw SchemaViolation("'" + path + "': missing points");

  Scene scene;
  scene.scan.points = points_from_json(j["points"]);
  scene.scan.frame_id = j.value("frame_id", std::string{});
  if (j.contains("labels"))
    scene.scan.labels = u16_channel_from_json<std::uint16_t>(
        j["labels"], "labels", scene.scan.points.size());
  if (j.contains("instances"))
    scene.scan.instances = u16_channel_from_json<std::uint16_t>(
        j["instances"], "instances", scene.scan.points.size());
  if (j.contains("boxes")) {
    for (const auto& e : j["boxes"]) {
      auto [box, cls] = box_from_json(e);
      scene.boxes.push_back(box);
      scene.box_class_ids.push_back(cls);
    }
  }
  if (j.contains("map")) {
    if (!j["map"].is_object() || !j["map"].contains("cell_size"))
      throw SchemaViolation("'" + path + "': malformed map params");
    scene.map_cell_size = j["map"]["cell_size"].get<double>();
  }
  return scene;
}

void write_scene_json(const Scene& scene, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["frame_id"] = scene.scan.frame_id;
  j["points"] = points_to_json(scene.scan.points);
  if (scene.scan.labels) j["labels"] = *scene.scan.labels;
  if (scene.scan.instances) j["instances"] = *scene.scan.instances;
  json boxes = json::array();
  for (std::size_t i = 0; i < scene.boxes.size(); ++i)
    boxes.push_back(box_to_json(
        scene.boxes[i],
        i < scene.box_class_ids.size() ? scene.box_class_ids[i] : 0));
  j["boxes"] = boxes;
  j["map"] = json{{"cell_size", scene.map_cell_size}};
  dump_json_file(j, path);
}

std::vector<aug::InsertableObject> read_bank_json(
    const std::string& path, const std::vector<SemanticClass>& classes) {
  const json j = parse_json_file(path);
  if (!j.is_object() || j.value("schema_version", -1) != 1 ||
      !j.contains("objects"))
    throw SchemaViolation("'" + path + "': not a valid bank file");

  std::vector<aug::InsertableObject> bank;
  for (const auto& e : j["objects"]) {
    aug::InsertableObject obj;
    auto [box, cls_id] = box_from_json(e.at("box"));
    obj.box = box;
    bool found = false;
    for (const SemanticClass& cls : classes) {
      if (cls.id == cls_id) {
        obj.cls = cls;
        found = true;
        break;
      }
    }
    if (!found)
      throw SchemaViolation("'" + path + "': unknown class id " +
                            std::to_string(cls_id));
    obj.points = points_from_json(e.at("points"));
    obj.source_range = e.at("source_range").get<double>();
    obj.source_frame = e.value("source_frame", std::string{});
    obj.difficulty = e.value("difficulty", std::string{});
    bank.push_back(std::move(obj));
  }
  return bank;
}

void write_bank_json(const std::vector<aug::InsertableObject>& bank,
                     const std::string& path) {
  json objects = json::array();
  for (const aug::InsertableObject& obj : bank) {
    json e;
    e["box"] = box_to_json(obj.box, obj.cls.id);
    e["points"] = points_to_json(obj.points);
    e["source_range"] = obj.source_range;
    e["source_frame"] = obj.source_frame;
    if (!obj.difficulty.empty()) e["difficulty"] = obj.difficulty;
    objects.push_back(std::move(e));
  }
  json j;
  j["schema_version"] = 1;
  j["objects"] = std::move(objects);
  dump_json_file(j, path);
}

bev::BevGrid read_grid_json(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object() || j.value("schema_version", -1) != 1)
    throw SchemaViolation("'" + path + "': not a valid grid file");
  bev::GridSpec spec;
  spec.origin_x = j.at("origin_x").get<double>();
  spec.origin_y = j.at("origin_y").get<double>();
  spec.cell_size = j.at("cell_size").get<double>();
  spec.width = j.at("width").get<int>();
  spec.height = j.at("height").get<int>();
  bev::BevGrid grid(spec);

  const auto& road = j.at("road");
  const auto& ped = j.at("pedestrian");
  if (!road.is_array() || static_cast<int>(road.size()) != spec.height ||
      !ped.is_array() || static_cast<int>(ped.size()) != spec.height)
    throw SchemaViolation("'" + path + "': mask row count mismatch");
  for (int r = 0; r < spec.height; ++r) {
    const std::string road_row = road[r].get<std::string>();
    const std::string ped_row = ped[r].get<std::string>();
    if (static_cast<int>(road_row.size()) != spec.width ||
        static_cast<int>(ped_row.size()) != spec.width)
      throw SchemaViolation("'" + path + "': mask width mismatch");
    for (int c = 0; c < spec.width; ++c) {
      grid.at(r, c).road = road_row[c] == '1';
      grid.at(r, c).pedestrian = ped_row[c] == '1';
    }
  }
  for (const auto& e : j.at("elevation")) {
    if (!e.is_array() || e.size() != 3)
      throw SchemaViolation("'" + path + "': elevation entry must be [r,c,z]");
    const int r = e[0].get<int>(), c = e[1].get<int>();
    if (!grid.in_bounds(r, c))
      throw SchemaViolation("'" + path + "': elevation entry out of bounds");
    grid.at(r, c).elev_sum = e[2].get<double>();
    grid.at(r, c).hit_count = 1;
  }
  return grid;
}

void write_grid_json(const bev::BevGrid& grid, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["origin_x"] = grid.spec().origin_x;
  j["origin_y"] = grid.spec().origin_y;
  j["cell_size"] = grid.spec().cell_size;
  j["width"] = grid.spec().width;
  j["height"] = grid.spec().height;
  json road = json::array(), ped = json::array(), elev = json::array();
  for (int r = 0; r < grid.height(); ++r) {
    std::string road_row(grid.width(), '0');
    std::string ped_row(grid.width(), '0');
    for (int c = 0; c < grid.width(); ++c) {
      const bev::Cell& cell = grid.at(r, c);
      if (cell.road) road_row[c] = '1';
      if (cell.pedestrian) ped_row[c] = '1';
      if (cell.has_elevation())
        elev.push_back(json::array({r, c, cell.elevation()}));
    }
    road.push_back(road_row);
    ped.push_back(ped_row);
  }
  j["road"] = std::move(road);
  j["pedestrian"] = std::move(ped);
  j["elevation"] = std::move(elev);
  dump_json_file(j, path);
}

}  // namespace lidaraug::io
