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

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lidaraug/core.hpp"
#include "lidaraug/errors.hpp"
#include "lidaraug/kitti_io.hpp"
#include "lidaraug/pipeline.hpp"
#include "lidaraug/run_config.hpp"
#include "lidaraug/spherical.hpp"
#include "lidaraug/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lidaraug;

namespace {

enum class SceneFormat { Native, SemanticKitti, KittiDetection };

SceneFormat parse_format(const std::string& s) {
  if (s == "native") return SceneFormat::Native;
  if (s == "semantickitti") return SceneFormat::SemanticKitti;
  if (s == "kitti-detection") return SceneFormat::KittiDetection;
  throw Error("unknown format '" + s + "'");
}

// Subdirectory names for the real dataset layouts; overridable per run.
struct DirLayout {
  std::string scan_dir = "velodyne";
  std::string label_dir = "labels";
  std::string boxes_dir = "label_2";
  std::string calib_dir = "calib";
};

struct SceneEntry {
  std::string id;                 // stem, e.g. "000000" or "scene_003"
  fs::path scan_path;             // native json or velodyne bin
  fs::path label_path;            // .label (real formats)
  fs::path box_path;              // label_2 txt (detection)
  fs::path calib_path;            // calib txt (detection)
  SceneFormat format = SceneFormat::Native;
  DirLayout layout;
};

std::vector<SceneEntry> list_scenes(const fs::path& dir, SceneFormat format,
                                    const DirLayout& layout = {}) {
  std::vector<SceneEntry> entries;
  if (format == SceneFormat::Native) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() != ".json") continue;
      SceneEntry entry;
      entry.id = e.path().stem().string();
      entry.scan_path = e.path();
      entry.format = format;
      entries.push_back(entry);
    }
  } else {
    const fs::path velodyne = dir / layout.scan_dir;
    if (!fs::is_directory(velodyne))
      throw IoFailure("missing directory '" + velodyne.string() + "'");
    for (const auto& e : fs::directory_iterator(velodyne)) {
      if (e.path().extension() != ".bin") continue;
      SceneEntry entry;
      entry.id = e.path().stem().string();
      entry.scan_path = e.path();
      entry.label_path = dir / layout.label_dir / (entry.id + ".label");
      if (format == SceneFormat::KittiDetection) {
        entry.box_path = dir / layout.boxes_dir / (entry.id + ".txt");
        entry.calib_path = dir / layout.calib_dir / (entry.id + ".txt");
      }
      entry.format = format;
      entry.layout = layout;
      entries.push_back(entry);
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const SceneEntry& a, const SceneEntry& b) { return a.id < b.id; });
  return entries;
}

io::Scene load_scene(const SceneEntry& entry, const RunConfig& cfg) {
  if (entry.format == SceneFormat::Native)
    return io::read_scene_json(entry.scan_path.string());

  io::Scene scene;
  scene.scan = io::read_scan(entry.scan_path.string());
  scene.scan.frame_id = entry.id;
  if (fs::exists(entry.label_path)) {
    const auto channels =
        io::read_labels(entry.label_path.string(),
                        static_cast<std::int64_t>(scene.scan.points.size()));
    scene.scan.labels = channels.labels;
    scene.scan.instances = channels.instances;
  }
  if (entry.format == SceneFormat::KittiDetection) {
    const io::Calib calib = io::read_calib(entry.calib_path.string());
    const auto labels = io::read_detection_labels(entry.box_path.string());
    scene.boxes = io::boxes_camera_to_lidar(labels, calib);
    for (const io::DetectionLabel& lab : labels) {
      std::string lower = lab.type;
      for (char& c : lower) c = static_cast<char>(std::tolower(c));
      // Detection-benchmark names vs the semantic scheme.
      if (lower == "pedestrian") lower = "person";
      if (lower == "cyclist") lower = "bicyclist";
      const SemanticClass* cls = cfg.find_class(lower);
      scene.box_class_ids.push_back(cls ? cls->id : 0);
    }
  }
  return scene;
}

std::string detection_type_name(int class_id, const RunConfig& cfg) {
  const SemanticClass* cls = cfg.find_class(class_id);
  if (cls == nullptr) return "DontCare";
  if (cls->name == "person") return "Pedestrian";
  if (cls->name == "bicyclist") return "Cyclist";
  std::string name = cls->name;
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(name[0]));
  return name;
}

void save_scene(const io::Scene& scene, const SceneEntry& entry,
                const fs::path& out_dir, const RunConfig& cfg) {
  if (entry.format == SceneFormat::Native) {
    io::write_scene_json(scene, (out_dir / (entry.id + ".json")).string());
    return;
  }
  const DirLayout& layout = entry.layout;
  fs::create_directories(out_dir / layout.scan_dir);
  io::write_scan(scene.scan,
                 (out_dir / layout.scan_dir / (entry.id + ".bin")).string());
  if (scene.scan.labels) {
    fs::create_directories(out_dir / layout.label_dir);
    const std::vector<std::uint16_t> zero(scene.scan.points.size(), 0);
    io::write_labels(
        *scene.scan.labels,
        scene.scan.instances ? *scene.scan.instances : zero,
        (out_dir / layout.label_dir / (entry.id + ".label")).string());
  }
  if (entry.format == SceneFormat::KittiDetection) {
    // Freshly generated scenes have no source calib; emit identity.
    io::Calib calib;
    if (!entry.calib_path.empty() && fs::exists(entry.calib_path)) {
      calib = io::read_calib(entry.calib_path.string());
    } else {
      fs::create_directories(out_dir / layout.calib_dir);
      io::write_calib(
          calib, (out_dir / layout.calib_dir / (entry.id + ".txt")).string());
    }
    std::vector<std::string> types;
    // Carry original type strings through; inserted boxes get benchmark
    // names derived from their class.
    if (!entry.box_path.empty() && fs::exists(entry.box_path)) {
      const auto original = io::read_detection_labels(entry.box_path.string());
      for (const auto& lab : original) types.push_back(lab.type);
    }
    auto out_labels = io::boxes_lidar_to_camera(scene.boxes, {}, calib);
    for (std::size_t i = 0; i < out_labels.size(); ++i) {
      out_labels[i].type =
          i < types.size()
              ? types[i]
              : detection_type_name(i < scene.box_class_ids.size()
                                        ? scene.box_class_ids[i]
                                        : 0,
                                    cfg);
    }
    fs::create_directories(out_dir / layout.boxes_dir);
    io::write_detection_labels(
        out_labels,
        (out_dir / layout.boxes_dir / (entry.id + ".txt")).string());
  }
}

RunConfig load_config_or_default(const std::string& config_path) {
  if (!config_path.empty()) return load_run_config(config_path);
  if (const char* env = std::getenv("LIDARAUG_CONFIG"); env && *env)
    return load_run_config(env);
  return RunConfig{};
}

// Flag overrides shared by subcommands; flags win over the config file.
struct Overrides {
  std::optional<int> max_objects;
  std::optional<std::uint64_t> seed;
  std::optional<double> cell_size;
  DirLayout layout;

  void apply(RunConfig& cfg) const {
    if (max_objects) cfg.augment.max_objects_per_scene = *max_objects;
    if (seed) cfg.augment.rng_seed = *seed;
    if (cell_size) cfg.cell_size = *cell_size;
  }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--max-objects", ov.max_objects,
                  "Maximum insertions per scene");
  cmd->add_option("--seed", ov.seed, "Base rng seed");
  cmd->add_option("--cell-size", ov.cell_size, "Map cell size in meters");
  cmd->add_option("--scan-dir", ov.layout.scan_dir,
                  "Scan subdirectory (real formats)");
  cmd->add_option("--label-dir", ov.layout.label_dir, "Label subdirectory");
  cmd->add_option("--boxes-dir", ov.layout.boxes_dir,
                  "Detection-label subdirectory");
  cmd->add_option("--calib-dir", ov.layout.calib_dir, "Calib subdirectory");
}

int run_jobs(std::size_t count, int jobs,
             const std::function<void(std::size_t)>& work) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return 0;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::string first_error;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        try {
          work(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (!first_error.empty()) throw Error(first_error);
  return 0;
}

json report_to_json(const std::string& scene_id,
                    const aug::AugmentReport& report) {
  json insertions = json::array();
  for (const auto& ins : report.insertions) {
    insertions.push_back(json{
        {"class_id", ins.class_id},
        {"class_name", ins.class_name},
        {"instance_id", ins.instance_id},
        {"yaw_offset", ins.yaw_offset},
        {"source_range", ins.source_range},
        {"placed_range", ins.placed_range},
        {"added_points", ins.added_points},
        {"removed_points", ins.removed_points},
        {"bank_index", ins.bank_index},
        {"box",
         json{{"cx", ins.box.cx}, {"cy", ins.box.cy}, {"cz", ins.box.cz},
              {"l", ins.box.l}, {"w", ins.box.w}, {"h", ins.box.h},
              {"yaw", ins.box.yaw}}}});
  }
  json failures = json::array();
  for (const auto& fail : report.failures) {
    failures.push_back(json{{"class_id", fail.class_id},
                            {"class_name", fail.class_name},
                            {"reason", fail.reason},
                            {"attempts", fail.attempts}});
  }
  return json{{"scene", scene_id},
              {"insertions", std::move(insertions)},
              {"failures", std::move(failures)}};
}

void append_report_text(std::ostream& os, const std::string& scene_id,
                        const aug::AugmentReport& report) {
  os << "scene " << scene_id << "\n";
  for (const auto& ins : report.insertions) {
    os << "  inserted class=" << ins.class_name << " id=" << ins.class_id
       << " instance=" << ins.instance_id << " added=" << ins.added_points
       << " removed=" << ins.removed_points
       << " source_range=" << ins.source_range
       << " placed_range=" << ins.placed_range << "\n";
  }
  for (const auto& fail : report.failures) {
    os << "  failed class=" << fail.class_name << " reason=" << fail.reason
       << " attempts=" << fail.attempts << "\n";
  }
  os << "  summary inserted=" << report.insertions.size()
     << " failed=" << report.failures.size() << "\n";
}

// ---------------- subcommands ----------------

int cmd_synth(const std::string& spec_path, const std::string& out_dir,
              const std::string& format_name, const RunConfig& cfg) {
  const SceneFormat format = parse_format(format_name);
  const auto specs = synth::read_spec_json(spec_path);
  fs::create_directories(out_dir);
  for (const synth::SceneSpec& spec : specs) {
    const synth::GeneratedScene gen = synth::generate(spec);
    io::Scene scene;
    scene.scan = gen.scan;
    scene.boxes = gen.boxes;
    scene.box_class_ids = gen.box_class_ids;
    SceneEntry entry;
    entry.id = spec.frame_id;
    entry.format = format;
    save_scene(scene, entry, out_dir, cfg);
  }
  std::cout << "generated " << specs.size() << " scenes into " << out_dir
            << "\n";
  return 0;
}

int cmd_make_maps(const std::string& in_dir, const std::string& out_dir,
                  const RunConfig& cfg, const std::string& format_name,
                  const DirLayout& layout, bool accumulate_scans,
                  const std::string& pose_path, bool debug_renders, int jobs) {
  const SceneFormat format = parse_format(format_name);
  const auto entries = list_scenes(in_dir, format, layout);
  if (entries.empty()) throw IoFailure("no scenes found in '" + in_dir + "'");
  fs::create_directories(out_dir);

  if (accumulate_scans) {
    if (pose_path.empty())
      throw Error("--accumulate requires --poses");
    const auto poses = io::read_poses(pose_path);
    std::vector<LidarScan> scans;
    for (const SceneEntry& entry : entries)
      scans.push_back(load_scene(entry, cfg).scan);
    bev::BevGrid grid =
        bev::accumulate(scans, poses, cfg.road_class_ids,
                        cfg.sidewalk_class_ids, cfg.cell_size, cfg.pad_cells);
    grid = bev::close_road(grid,
                           bev::StructuringElement::disk(cfg.road_seed_radius));
    grid = bev::derive_pedestrian_area(
        grid, cfg.pedestrian_border_cells,
        bev::StructuringElement::disk(cfg.pedestrian_seed_radius));
    io::write_grid_json(grid, (fs::path(out_dir) / "accumulated.json").string());
    if (debug_renders)
      bev::write_debug_pgm(grid,
                           (fs::path(out_dir) / "accumulated.pgm").string());
    std::cout << "wrote accumulated map (" << grid.width() << "x"
              << grid.height() << " cells)\n";
    return 0;
  }

  run_jobs(entries.size(), jobs, [&](std::size_t i) {
    const SceneEntry& entry = entries[i];
    try {
      const io::Scene scene = load_scene(entry, cfg);
      const bev::BevGrid grid = build_map(scene.scan, cfg);
      io::write_grid_json(grid,
                          (fs::path(out_dir) / (entry.id + ".json")).string());
      if (debug_renders)
        bev::write_debug_pgm(
            grid, (fs::path(out_dir) / (entry.id + ".pgm")).string());
    } catch (const std::exception& e) {
      throw Error("scene " + entry.id + ": " + e.what());
    }
  });
  std::cout << "wrote " << entries.size() << " maps into " << out_dir << "\n";
  return 0;
}

int cmd_stats(const std::string& in_dir, const std::string& out_path,
              const RunConfig& cfg, const std::string& format_name,
              const DirLayout& layout) {
  const SceneFormat format = parse_format(format_name);
  const auto entries = list_scenes(in_dir, format, layout);
  std::vector<boxfit::ClassDimSample> samples;
  for (const SceneEntry& entry : entries) {
    const io::Scene scene = load_scene(entry, cfg);
    const auto scene_samples = dim_samples_from_scene(scene, cfg);
    samples.insert(samples.end(), scene_samples.begin(), scene_samples.end());
  }
  std::vector<int> present;
  for (const boxfit::ClassDimSample& s : samples)
    if (std::find(present.begin(), present.end(), s.class_id) == present.end())
      present.push_back(s.class_id);
  const auto stats = boxfit::compute_class_stats(samples, present);
  boxfit::write_stats(stats, out_path);
  std::cout << "wrote stats for " << stats.size() << " classes to " << out_path
            << "\n";
  return 0;
}

int cmd_fit_boxes(const std::string& in_dir, const std::string& out_path,
                  const RunConfig& cfg, const std::string& format_name,
                  const DirLayout& layout, const std::string& stats_path) {
  const SceneFormat format = parse_format(format_name);
  std::map<int, boxfit::ClassDimStats> stats;
  if (!stats_path.empty()) stats = boxfit::read_stats(stats_path);
  std::vector<aug::InsertableObject> bank;
  for (const SceneEntry& entry : list_scenes(in_dir, format, layout)) {
    const io::Scene scene = load_scene(entry, cfg);
    const auto objects = build_bank_from_scene(scene, cfg, stats);
    bank.insert(bank.end(), objects.begin(), objects.end());
  }
  io::write_bank_json(bank, out_path);
  std::cout << "extracted " << bank.size() << " objects into " << out_path
            << "\n";
  return 0;
}

int cmd_augment(const std::string& in_dir, const std::string& out_dir,
                RunConfig cfg, const std::string& format_name,
                const DirLayout& layout, const std::string& maps_dir,
                const std::string& bank_path, const std::string& stats_path,
                const std::string& mode_name, bool apply_global, int jobs) {
  const SceneFormat format = parse_format(format_name);
  AugmentMode mode;
  if (mode_name == "real3d")
    mode = AugmentMode::Real3d;
  else if (mode_name == "naive")
    mode = AugmentMode::Naive;
  else
    throw Error("unknown mode '" + mode_name + "' (expected real3d|naive)");

  const auto entries = list_scenes(in_dir, format, layout);
  if (entries.empty()) throw IoFailure("no scenes found in '" + in_dir + "'");
  fs::create_directories(out_dir);
  save_run_config(cfg, (fs::path(out_dir) / "config.json").string());

  std::map<int, boxfit::ClassDimStats> stats;
  if (!stats_path.empty()) stats = boxfit::read_stats(stats_path);

  // Bank: loaded, or built from the inputs in scene order.
  std::vector<aug::InsertableObject> bank;
  if (!bank_path.empty()) {
    bank = io::read_bank_json(bank_path, cfg.classes);
  } else {
    for (const SceneEntry& entry : entries) {
      const io::Scene scene = load_scene(entry, cfg);
      const auto objects = build_bank_from_scene(scene, cfg, stats);
      bank.insert(bank.end(), objects.begin(), objects.end());
    }
  }

  std::vector<json> reports(entries.size());
  std::vector<std::string> text_reports(entries.size());

  run_jobs(entries.size(), jobs, [&](std::size_t i) {
    const SceneEntry& entry = entries[i];
    try {
      const io::Scene scene = load_scene(entry, cfg);

      bev::BevGrid map;
      if (mode == AugmentMode::Real3d) {
        if (!maps_dir.empty()) {
          map = io::read_grid_json(
              (fs::path(maps_dir) / (entry.id + ".json")).string());
        } else {
          map = build_map(scene.scan, cfg);
        }
      }

      const std::uint64_t scene_seed = Rng::derive(cfg.augment.rng_seed, i);
      const aug::AugmentResult res = augment_one(
          scene, map, bank, cfg, scene_seed, mode, nullptr, apply_global);

      io::Scene out_scene;
      out_scene.scan = res.scan;
      out_scene.boxes = res.boxes;
      out_scene.box_class_ids = res.box_class_ids;
      out_scene.map_cell_size = cfg.cell_size;
      save_scene(out_scene, entry, out_dir, cfg);

      reports[i] = report_to_json(entry.id, res.report);
      std::ostringstream os;
      append_report_text(os, entry.id, res.report);
      text_reports[i] = os.str();
    } catch (const std::exception& e) {
      throw Error("scene " + entry.id + ": " + e.what());
    }
  });

  // Reports are assembled in scene order regardless of --jobs.
  json report_json = json::array();
  std::map<std::string, std::size_t> totals;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    report_json.push_back(reports[i]);
    for (const auto& ins : reports[i]["insertions"])
      totals[ins["class_name"].get<std::string>()] += 1;
  }
  {
    std::ofstream f(fs::path(out_dir) / "report.json");
    f << json{{"scenes", report_json}}.dump(1) << "\n";
  }
  {
    std::ofstream f(fs::path(out_dir) / "report.txt");
    for (const std::string& block : text_reports) f << block;
    f << "totals\n";
    for (const auto& [name, count] : totals)
      f << "  " << name << " " << count << "\n";
  }
  std::cout << "augmented " << entries.size() << " scenes into " << out_dir
            << "\n";
  return 0;
}

int cmd_check(const std::string& scene_path, const RunConfig& cfg,
              const std::string& instances_csv, double margin) {
  const io::Scene scene = io::read_scene_json(scene_path);
  std::set<std::uint16_t> inserted;
  if (!instances_csv.empty()) {
    std::istringstream ss(instances_csv);
    std::string token;
    while (std::getline(ss, token, ','))
      inserted.insert(static_cast<std::uint16_t>(std::stoul(token)));
  } else if (scene.scan.instances) {
    for (const std::uint16_t id : *scene.scan.instances)
      if (id != 0) inserted.insert(id);
  }
  const std::size_t violations = sph::count_depth_order_violations(
      scene.scan, inserted, cfg.augment.projection, margin);
  std::cout << "depth-order violations: " << violations << "\n";
  return violations == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lidar point-cloud insertion augmentation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "Config file (default: $LIDARAUG_CONFIG)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic scenes");
  std::string synth_spec, synth_out, synth_format = "native";
  synth_cmd->add_option("--spec", synth_spec, "Scene spec JSON")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--format", synth_format,
                        "native|semantickitti|kitti-detection");

  // make-maps
  auto* maps_cmd = app.add_subcommand("make-maps", "Build placement maps");
  std::string maps_in, maps_out, maps_format = "native", maps_poses;
  bool maps_accumulate = false, maps_debug = false;
  int maps_jobs = 1;
  Overrides maps_ov;
  maps_cmd->add_option("--in", maps_in, "Scene directory")->required();
  maps_cmd->add_option("--out", maps_out, "Output directory")->required();
  maps_cmd->add_option("--format", maps_format, "Scene format");
  maps_cmd->add_flag("--accumulate", maps_accumulate,
                     "Accumulate all scans into one map (needs --poses)");
  maps_cmd->add_option("--poses", maps_poses, "Pose file for --accumulate");
  maps_cmd->add_flag("--debug-renders", maps_debug, "Write PGM renders");
  maps_cmd->add_option("--jobs", maps_jobs, "Parallel scenes");
  add_override_flags(maps_cmd, maps_ov);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Class dimension statistics");
  std::string stats_in, stats_out, stats_format = "native";
  Overrides stats_ov;
  stats_cmd->add_option("--in", stats_in, "Scene directory")->required();
  stats_cmd->add_option("--out", stats_out, "Output stats file")->required();
  stats_cmd->add_option("--format", stats_format, "Scene format");
  add_override_flags(stats_cmd, stats_ov);

  // fit-boxes
  auto* fit_cmd = app.add_subcommand("fit-boxes", "Fit boxes / build a bank");
  std::string fit_in, fit_out, fit_format = "native", fit_stats;
  Overrides fit_ov;
  fit_cmd->add_option("--in", fit_in, "Scene directory")->required();
  fit_cmd->add_option("--out", fit_out, "Output bank JSON")->required();
  fit_cmd->add_option("--format", fit_format, "Scene format");
  fit_cmd->add_option("--stats", fit_stats, "Stats file for refinement");
  add_override_flags(fit_cmd, fit_ov);

  // augment
  auto* aug_cmd = app.add_subcommand("augment", "Insert objects into scenes");
  std::string aug_in, aug_out, aug_format = "native", aug_maps, aug_bank,
              aug_stats, aug_mode = "real3d";
  bool aug_global = false;
  int aug_jobs = 1;
  Overrides aug_ov;
  aug_cmd->add_option("--in", aug_in, "Scene directory")->required();
  aug_cmd->add_option("--out", aug_out, "Output directory")->required();
  aug_cmd->add_option("--format", aug_format, "Scene format");
  aug_cmd->add_option("--maps", aug_maps, "Precomputed map directory");
  aug_cmd->add_option("--bank", aug_bank, "Object bank JSON");
  aug_cmd->add_option("--stats", aug_stats, "Stats file for refinement");
  aug_cmd->add_option("--mode", aug_mode, "real3d|naive");
  aug_cmd->add_flag("--global-aug", aug_global,
                    "Apply global scale/rotation/flip after insertion");
  aug_cmd->add_option("--jobs", aug_jobs, "Parallel scenes");
  add_override_flags(aug_cmd, aug_ov);

  // check
  auto* check_cmd =
      app.add_subcommand("check", "Depth-order violation detector");
  std::string check_scene, check_instances;
  double check_margin = 0.01;
  check_cmd->add_option("--scene", check_scene, "Scene JSON")->required();
  check_cmd->add_option("--instances", check_instances,
                        "Comma-separated inserted instance ids "
                        "(default: all nonzero)");
  check_cmd->add_option("--margin", check_margin, "Depth gap margin (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config_or_default(config_path);
    if (synth_cmd->parsed())
      return cmd_synth(synth_spec, synth_out, synth_format, cfg);
    if (maps_cmd->parsed()) {
      maps_ov.apply(cfg);
      return cmd_make_maps(maps_in, maps_out, cfg, maps_format, maps_ov.layout,
                           maps_accumulate, maps_poses, maps_debug, maps_jobs);
    }
    if (stats_cmd->parsed()) {
      stats_ov.apply(cfg);
      return cmd_stats(stats_in, stats_out, cfg, stats_format,
                       stats_ov.layout);
    }
    if (fit_cmd->parsed()) {
      fit_ov.apply(cfg);
      return cmd_fit_boxes(fit_in, fit_out, cfg, fit_format, fit_ov.layout,
                           fit_stats);
    }
    if (aug_cmd->parsed()) {
      aug_ov.apply(cfg);
      return cmd_augment(aug_in, aug_out, cfg, aug_format, aug_ov.layout,
                         aug_maps, aug_bank, aug_stats, aug_mode, aug_global,
                         aug_jobs);
    }
    if (check_cmd->parsed())
      return cmd_check(check_scene, cfg, check_instances, check_margin);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
