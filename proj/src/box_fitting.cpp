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

#include "lidaraug/box_fitting.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lidaraug/errors.hpp"
#include "lidaraug/geometry.hpp"

namespace lidaraug::boxfit {

OrientedBox fit_box(std::span<const Point> points,
                    std::optional<double> ground_elevation) {
  if (points.empty()) throw EmptyInput("fit_box: no points");

  std::vector<Vec2> bev;
  bev.reserve(points.size());
  double min_z = points[0].z, max_z = points[0].z;
  for (const Point& p : points) {
    bev.push_back({p.x, p.y});
    min_z = std::min(min_z, p.z);
    max_z = std::max(max_z, p.z);
  }

  const geom::FitRect rect = geom::min_area_rect(geom::convex_hull(bev));
  const double h = max_z - min_z;
  const double cz =
      ground_elevation ? *ground_elevation + h / 2.0 : (max_z + min_z) / 2.0;
  return OrientedBox(rect.center.x, rect.center.y, cz, rect.length,
                     rect.width, h, rect.yaw);
}

namespace {

double lowest_decile(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double idx = 0.1 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const double frac = idx - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v[lo];
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

std::map<int, ClassDimStats> compute_class_stats(
    const std::vector<ClassDimSample>& samples,
    const std::vector<int>& required_classes) {
  std::map<int, std::vector<ClassDimSample>> by_class;
  for (const ClassDimSample& s : samples) by_class[s.class_id].push_back(s);

  std::string insufficient;
  for (int cls : required_classes) {
    if (by_class.find(cls) == by_class.end()) by_class[cls];  // force check
  }
  for (const auto& [cls, group] : by_class) {
    if (group.size() < 10)
      insufficient += (insufficient.empty() ? "" : ", ") + std::to_string(cls) +
                      " (" + std::to_string(group.size()) + " samples)";
  }
  if (!insufficient.empty())
    throw InsufficientData("compute_class_stats: classes with < 10 samples: " +
                           insufficient);

  std::map<int, ClassDimStats> out;
  for (const auto& [cls, group] : by_class) {
    std::vector<double> ls, ws, hs;
    for (const ClassDimSample& s : group) {
      ls.push_back(s.l);
      ws.push_back(s.w);
      hs.push_back(s.h);
    }
    ClassDimStats st;
    st.class_id = cls;
    st.min_l = lowest_decile(ls);
    st.min_w = lowest_decile(ws);
    st.min_h = lowest_decile(hs);
    st.max_l = *std::max_element(ls.begin(), ls.end());
    st.max_w = *std::max_element(ws.begin(), ws.end());
    st.max_h = *std::max_element(hs.begin(), hs.end());
    out[cls] = st;
  }
  return out;
}

OrientedBox refine_box(const OrientedBox& box,
                       const std::optional<ClassDimStats>& stats) {
  if (!stats) return box;
  const double bottom = box.cz - box.h / 2.0;
  const double l = std::clamp(box.l, stats->min_l, stats->max_l);
  const double w = std::clamp(box.w, stats->min_w, stats->max_w);
  const double h = std::clamp(box.h, stats->min_h, stats->max_h);
  return OrientedBox(box.cx, box.cy, bottom + h / 2.0, l, w, h, box.yaw);
}

void write_stats(const std::map<int, ClassDimStats>& stats,
                 const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "' for writing");
  auto fmt = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const auto& [cls, st] : stats) {
    f << "class " << cls << " min " << fmt(st.min_l) << " " << fmt(st.min_w)
      << " " << fmt(st.min_h) << " max " << fmt(st.max_l) << " "
      << fmt(st.max_w) << " " << fmt(st.max_h) << "\n";
  }
  if (!f) throw IoFailure("write failed: '" + path + "'");
}

std::map<int, ClassDimStats> read_stats(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open '" + path + "'");
  std::map<int, ClassDimStats> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string kw_class, kw_min, kw_max, extra;
    ClassDimStats st;
    ss >> kw_class >> st.class_id >> kw_min >> st.min_l >> st.min_w >>
        st.min_h >> kw_max >> st.max_l >> st.max_w >> st.max_h;
    if (!ss || kw_class != "class" || kw_min != "min" || kw_max != "max" ||
        (ss >> extra))
      throw MalformedFile("bad stats line in '" + path + "': " + line);
    out[st.class_id] = st;
  }
  return out;
}

}  // namespace lidaraug::boxfit
