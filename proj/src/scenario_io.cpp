// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/scenario_io.hpp"

#include <fstream>

#include "tgs/errors.hpp"

#ifndef TGS_DATA_DIR
#define TGS_DATA_DIR "data"
#endif

namespace tgs {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field)) throw ValidationError(field, "missing");
  return doc.at(field);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  return v.get<double>();
}

Vec2 point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ValidationError(field, "expected [x, y]");
  return {number(v[0], field), number(v[1], field)};
}

}  // namespace

ScenarioSpec scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario document must be an object");
  ScenarioSpec spec;

  const auto& name = require(doc, "name");
  if (!name.is_string()) throw ValidationError("name", "expected a string");
  spec.name = name.get<std::string>();
  if (spec.name.empty()) throw ValidationError("name", "must be non-empty");

  GridGeometry geo;
  geo.resolution = number(require(doc, "resolution"), "resolution");
  if (!(geo.resolution > 0.0)) throw ValidationError("resolution", "must be positive");
  geo.origin = point(require(doc, "origin"), "origin");

  const auto& rows = require(doc, "rows");
  if (!rows.is_array() || rows.empty()) throw ValidationError("rows", "expected a non-empty array");
  geo.height = static_cast<int>(rows.size());
  std::vector<CellLabel> cells;
  // rows[0] is the northmost row (largest y).
  std::vector<std::string> text;
  for (const auto& r : rows) {
    if (!r.is_string()) throw ValidationError("rows", "expected strings");
    text.push_back(r.get<std::string>());
  }
  geo.width = static_cast<int>(text.front().size());
  if (geo.width == 0) throw ValidationError("rows", "empty row");
  cells.resize(static_cast<std::size_t>(geo.width) * geo.height);
  for (int r = 0; r < geo.height; ++r) {
    const std::string& line = text[r];
    if (static_cast<int>(line.size()) != geo.width)
      throw ValidationError("rows", "row " + std::to_string(r) + " has width " +
                                        std::to_string(line.size()) + ", expected " +
                                        std::to_string(geo.width));
    const int j = geo.height - 1 - r;
    for (int i = 0; i < geo.width; ++i) {
      const auto label = label_from_char(line[i]);
      if (!label)
        throw ValidationError("rows", std::string("unknown cell code '") + line[i] + "' in row " +
                                          std::to_string(r));
      cells[static_cast<std::size_t>(j) * geo.width + i] = *label;
    }
  }
  spec.grid = SemanticGrid(geo, std::move(cells));

  const auto& start = require(doc, "start");
  if (!start.is_array() || start.size() != 3) throw ValidationError("start", "expected [x, y, heading]");
  spec.start = Pose2D(number(start[0], "start"), number(start[1], "start"), number(start[2], "start"));
  spec.goal = point(require(doc, "goal"), "goal");

  const auto& ref = require(doc, "reference_path");
  if (!ref.is_array()) throw ValidationError("reference_path", "expected an array of [x, y]");
  for (const auto& p : ref) spec.reference_path.push_back(point(p, "reference_path"));

  const auto& cam = require(doc, "camera");
  if (!cam.is_object()) throw ValidationError("camera", "expected an object");
  auto cam_field = [&](const char* key) {
    const std::string field = std::string("camera.") + key;
    if (!cam.contains(key)) throw ValidationError(field, "missing");
    return number(cam.at(key), field);
  };
  const double fx = cam_field("fx"), fy = cam_field("fy"), cx = cam_field("cx"), cy = cam_field("cy");
  const double width = cam_field("width"), height = cam_field("height");
  if (width != std::floor(width) || height != std::floor(height))
    throw ValidationError("camera.width", "image size must be integral");
  if (!cam.contains("mount")) throw ValidationError("camera.mount", "missing");
  const auto& mount = cam.at("mount");
  if (!mount.is_array() || mount.size() != 4)
    throw ValidationError("camera.mount", "expected [x, y, z, pitch]");
  spec.camera_mount = {number(mount[0], "camera.mount"), number(mount[1], "camera.mount"),
                       number(mount[2], "camera.mount"), number(mount[3], "camera.mount")};
  spec.camera = CameraModel::from_mount(fx, fy, cx, cy, static_cast<int>(width),
                                        static_cast<int>(height), spec.camera_mount);

  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed scenario " + path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

json scenario_to_json(const ScenarioSpec& spec) {
  const auto& geo = spec.grid.geometry();
  json rows = json::array();
  for (int j = geo.height - 1; j >= 0; --j) {
    std::string line(static_cast<std::size_t>(geo.width), '?');
    for (int i = 0; i < geo.width; ++i) line[i] = label_char(spec.grid.at({i, j}));
    rows.push_back(std::move(line));
  }
  json ref = json::array();
  for (const auto& p : spec.reference_path) ref.push_back({p.x(), p.y()});
  const auto& m = spec.camera_mount;
  return json{
      {"name", spec.name},
      {"resolution", geo.resolution},
      {"origin", {geo.origin.x(), geo.origin.y()}},
      {"start", {spec.start.x, spec.start.y, spec.start.heading}},
      {"goal", {spec.goal.x(), spec.goal.y()}},
      {"reference_path", ref},
      {"camera",
       {{"fx", spec.camera.fx},
        {"fy", spec.camera.fy},
        {"cx", spec.camera.cx},
        {"cy", spec.camera.cy},
        {"width", spec.camera.width},
        {"height", spec.camera.height},
        {"mount", {m.x, m.y, m.z, m.pitch}}}},
      {"rows", rows},
  };
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << scenario_to_json(spec).dump(1) << '\n';
  if (!f) throw IoError("write failed for " + path.string());
}

std::filesystem::path bundled_scenario_dir() {
  return std::filesystem::path(TGS_DATA_DIR) / "scenarios";
}

std::vector<std::string> bundled_scenario_names() {
  return {"flowerbed", "curb", "crosswalk", "corner"};
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  const std::filesystem::path direct(name_or_path);
  if (std::filesystem::is_regular_file(direct)) return direct;
  const auto bundled = bundled_scenario_dir() / (name_or_path + ".json");
  if (std::filesystem::is_regular_file(bundled)) return bundled;
  return direct;  // load_scenario reports the missing file
}

}  // namespace tgs
