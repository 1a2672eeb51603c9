// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/world.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "tgs/errors.hpp"

namespace tgs {

namespace {

struct LabelInfo {
  CellLabel label;
  char code;
  const char* name;
  bool geometric;
  bool semantic;
  Rgb color;
};

// Single source of truth for the label -> (file code, flags, colour) table.
constexpr LabelInfo kLabels[kLabelCount] = {
    {CellLabel::kPavement, 'P', "pavement", true, true, {128, 128, 128}},
    {CellLabel::kSidewalk, 'S', "sidewalk", true, true, {180, 170, 150}},
    {CellLabel::kCrosswalk, 'C', "crosswalk", true, true, {230, 230, 230}},
    {CellLabel::kRoad, 'R', "road", true, false, {60, 60, 65}},
    {CellLabel::kGrass, 'G', "grass", true, false, {70, 140, 60}},
    {CellLabel::kFlowerbed, 'F', "flowerbed", true, false, {170, 120, 150}},
    {CellLabel::kCurb, 'K', "curb", false, false, {200, 200, 120}},
    {CellLabel::kBuilding, 'B', "building", false, false, {140, 80, 60}},
    {CellLabel::kObstacle, 'O', "obstacle", false, false, {90, 60, 40}},
};

const LabelInfo& info(CellLabel label) { return kLabels[static_cast<int>(label)]; }

}  // namespace

char label_char(CellLabel label) { return info(label).code; }
const char* label_name(CellLabel label) { return info(label).name; }
bool geometrically_traversable(CellLabel label) { return info(label).geometric; }
bool semantically_traversable(CellLabel label) { return info(label).semantic; }
Rgb label_color(CellLabel label) { return info(label).color; }

std::optional<CellLabel> label_from_char(char c) {
  for (const auto& l : kLabels)
    if (l.code == c) return l.label;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grid

std::optional<CellIndex> GridGeometry::cell_of(const Vec2& world) const {
  const Vec2 rel = (world - origin) / resolution;
  const double fi = std::floor(rel.x()), fj = std::floor(rel.y());
  if (!(fi >= 0.0 && fj >= 0.0 && fi < width && fj < height)) return std::nullopt;
  return CellIndex{static_cast<int>(fi), static_cast<int>(fj)};
}

Vec2 GridGeometry::cell_center(const CellIndex& c) const {
  return origin + Vec2((c.i + 0.5) * resolution, (c.j + 0.5) * resolution);
}

SemanticGrid::SemanticGrid(GridGeometry geometry, std::vector<CellLabel> cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(geometry_.width) * geometry_.height)
    throw ValidationError("rows", "cell count does not match width * height");
}

SemanticGrid::SemanticGrid(GridGeometry geometry, CellLabel fill)
    : geometry_(geometry),
      cells_(static_cast<std::size_t>(geometry.width) * geometry.height, fill) {}

std::optional<CellLabel> SemanticGrid::label_at(const Vec2& world) const {
  const auto c = geometry_.cell_of(world);
  if (!c) return std::nullopt;
  return at(*c);
}

void SemanticGrid::fill_box(const Vec2& lo, const Vec2& hi, CellLabel label) {
  for (int j = 0; j < height(); ++j) {
    for (int i = 0; i < width(); ++i) {
      const Vec2 c = geometry_.cell_center({i, j});
      if (c.x() >= lo.x() && c.x() <= hi.x() && c.y() >= lo.y() && c.y() <= hi.y()) set({i, j}, label);
    }
  }
}

TraversabilityView TraversabilityView::from_grid(const SemanticGrid& grid) {
  TraversabilityView view;
  view.geometry = grid.geometry();
  view.geometric.resize(grid.cells().size());
  view.semantic.resize(grid.cells().size());
  for (std::size_t k = 0; k < grid.cells().size(); ++k) {
    view.geometric[k] = geometrically_traversable(grid.cells()[k]) ? 1 : 0;
    view.semantic[k] = semantically_traversable(grid.cells()[k]) ? 1 : 0;
  }
  return view;
}

bool TraversabilityView::traversable(TraversabilityLayer layer, const CellIndex& c) const {
  if (!geometry.contains(c)) return false;
  const auto& mask = layer == TraversabilityLayer::kGeometric ? geometric : semantic;
  return mask[geometry.flat(c)] != 0;
}

bool TraversabilityView::traversable(TraversabilityLayer layer, const Vec2& world) const {
  const auto c = geometry.cell_of(world);
  return c && traversable(layer, *c);
}

// ---------------------------------------------------------------------------
// Scenario invariants

void ScenarioSpec::validate() const {
  if (name.empty()) throw ValidationError("name", "must be non-empty");
  if (!(grid.resolution() > 0.0)) throw ValidationError("resolution", "must be positive");
  if (grid.width() <= 0 || grid.height() <= 0) throw ValidationError("rows", "grid is empty");
  const auto start_label = grid.label_at(start.position());
  if (!start_label) throw ValidationError("start", "outside the grid");
  if (!semantically_traversable(*start_label))
    throw ValidationError("start", std::string("lies on a ") + label_name(*start_label) + " cell");
  if (!grid.geometry().cell_of(goal)) throw ValidationError("goal", "outside the grid");
  if (reference_path.size() < 2) throw ValidationError("reference_path", "needs at least 2 points");
  for (std::size_t k = 0; k < reference_path.size(); ++k) {
    const auto label = grid.label_at(reference_path[k]);
    if (!label || !semantically_traversable(*label))
      throw ValidationError("reference_path",
                            "point " + std::to_string(k) + " is not on a semantically traversable cell");
  }
  camera.validate();
}

bool ScenarioSpec::operator==(const ScenarioSpec& other) const {
  return name == other.name && grid == other.grid && start == other.start && goal == other.goal &&
         reference_path == other.reference_path && camera_mount == other.camera_mount &&
         camera.fx == other.camera.fx && camera.fy == other.camera.fy &&
         camera.cx == other.camera.cx && camera.cy == other.camera.cy &&
         camera.width == other.camera.width && camera.height == other.camera.height &&
         camera.extrinsic.matrix() == other.camera.extrinsic.matrix();
}

// ---------------------------------------------------------------------------
// Sensors

LidarScan simulate_lidar(const SemanticGrid& grid, const Pose2D& pose, int beams, double range_max) {
  if (!grid.geometry().cell_of(pose.position()))
    throw PoseOutOfBounds("lidar pose outside the grid");
  LidarScan scan;
  scan.range_max = range_max;
  scan.angle_min = -std::numbers::pi;
  scan.angle_increment = 2.0 * std::numbers::pi / beams;
  scan.ranges.assign(beams, range_max);

  for (int b = 0; b < beams; ++b) {
    const double angle = pose.heading + scan.angle_min + b * scan.angle_increment;
    const Vec2 dir(std::cos(angle), std::sin(angle));
    double hit = range_max;
    traverse_grid_ray(grid.geometry(), pose.position(), dir, range_max,
                      [&](const CellIndex& c, double t_enter, double) {
                        if (!geometrically_traversable(grid.at(c))) {
                          hit = t_enter;
                          return false;
                        }
                        return true;
                      });
    scan.ranges[b] = std::clamp(hit, 1e-6, range_max);
  }
  return scan;
}

RgbImage render_camera_image(const SemanticGrid& grid, const Pose2D& pose, const CameraModel& cam) {
  if (!grid.geometry().cell_of(pose.position()))
    throw PoseOutOfBounds("camera pose outside the grid");

  RgbImage image(cam.width, cam.height, kSkyColor);
  const Eigen::Matrix3d r_cam_to_robot = cam.extrinsic.linear().transpose();
  const Vec3 cam_in_robot = -(r_cam_to_robot * cam.extrinsic.translation());
  const Vec2 cam_xy = pose.to_world(cam_in_robot.head<2>());
  const double cam_z = cam_in_robot.z();
  const double ch = std::cos(pose.heading), sh = std::sin(pose.heading);

  const bool has_buildings = std::find(grid.cells().begin(), grid.cells().end(),
                                       CellLabel::kBuilding) != grid.cells().end();
  const auto& geo = grid.geometry();
  const double horizon_range = 2.0 * (geo.width + geo.height) * geo.resolution;

  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const Vec3 ray_cam((u + 0.5 - cam.cx) / cam.fx, (v + 0.5 - cam.cy) / cam.fy, 1.0);
      const Vec3 ray_robot = r_cam_to_robot * ray_cam;
      const Vec2 dir(ch * ray_robot.x() - sh * ray_robot.y(), sh * ray_robot.x() + ch * ray_robot.y());
      const double dz = ray_robot.z();
      const double t_ground = dz < 0.0 ? -cam_z / dz : std::numeric_limits<double>::infinity();

      if (!has_buildings) {
        if (dz < 0.0) {
          const auto label = grid.label_at(cam_xy + t_ground * dir);
          image.set(u, v, label ? label_color(*label) : kVoidColor);
        }
        continue;
      }

      const double horiz = dir.norm();
      double t_max = t_ground;
      if (!std::isfinite(t_max)) t_max = horiz > 0.0 ? horizon_range / horiz : 0.0;
      Rgb color = dz < 0.0 ? kVoidColor : kSkyColor;
      traverse_grid_ray(geo, cam_xy, dir, t_max, [&](const CellIndex& c, double t0, double t1) {
        const CellLabel label = grid.at(c);
        if (label == CellLabel::kBuilding) {
          const double z0 = cam_z + dz * t0, z1 = cam_z + dz * t1;
          if (std::min(z0, z1) <= kBuildingHeight && std::max(z0, z1) >= 0.0) {
            color = label_color(label);
            return false;
          }
        }
        if (t1 >= t_ground) {
          color = label_color(label);
          return false;
        }
        return true;
      });
      image.set(u, v, color);
    }
  }
  return image;
}

// ---------------------------------------------------------------------------
// Kinematics

RobotState step_robot(const RobotState& state, const Action& action, double dt,
                      const RobotLimits& limits) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  constexpr double kSlack = 1e-12;
  if (std::abs(action.linear) > limits.v_max + kSlack)
    throw ActionLimitExceeded("linear velocity exceeds v_max");
  if (std::abs(action.angular) > limits.omega_max + kSlack)
    throw ActionLimitExceeded("angular velocity exceeds omega_max");

  RobotState next = state;
  const Pose2D& p = state.pose;
  // Midpoint heading keeps the Euler step within O(dt^3) of the exact arc.
  const double mid = p.heading + 0.5 * action.angular * dt;
  next.pose = Pose2D(p.x + action.linear * std::cos(mid) * dt,
                     p.y + action.linear * std::sin(mid) * dt,
                     p.heading + action.angular * dt);
  next.velocity_history.push_back(action);
  while (next.velocity_history.size() > limits.history) next.velocity_history.pop_front();
  return next;
}

std::vector<bool> trace_traversable(const TraversabilityView& view, TraversabilityLayer layer,
                                    const Trajectory& traj, const Pose2D& pose) {
  std::vector<bool> flags;
  flags.reserve(traj.waypoints.size());
  for (const auto& w : traj.waypoints) flags.push_back(view.traversable(layer, pose.to_world(w)));
  return flags;
}

}  // namespace tgs
