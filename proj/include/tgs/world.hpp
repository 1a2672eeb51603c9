// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "tgs/geometry.hpp"
#include "tgs/image.hpp"

namespace tgs {

enum class CellLabel : std::uint8_t {
  kPavement,
  kSidewalk,
  kCrosswalk,
  kRoad,
  kGrass,
  kFlowerbed,
  kCurb,
  kBuilding,
  kObstacle,
};

inline constexpr int kLabelCount = 9;

/// File encoding: P S C R G F K B O.
char label_char(CellLabel label);
std::optional<CellLabel> label_from_char(char c);
const char* label_name(CellLabel label);

/// Occluding or elevated cells: building, obstacle, curb.
bool geometrically_traversable(CellLabel label);
/// Human-compliant surfaces for a wheeled robot: pavement, sidewalk, crosswalk.
bool semantically_traversable(CellLabel label);
/// Fixed render palette; documented in docs/formats.md.
Rgb label_color(CellLabel label);

inline constexpr Rgb kSkyColor{135, 190, 235};
inline constexpr Rgb kVoidColor{30, 30, 30};

struct CellIndex {
  int i = 0;  // column, along +x
  int j = 0;  // row, along +y
  bool operator==(const CellIndex&) const = default;
};

/// Placement of a grid in the world: `origin` is the lower-left corner of
/// cell (0, 0); cell (i, j) spans [origin + (i, j) * res, origin + (i+1, j+1) * res).
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = 0.1;
  Vec2 origin = Vec2::Zero();

  bool contains(const CellIndex& c) const { return c.i >= 0 && c.j >= 0 && c.i < width && c.j < height; }
  std::optional<CellIndex> cell_of(const Vec2& world) const;
  Vec2 cell_center(const CellIndex& c) const;
  std::size_t flat(const CellIndex& c) const { return static_cast<std::size_t>(c.j) * width + c.i; }

  bool operator==(const GridGeometry&) const = default;
};

class SemanticGrid {
 public:
  SemanticGrid() = default;
  SemanticGrid(GridGeometry geometry, std::vector<CellLabel> cells);
  /// Uniformly labelled grid.
  SemanticGrid(GridGeometry geometry, CellLabel fill);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }

  CellLabel at(const CellIndex& c) const { return cells_[geometry_.flat(c)]; }
  void set(const CellIndex& c, CellLabel label) { cells_[geometry_.flat(c)] = label; }
  /// Label of the cell containing `world`, or nullopt off-grid.
  std::optional<CellLabel> label_at(const Vec2& world) const;
  /// Labels every cell whose centre lies in the axis-aligned box [lo, hi].
  void fill_box(const Vec2& lo, const Vec2& hi, CellLabel label);

  const std::vector<CellLabel>& cells() const { return cells_; }
  bool operator==(const SemanticGrid&) const = default;

 private:
  GridGeometry geometry_;
  std::vector<CellLabel> cells_;
};

enum class TraversabilityLayer { kGeometric, kSemantic };

/// Binary geometric and semantic layers derived from a SemanticGrid.
struct TraversabilityView {
  GridGeometry geometry;
  std::vector<std::uint8_t> geometric;
  std::vector<std::uint8_t> semantic;

  static TraversabilityView from_grid(const SemanticGrid& grid);

  bool traversable(TraversabilityLayer layer, const CellIndex& c) const;
  /// Off-grid points are non-traversable.
  bool traversable(TraversabilityLayer layer, const Vec2& world) const;
};

struct ScenarioSpec {
  std::string name;
  SemanticGrid grid;
  Pose2D start;
  Vec2 goal = Vec2::Zero();
  Polyline reference_path;
  CameraMount camera_mount;
  CameraModel camera;

  /// Throws ValidationError naming the failing field.
  void validate() const;
  bool operator==(const ScenarioSpec& other) const;
};

struct LidarScan {
  std::vector<double> ranges;
  double angle_min = 0.0;
  double angle_increment = 0.0;
  double range_max = 20.0;

  bool operator==(const LidarScan&) const = default;
};

struct LidarConfig {
  int beams = 360;
  double range_max = 20.0;
};

struct Action {
  double linear = 0.0;   // m/s
  double angular = 0.0;  // rad/s
  bool operator==(const Action&) const = default;
};

struct RobotLimits {
  double v_max = 1.0;
  double omega_max = 1.8;
  std::size_t history = 5;
};

struct RobotState {
  Pose2D pose;
  std::deque<Action> velocity_history;  // oldest first
};

/// Beams sweep a full circle starting at the robot's heading - pi. Only
/// geometrically non-traversable cells reflect.
LidarScan simulate_lidar(const SemanticGrid& grid, const Pose2D& pose, int beams, double range_max);

/// Perspective ground-plane rendering with extruded buildings.
RgbImage render_camera_image(const SemanticGrid& grid, const Pose2D& pose, const CameraModel& cam);

inline constexpr double kBuildingHeight = 3.0;

/// Unicycle step using the mid-step heading. Throws ActionLimitExceeded.
RobotState step_robot(const RobotState& state, const Action& action, double dt,
                      const RobotLimits& limits = {});

/// One flag per waypoint of `traj` (robot frame at `pose`).
std::vector<bool> trace_traversable(const TraversabilityView& view, TraversabilityLayer layer,
                                    const Trajectory& traj, const Pose2D& pose);

/// Visits the cells pierced by the ray origin + t * dir (dir need not be unit)
/// for t in [0, t_max], in order, calling visit(cell, t_enter, t_exit). The
/// visitor returns false to stop. Traversal ends on leaving the grid.
template <typename Visit>
void traverse_grid_ray(const GridGeometry& g, const Vec2& origin, const Vec2& dir, double t_max,
                       Visit&& visit);

}  // namespace tgs

#include "tgs/detail/grid_ray.hpp"
