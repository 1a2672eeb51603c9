// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace tgs {

// Frames: robot x-forward / y-left / z-up; camera z-forward / x-right / y-down.

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Polyline = std::vector<Vec2>;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double heading_)
      : x(x_), y(y_), heading(normalize_angle(heading_)) {}

  Vec2 position() const { return {x, y}; }

  /// Maps a point expressed in this pose's local frame into the parent frame.
  Vec2 to_world(const Vec2& local) const;
  /// Inverse of to_world.
  Vec2 to_local(const Vec2& world) const;

  bool operator==(const Pose2D&) const = default;
};

Polyline to_world(const Pose2D& pose, std::span<const Vec2> local);
Polyline to_local(const Pose2D& pose, std::span<const Vec2> world);

/// Ordered waypoints in the robot frame. The robot's own position is not a
/// waypoint; the first waypoint is the first step ahead of it.
struct Trajectory {
  Polyline waypoints;
  double confidence = 1.0;

  double arc_length() const;
  /// True when every waypoint coincides (zero total arc length).
  bool is_degenerate() const { return arc_length() == 0.0; }
};

/// Throws ValidationError when M < 2, a step is zero or longer than
/// `max_step`, or the total arc length exceeds `max_length`.
void validate_trajectory(const Trajectory& traj, double max_step, double max_length);

double polyline_length(std::span<const Vec2> points);

struct CameraMount {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
  /// Downward tilt of the optical axis, radians.
  double pitch = 0.0;

  bool operator==(const CameraMount&) const = default;
};

struct CameraModel {
  double fx = 320.0;
  double fy = 320.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;
  /// Rigid transform taking robot-frame points to camera-frame points.
  Eigen::Isometry3d extrinsic = Eigen::Isometry3d::Identity();

  /// Standard forward-looking camera at `mount`, with the axis permutation
  /// from robot to camera convention folded into the extrinsic.
  static CameraModel from_mount(double fx, double fy, double cx, double cy, int width,
                                int height, const CameraMount& mount);

  /// Throws ValidationError naming the offending intrinsic.
  void validate() const;

  bool in_frame(const Eigen::Vector2d& uv) const {
    return uv.x() >= 0.0 && uv.x() < width && uv.y() >= 0.0 && uv.y() < height;
  }
};

inline constexpr double kNearPlane = 0.05;

struct PixelPolyline {
  /// Retained (u, v) pixels of the first contiguous visible run.
  std::vector<Eigen::Vector2d> points;
  /// One flag per source waypoint; true when the waypoint is not itself part
  /// of the retained run (behind the camera, out of frame, or after a gap).
  std::vector<bool> clipped;

  bool empty() const { return points.empty(); }
};

/// Lifts each waypoint onto the ground plane (z = 0) and applies the extrinsic.
std::vector<Vec3> to_camera_frame(const Trajectory& traj, const CameraModel& cam);
std::vector<Vec3> to_camera_frame(std::span<const Vec2> waypoints, const CameraModel& cam);

/// Pinhole projection with near-plane and frame clipping. Throws
/// EmptyProjection when nothing survives.
PixelPolyline project_to_image(std::span<const Vec3> points, const CameraModel& cam);

/// Exact discrete Frechet distance by dynamic programming over point pairs.
double frechet_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Symmetric point-set Hausdorff distance over the raw points.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

double distance_to_goal(const Trajectory& traj, const Vec2& goal);

/// Uniform arc-length resampling to `n` points, endpoints preserved.
Polyline resample(std::span<const Vec2> points, int n);
Trajectory resample(const Trajectory& traj, int n);

/// Arc-length position of the point on `points` closest to `query`.
double closest_arc_length(std::span<const Vec2> points, const Vec2& query);
/// Point at arc length `s` along `points`, clamped to the ends.
Vec2 point_at_arc_length(std::span<const Vec2> points, double s);
/// Sub-polyline covering arc lengths [s0, s1].
Polyline extract_window(std::span<const Vec2> points, double s0, double s1);

}  // namespace tgs
