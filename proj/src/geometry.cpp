// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tgs/errors.hpp"

namespace tgs {

double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

Vec2 Pose2D::to_world(const Vec2& local) const {
  const double c = std::cos(heading), s = std::sin(heading);
  return {x + c * local.x() - s * local.y(), y + s * local.x() + c * local.y()};
}

Vec2 Pose2D::to_local(const Vec2& world) const {
  const double c = std::cos(heading), s = std::sin(heading);
  const double dx = world.x() - x, dy = world.y() - y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Polyline to_world(const Pose2D& pose, std::span<const Vec2> local) {
  Polyline out;
  out.reserve(local.size());
  for (const auto& p : local) out.push_back(pose.to_world(p));
  return out;
}

Polyline to_local(const Pose2D& pose, std::span<const Vec2> world) {
  Polyline out;
  out.reserve(world.size());
  for (const auto& p : world) out.push_back(pose.to_local(p));
  return out;
}

double polyline_length(std::span<const Vec2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += (points[i] - points[i - 1]).norm();
  return total;
}

double Trajectory::arc_length() const { return polyline_length(waypoints); }

void validate_trajectory(const Trajectory& traj, double max_step, double max_length) {
  if (traj.waypoints.size() < 2) throw ValidationError("waypoints", "need at least 2 waypoints");
  for (std::size_t i = 1; i < traj.waypoints.size(); ++i) {
    const double step = (traj.waypoints[i] - traj.waypoints[i - 1]).norm();
    if (!(step > 0.0)) throw ValidationError("waypoints", "repeated waypoint");
    if (step > max_step) throw ValidationError("waypoints", "step exceeds max_step");
  }
  if (traj.arc_length() > max_length) throw ValidationError("waypoints", "longer than max_length");
  if (!(traj.confidence >= 0.0 && traj.confidence <= 1.0))
    throw ValidationError("confidence", "outside [0, 1]");
}

// ---------------------------------------------------------------------------
// Camera

CameraModel CameraModel::from_mount(double fx, double fy, double cx, double cy, int width,
                                    int height, const CameraMount& mount) {
  CameraModel cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = cx;
  cam.cy = cy;
  cam.width = width;
  cam.height = height;

  const double c = std::cos(mount.pitch), s = std::sin(mount.pitch);
  // Camera axes expressed in the robot frame.
  const Vec3 x_axis(0.0, -1.0, 0.0);
  const Vec3 y_axis(-s, 0.0, -c);
  const Vec3 z_axis(c, 0.0, -s);
  Eigen::Matrix3d rotation;
  rotation.row(0) = x_axis.transpose();
  rotation.row(1) = y_axis.transpose();
  rotation.row(2) = z_axis.transpose();

  cam.extrinsic = Eigen::Isometry3d::Identity();
  cam.extrinsic.linear() = rotation;
  cam.extrinsic.translation() = -rotation * Vec3(mount.x, mount.y, mount.z);
  return cam;
}

void CameraModel::validate() const {
  if (!(fx > 0.0)) throw ValidationError("camera.fx", "must be positive");
  if (!(fy > 0.0)) throw ValidationError("camera.fy", "must be positive");
  if (width <= 0) throw ValidationError("camera.width", "must be positive");
  if (height <= 0) throw ValidationError("camera.height", "must be positive");
  if (!(cx >= 0.0 && cx < width)) throw ValidationError("camera.cx", "must lie in [0, width)");
  if (!(cy >= 0.0 && cy < height)) throw ValidationError("camera.cy", "must lie in [0, height)");
}

std::vector<Vec3> to_camera_frame(std::span<const Vec2> waypoints, const CameraModel& cam) {
  std::vector<Vec3> out;
  out.reserve(waypoints.size());
  for (const auto& w : waypoints) out.push_back(cam.extrinsic * Vec3(w.x(), w.y(), 0.0));
  return out;
}

std::vector<Vec3> to_camera_frame(const Trajectory& traj, const CameraModel& cam) {
  return to_camera_frame(traj.waypoints, cam);
}

namespace {

Eigen::Vector2d pinhole(const Vec3& p, const CameraModel& cam) {
  return {cam.fx * p.x() / p.z() + cam.cx, cam.fy * p.y() / p.z() + cam.cy};
}

// Liang-Barsky clip of segment a->b against [0, w) x [0, h). Returns false
// when the segment misses the frame.
bool clip_to_frame(Eigen::Vector2d& a, Eigen::Vector2d& b, double w, double h) {
  // Keep retained coordinates strictly below the upper bound.
  const double umax = std::nextafter(w, 0.0);
  const double vmax = std::nextafter(h, 0.0);
  const Eigen::Vector2d d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x(), umax - a.x(), a.y(), vmax - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const Eigen::Vector2d a0 = a;
  a = t0 == 0.0 ? a0 : Eigen::Vector2d(a0 + t0 * d);
  b = t1 == 1.0 ? Eigen::Vector2d(a0 + d) : Eigen::Vector2d(a0 + t1 * d);
  a = a.cwiseMax(Eigen::Vector2d::Zero()).cwiseMin(Eigen::Vector2d(umax, vmax));
  b = b.cwiseMax(Eigen::Vector2d::Zero()).cwiseMin(Eigen::Vector2d(umax, vmax));
  return true;
}

}  // namespace

PixelPolyline project_to_image(std::span<const Vec3> points, const CameraModel& cam) {
  PixelPolyline out;
  out.clipped.assign(points.size(), true);

  auto visible = [&](const Vec3& p) {
    return p.z() > kNearPlane && cam.in_frame(pinhole(p, cam));
  };

  if (points.size() == 1) {
    if (visible(points[0])) {
      out.points.push_back(pinhole(points[0], cam));
      out.clipped[0] = false;
    }
  }

  bool finished = false;
  for (std::size_t i = 1; i < points.size() && !finished; ++i) {
    Vec3 a = points[i - 1], b = points[i];
    const bool a_front = a.z() > kNearPlane, b_front = b.z() > kNearPlane;
    if (!a_front && !b_front) {
      if (!out.points.empty()) finished = true;
      continue;
    }
    // Near-plane clip in 3D; perspective maps the remaining segment to a segment.
    if (!a_front) a = a + (b - a) * ((kNearPlane - a.z()) / (b.z() - a.z()));
    if (!b_front) b = b + (a - b) * ((kNearPlane - b.z()) / (a.z() - b.z()));
    // Keep strictly in front of the plane after interpolation round-off.
    if (a.z() <= kNearPlane) a.z() = std::nextafter(kNearPlane, 1.0);
    if (b.z() <= kNearPlane) b.z() = std::nextafter(kNearPlane, 1.0);

    Eigen::Vector2d ua = pinhole(a, cam), ub = pinhole(b, cam);
    const Eigen::Vector2d ua_raw = ua, ub_raw = ub;
    if (!clip_to_frame(ua, ub, cam.width, cam.height)) {
      if (!out.points.empty()) finished = true;
      continue;
    }
    if (out.points.empty()) {
      out.points.push_back(ua);
      if (a_front && ua == ua_raw) out.clipped[i - 1] = false;
    } else if (out.points.back() != ua) {
      // Re-entry after leaving the frame starts a second run; keep the first.
      finished = true;
      continue;
    }
    if (ub != ua || out.points.size() == 1) {
      if (ub != out.points.back()) out.points.push_back(ub);
    }
    if (b_front && ub == ub_raw) {
      out.clipped[i] = false;
    } else {
      finished = true;
    }
  }

  if (out.points.empty()) throw EmptyProjection("no waypoint survives clipping");
  return out;
}

// ---------------------------------------------------------------------------
// Curve metrics

double frechet_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw EmptyCurve("frechet_distance on empty curve");
  const std::size_t n = a.size(), m = b.size();
  // Row-by-row coupling table; only the previous row is needed.
  std::vector<double> prev(m), curr(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = (a[i] - b[j]).norm();
      double reach;
      if (i == 0 && j == 0) {
        reach = d;
      } else if (i == 0) {
        reach = std::max(curr[j - 1], d);
      } else if (j == 0) {
        reach = std::max(prev[0], d);
      } else {
        reach = std::max(std::min({prev[j], prev[j - 1], curr[j - 1]}), d);
      }
      curr[j] = reach;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

namespace {

double directed_hausdorff(std::span<const Vec2> from, std::span<const Vec2> to) {
  double worst = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) {
      best = std::min(best, (p - q).squaredNorm());
      if (best <= worst) break;  // cannot raise the maximum
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw EmptyCurve("hausdorff_distance on empty curve");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double distance_to_goal(const Trajectory& traj, const Vec2& goal) {
  if (traj.waypoints.empty()) throw EmptyCurve("distance_to_goal on empty trajectory");
  return (traj.waypoints.back() - goal).norm();
}

// ---------------------------------------------------------------------------
// Arc-length utilities

Polyline resample(std::span<const Vec2> points, int n) {
  if (n < 2) throw DegenerateCurve("resample needs n >= 2");
  if (points.empty()) throw EmptyCurve("resample on empty curve");
  const double total = polyline_length(points);
  if (!(total > 0.0)) throw DegenerateCurve("resample of zero-length curve");

  Polyline out;
  out.reserve(n);
  out.push_back(points.front());
  std::size_t seg = 1;
  double seg_start = 0.0;
  for (int k = 1; k < n - 1; ++k) {
    const double s = total * k / (n - 1);
    while (seg + 1 < points.size() &&
           seg_start + (points[seg] - points[seg - 1]).norm() < s) {
      seg_start += (points[seg] - points[seg - 1]).norm();
      ++seg;
    }
    const double len = (points[seg] - points[seg - 1]).norm();
    const double t = len > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 0.0;
    out.push_back(points[seg - 1] + t * (points[seg] - points[seg - 1]));
  }
  out.push_back(points.back());
  return out;
}

Trajectory resample(const Trajectory& traj, int n) {
  return {resample(traj.waypoints, n), traj.confidence};
}

double closest_arc_length(std::span<const Vec2> points, const Vec2& query) {
  if (points.empty()) throw EmptyCurve("closest_arc_length on empty curve");
  double best_d2 = (points[0] - query).squaredNorm();
  double best_s = 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec2 seg = points[i] - points[i - 1];
    const double len2 = seg.squaredNorm();
    const double len = std::sqrt(len2);
    const double t = len2 > 0.0 ? std::clamp((query - points[i - 1]).dot(seg) / len2, 0.0, 1.0) : 0.0;
    const double d2 = (points[i - 1] + t * seg - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = s + t * len;
    }
    s += len;
  }
  return best_s;
}

Vec2 point_at_arc_length(std::span<const Vec2> points, double s) {
  if (points.empty()) throw EmptyCurve("point_at_arc_length on empty curve");
  if (s <= 0.0) return points.front();
  double acc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double len = (points[i] - points[i - 1]).norm();
    if (acc + len >= s && len > 0.0) return points[i - 1] + (s - acc) / len * (points[i] - points[i - 1]);
    acc += len;
  }
  return points.back();
}

Polyline extract_window(std::span<const Vec2> points, double s0, double s1) {
  if (points.empty()) throw EmptyCurve("extract_window on empty curve");
  Polyline out;
  out.push_back(point_at_arc_length(points, s0));
  double acc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    acc += (points[i] - points[i - 1]).norm();
    if (acc > s0 && acc < s1) out.push_back(points[i]);
  }
  const Vec2 end = point_at_arc_length(points, s1);
  if ((end - out.back()).norm() > 0.0 || out.size() == 1) out.push_back(end);
  return out;
}

}  // namespace tgs
