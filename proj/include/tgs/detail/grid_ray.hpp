// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace tgs {

// Amanatides-Woo voxel traversal restricted to the grid rectangle.
template <typename Visit>
void traverse_grid_ray(const GridGeometry& g, const Vec2& origin, const Vec2& dir, double t_max,
                       Visit&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double res = g.resolution;
  const Vec2 lo = g.origin;
  const Vec2 hi = g.origin + Vec2(g.width * res, g.height * res);

  // Slab clip against the grid rectangle.
  double t_enter = 0.0, t_exit = t_max;
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] >= hi[axis]) return;
      continue;
    }
    double ta = (lo[axis] - origin[axis]) / dir[axis];
    double tb = (hi[axis] - origin[axis]) / dir[axis];
    if (ta > tb) std::swap(ta, tb);
    t_enter = std::max(t_enter, ta);
    t_exit = std::min(t_exit, tb);
  }
  if (t_enter > t_exit) return;

  const Vec2 start = origin + t_enter * dir;
  int ci = static_cast<int>(std::floor((start.x() - lo.x()) / res));
  int cj = static_cast<int>(std::floor((start.y() - lo.y()) / res));
  ci = std::clamp(ci, 0, g.width - 1);
  cj = std::clamp(cj, 0, g.height - 1);

  const int step_i = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_j = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  auto boundary_t = [&](int axis, int cell, int step) {
    if (step == 0) return kInf;
    const double edge = lo[axis] + (step > 0 ? cell + 1 : cell) * res;
    return (edge - origin[axis]) / dir[axis];
  };
  double t_next_i = boundary_t(0, ci, step_i);
  double t_next_j = boundary_t(1, cj, step_j);
  const double dt_i = step_i != 0 ? res / std::abs(dir.x()) : kInf;
  const double dt_j = step_j != 0 ? res / std::abs(dir.y()) : kInf;

  double t = t_enter;
  while (t <= t_exit) {
    const double t_leave = std::min({t_next_i, t_next_j, t_exit});
    if (!visit(CellIndex{ci, cj}, t, t_leave)) return;
    if (t_leave >= t_exit) return;
    if (t_next_i < t_next_j) {
      ci += step_i;
      t = t_next_i;
      t_next_i += dt_i;
    } else {
      cj += step_j;
      t = t_next_j;
      t_next_j += dt_j;
    }
    if (ci < 0 || cj < 0 || ci >= g.width || cj >= g.height) return;
  }
}

}  // namespace tgs
