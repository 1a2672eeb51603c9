// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

// Geometric-sampler backend: Dijkstra over the geometric layer, farthest-point
// target spread, shortest-path extraction and smoothing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "tgs/errors.hpp"
#include "tgs/trajgen.hpp"

namespace tgs::trajgen {

namespace {

constexpr float kUnreached = std::numeric_limits<float>::infinity();
// Cost multiplier for cells closer than `clearance` to an obstacle.
constexpr float kTightPenalty = 4.0f;

// Square window of cells around the robot; all planning happens inside it.
struct Window {
  int i0 = 0, j0 = 0, w = 0, h = 0;

  bool contains(int i, int j) const { return i >= i0 && j >= j0 && i < i0 + w && j < j0 + h; }
  int index(int i, int j) const { return (j - j0) * w + (i - i0); }
  CellIndex cell(int k) const { return {i0 + k % w, j0 + k / w}; }
};

struct SearchResult {
  Window win;
  std::vector<std::uint8_t> free;   // geometrically traversable
  std::vector<std::uint8_t> comfy;  // free with clearance
  std::vector<float> cost;
  std::vector<float> length;  // metric path length along the cost-optimal tree
  std::vector<int> parent;
  int start = -1;
};

SearchResult search(const TraversabilityView& view, const CellIndex& start, const GeneratorConfig& cfg) {
  const auto& geo = view.geometry;
  const double res = geo.resolution;
  const int reach = static_cast<int>(std::ceil(cfg.max_length / res)) + 2;
  const int r = std::max(0, static_cast<int>(std::ceil(cfg.clearance / res)));

  SearchResult s;
  Window& win = s.win;
  win.i0 = std::max(0, start.i - reach);
  win.j0 = std::max(0, start.j - reach);
  win.w = std::min(geo.width, start.i + reach + 1) - win.i0;
  win.h = std::min(geo.height, start.j + reach + 1) - win.j0;
  const std::size_t n = static_cast<std::size_t>(win.w) * win.h;

  s.free.assign(n, 0);
  for (int j = 0; j < win.h; ++j)
    for (int i = 0; i < win.w; ++i)
      s.free[static_cast<std::size_t>(j) * win.w + i] =
          view.traversable(TraversabilityLayer::kGeometric, CellIndex{win.i0 + i, win.j0 + j});

  // Clearance: a free cell is comfy when no blocked cell (or the map edge)
  // lies within r cells of it.
  s.comfy = s.free;
  if (r > 0) {
    std::vector<std::pair<int, int>> disk;
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di)
        if (di * di + dj * dj <= r * r) disk.emplace_back(di, dj);
    for (int j = win.j0 - r; j < win.j0 + win.h + r; ++j) {
      for (int i = win.i0 - r; i < win.i0 + win.w + r; ++i) {
        if (view.traversable(TraversabilityLayer::kGeometric, CellIndex{i, j})) continue;
        for (const auto& [di, dj] : disk) {
          const int ii = i + di, jj = j + dj;
          if (win.contains(ii, jj)) s.comfy[win.index(ii, jj)] = 0;
        }
      }
    }
  }

  s.cost.assign(n, kUnreached);
  s.length.assign(n, kUnreached);
  s.parent.assign(n, -1);
  s.start = win.index(start.i, start.j);

  using Entry = std::pair<float, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  s.cost[s.start] = 0.0f;
  s.length[s.start] = 0.0f;
  open.emplace(0.0f, s.start);

  const float straight = static_cast<float>(res);
  const float diagonal = static_cast<float>(res * std::sqrt(2.0));
  const float max_len = static_cast<float>(cfg.max_length);
  constexpr int kDi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  constexpr int kDj[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const auto [c, k] = open.top();
    open.pop();
    if (c > s.cost[k]) continue;
    const int ci = win.i0 + k % win.w, cj = win.j0 + k / win.w;
    for (int d = 0; d < 8; ++d) {
      const int ni = ci + kDi[d], nj = cj + kDj[d];
      if (!win.contains(ni, nj)) continue;
      const int nk = win.index(ni, nj);
      if (!s.free[nk]) continue;
      if (d >= 4 && (!s.free[win.index(ci + kDi[d], cj)] || !s.free[win.index(ci, cj + kDj[d])]))
        continue;  // no corner cutting
      const float step = d < 4 ? straight : diagonal;
      const float len = s.length[k] + step;
      if (len > max_len) continue;
      const float nc = c + step * (s.comfy[nk] ? 1.0f : kTightPenalty);
      if (nc < s.cost[nk]) {
        s.cost[nk] = nc;
        s.length[nk] = len;
        s.parent[nk] = k;
        open.emplace(nc, nk);
      }
    }
  }
  return s;
}

// Greedy line-of-sight shortcutting: a chord is accepted when every cell it
// pierces is comfy or already on the grid path.
Polyline shortcut(const Polyline& path, const std::vector<int>& cells, const SearchResult& s,
                  const GridGeometry& geo) {
  std::vector<std::uint8_t> on_path(s.free.size(), 0);
  for (int k : cells) on_path[k] = 1;
  auto visible = [&](const Vec2& a, const Vec2& b) {
    bool ok = true;
    traverse_grid_ray(geo, a, b - a, 1.0, [&](const CellIndex& c, double, double) {
      if (!s.win.contains(c.i, c.j)) {
        ok = false;
        return false;
      }
      const int k = s.win.index(c.i, c.j);
      if (!s.free[k] || !(s.comfy[k] || on_path[k])) {
        ok = false;
        return false;
      }
      return true;
    });
    return ok;
  };

  Polyline out = {path.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < path.size()) {
    std::size_t next = anchor + 1;
    while (next + 1 < path.size() && visible(path[anchor], path[next + 1])) ++next;
    out.push_back(path[next]);
    anchor = next;
  }
  return out;
}

void midpoint_smooth(Polyline& pts, int passes) {
  for (int p = 0; p < passes; ++p) {
    Polyline next = pts;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) next[i] = 0.5 * (pts[i - 1] + pts[i + 1]);
    pts.swap(next);
  }
}

bool all_geometric(const TraversabilityView& view, const Polyline& world) {
  return std::all_of(world.begin(), world.end(), [&](const Vec2& p) {
    return view.traversable(TraversabilityLayer::kGeometric, p);
  });
}

// Resamples a world-frame path to M waypoints after the robot position.
Polyline to_waypoints(const Polyline& path, int M, double max_length) {
  Polyline capped = path;
  if (polyline_length(capped) > max_length) capped = extract_window(capped, 0.0, max_length);
  Polyline dense = resample(capped, M + 1);
  dense.erase(dense.begin());
  return dense;
}

}  // namespace

std::vector<Trajectory> sample_geometric(const TraversabilityView& view, const Pose2D& pose,
                                         const GeneratorConfig& cfg,
                                         const std::optional<Vec2>& goal_hint) {
  cfg.validate();
  const auto& geo = view.geometry;
  const auto start = geo.cell_of(pose.position());
  if (!start || !view.traversable(TraversabilityLayer::kGeometric, *start))
    throw NoFreeSpace("robot is not on geometrically free space");

  const SearchResult s = search(view, *start, cfg);
  const Window& win = s.win;

  // Target pool: comfy reached cells ahead of the robot and far enough away.
  std::vector<int> pool;
  std::vector<Vec2> pool_pts;
  for (int k = 0; k < static_cast<int>(s.cost.size()); ++k) {
    if (s.cost[k] == kUnreached || !s.comfy[k]) continue;
    const Vec2 p = geo.cell_center(win.cell(k));
    const Vec2 local = pose.to_local(p);
    if (local.x() < 0.0 || local.norm() < cfg.min_target_distance) continue;
    pool.push_back(k);
    pool_pts.push_back(p);
  }
  if (pool.empty()) throw NoFreeSpace("no reachable free space ahead of the robot");

  // Farthest-point sampling.
  std::size_t seed = 0;
  if (goal_hint) {
    const Vec2 goal_world = pose.to_world(*goal_hint);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < pool.size(); ++q) {
      const double d = (pool_pts[q] - goal_world).squaredNorm();
      if (d < best) {
        best = d;
        seed = q;
      }
    }
  } else {
    float best = -1.0f;
    for (std::size_t q = 0; q < pool.size(); ++q) {
      if (s.length[pool[q]] > best) {
        best = s.length[pool[q]];
        seed = q;
      }
    }
  }
  std::vector<std::size_t> targets = {seed};
  std::vector<double> nearest(pool.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(targets.size()) < cfg.K) {
    const Vec2& last = pool_pts[targets.back()];
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t q = 0; q < pool.size(); ++q) {
      nearest[q] = std::min(nearest[q], (pool_pts[q] - last).squaredNorm());
      if (nearest[q] > best) {
        best = nearest[q];
        pick = q;
      }
    }
    if (best <= 0.0) pick = targets[targets.size() % pool.size()];  // pool exhausted: cycle
    targets.push_back(pick);
  }

  std::vector<Trajectory> out;
  out.reserve(targets.size());
  for (std::size_t q : targets) {
    std::vector<int> cells;
    for (int k = pool[q]; k != -1; k = s.parent[k]) cells.push_back(k);
    std::reverse(cells.begin(), cells.end());

    Polyline raw = {pose.position()};
    for (std::size_t c = 1; c < cells.size(); ++c) raw.push_back(geo.cell_center(win.cell(cells[c])));

    Polyline smooth = shortcut(raw, cells, s, geo);
    smooth = resample(smooth, std::max(2, static_cast<int>(std::ceil(polyline_length(smooth) / geo.resolution)) + 1));
    midpoint_smooth(smooth, cfg.smoothing_passes);

    Polyline world = to_waypoints(smooth, cfg.M, cfg.max_length);
    if (!all_geometric(view, world)) world = to_waypoints(raw, cfg.M, cfg.max_length);
    out.push_back({to_local(pose, world), 1.0});
  }
  return out;
}

}  // namespace tgs::trajgen
