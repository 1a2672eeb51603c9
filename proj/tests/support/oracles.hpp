// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used to check the library. They are
// deliberately naive and share no code with src/.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "tgs/geometry.hpp"
#include "tgs/image.hpp"
#include "tgs/world.hpp"

namespace tgs::oracle {

inline double dist(const Vec2& a, const Vec2& b) { return std::hypot(a.x() - b.x(), a.y() - b.y()); }

/// Discrete Frechet by enumerating every monotone coupling (lattice path with
/// unit steps right, up or diagonal). Exponential; meant for <= 6 points.
inline double frechet_exhaustive(const Polyline& a, const Polyline& b) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> walk = [&](int i, int j, double worst) {
    worst = std::max(worst, dist(a[i], b[j]));
    if (worst >= best) return;
    if (i == n - 1 && j == m - 1) {
      best = worst;
      return;
    }
    if (i + 1 < n) walk(i + 1, j, worst);
    if (j + 1 < m) walk(i, j + 1, worst);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, worst);
  };
  walk(0, 0, 0.0);
  return best;
}

inline double hausdorff_bruteforce(const Polyline& a, const Polyline& b) {
  auto directed = [](const Polyline& p, const Polyline& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& y : q) nearest = std::min(nearest, dist(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Triple-loop matrix-vector product plus offset.
inline Eigen::VectorXd affine_naive(const Eigen::MatrixXd& A, const Eigen::VectorXd& z, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(A.rows());
  for (int r = 0; r < A.rows(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < A.cols(); ++c) acc += A(r, c) * z[c];
    out[r] = acc + b[r];
  }
  return out;
}

/// Exact unicycle pose after constant (v, w) for time t from (x, y, th).
inline Pose2D unicycle_arc(const Pose2D& p, double v, double w, double t) {
  if (std::abs(w) < 1e-12) return {p.x + v * t * std::cos(p.heading), p.y + v * t * std::sin(p.heading), p.heading};
  const double r = v / w;
  const double th = p.heading + w * t;
  return {p.x + r * (std::sin(th) - std::sin(p.heading)), p.y - r * (std::cos(th) - std::cos(p.heading)), th};
}

/// Cumulative-length table lookup: point at arc length s.
inline Vec2 point_at(const Polyline& pts, double s) {
  double acc = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double seg = dist(pts[k - 1], pts[k]);
    if (acc + seg >= s && seg > 0.0) {
      const double f = (s - acc) / seg;
      return pts[k - 1] + f * (pts[k] - pts[k - 1]);
    }
    acc += seg;
  }
  return pts.back();
}

/// First hit of a ray against every blocked cell, each intersected as an
/// axis-aligned box by the slab method. Returns range_max when nothing hits.
inline double ray_first_hit(const SemanticGrid& grid, const Vec2& origin, double angle, double range_max) {
  const Vec2 d(std::cos(angle), std::sin(angle));
  const auto& g = grid.geometry();
  double best = range_max;
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      if (geometrically_traversable(grid.at({i, j}))) continue;
      const Vec2 lo = g.origin + Vec2(i, j) * g.resolution;
      const Vec2 hi = lo + Vec2(g.resolution, g.resolution);
      double t0 = 0.0, t1 = range_max;
      bool miss = false;
      for (int ax = 0; ax < 2 && !miss; ++ax) {
        if (std::abs(d[ax]) < 1e-15) {
          if (origin[ax] < lo[ax] || origin[ax] > hi[ax]) miss = true;
          continue;
        }
        double a = (lo[ax] - origin[ax]) / d[ax], b = (hi[ax] - origin[ax]) / d[ax];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
      }
      if (!miss && t0 <= t1) best = std::min(best, t0);
    }
  }
  return best;
}

/// Greedy filter in the given order, checked against every pair directly.
inline std::vector<std::size_t> greedy_dedup_indices(const std::vector<Polyline>& trajs, double d_t) {
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    bool ok = true;
    for (std::size_t q : kept) ok = ok && hausdorff_bruteforce(trajs[k], trajs[q]) > d_t;
    if (ok) kept.push_back(k);
  }
  return kept;
}

/// Largest subset (by exhaustive enumeration) in which all pairs exceed d_t.
inline std::size_t max_separated_subset(const std::vector<Polyline>& trajs, double d_t) {
  const std::size_t n = trajs.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = a + 1; b < n && ok; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u)) ok = hausdorff_bruteforce(trajs[a], trajs[b]) > d_t;
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

/// Centres of numbered discs in an annotated image: pixels where a full disc
/// of `radius` fits inside the red-or-white mask (pixels outside the frame
/// count as inside), grouped into 8-connected clusters. Returns the mean
/// position of each cluster.
inline std::vector<Eigen::Vector2d> find_disc_centres(const RgbImage& img, int radius, Rgb disc, Rgb glyph) {
  const int w = img.width(), h = img.height();
  auto in_mask = [&](int u, int v) {
    if (u < 0 || v < 0 || u >= w || v >= h) return true;
    const Rgb c = img.at(u, v);
    return c == disc || c == glyph;
  };
  std::vector<std::pair<int, int>> offsets;
  for (int dv = -radius; dv <= radius; ++dv)
    for (int du = -radius; du <= radius; ++du)
      if (du * du + dv * dv <= radius * radius) offsets.emplace_back(du, dv);

  std::vector<std::uint8_t> centre(static_cast<std::size_t>(w) * h, 0);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      if (img.at(u, v) != disc && img.at(u, v) != glyph) continue;
      bool all = true;
      for (const auto& [du, dv] : offsets)
        if (!in_mask(u + du, v + dv)) {
          all = false;
          break;
        }
      centre[static_cast<std::size_t>(v) * w + u] = all;
    }

  std::vector<Eigen::Vector2d> out;
  std::vector<std::uint8_t> seen(centre.size(), 0);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const auto k = static_cast<std::size_t>(v) * w + u;
      if (!centre[k] || seen[k]) continue;
      std::vector<std::pair<int, int>> stack = {{u, v}};
      seen[k] = 1;
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      int count = 0;
      while (!stack.empty()) {
        auto [cu, cv] = stack.back();
        stack.pop_back();
        sum += Eigen::Vector2d(cu, cv);
        ++count;
        for (int dv = -1; dv <= 1; ++dv)
          for (int du = -1; du <= 1; ++du) {
            const int nu = cu + du, nv = cv + dv;
            if (nu < 0 || nv < 0 || nu >= w || nv >= h) continue;
            const auto nk = static_cast<std::size_t>(nv) * w + nu;
            if (centre[nk] && !seen[nk]) {
              seen[nk] = 1;
              stack.emplace_back(nu, nv);
            }
          }
      }
      out.push_back(sum / count);
    }
  return out;
}

/// BFS over the semantic layer between the cells of two points.
inline bool semantic_path_exists(const TraversabilityView& view, const Vec2& from, const Vec2& to) {
  const auto& g = view.geometry;
  const auto s = g.cell_of(from), t = g.cell_of(to);
  if (!s || !t) return false;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.width) * g.height, 0);
  std::vector<CellIndex> queue = {*s};
  seen[g.flat(*s)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const CellIndex c = queue[head];
    if (c == *t) return true;
    const CellIndex next[4] = {{c.i + 1, c.j}, {c.i - 1, c.j}, {c.i, c.j + 1}, {c.i, c.j - 1}};
    for (const auto& n : next) {
      if (!g.contains(n) || seen[g.flat(n)] || !view.traversable(TraversabilityLayer::kSemantic, n)) continue;
      seen[g.flat(n)] = 1;
      queue.push_back(n);
    }
  }
  return false;
}

inline Polyline random_polyline(std::mt19937_64& rng, int n, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Polyline p;
  for (int k = 0; k < n; ++k) p.emplace_back(u(rng), u(rng));
  return p;
}

}  // namespace tgs::oracle
