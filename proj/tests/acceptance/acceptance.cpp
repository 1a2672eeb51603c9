// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tgs/backends.hpp"
#include "tgs/errors.hpp"
#include "tgs/eval.hpp"
#include "tgs/pipeline.hpp"
#include "tgs/scenario_io.hpp"
#include "tgs/selection.hpp"
#include "tgs/trajgen.hpp"

using namespace tgs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects failures for one criterion; the first few are echoed.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Outcome {
  bool pass;
  std::string summary;
};

std::vector<ScenarioSpec> bundled() {
  std::vector<ScenarioSpec> out;
  for (const auto& n : bundled_scenario_names()) out.push_back(load_scenario(resolve_scenario(n)));
  return out;
}

SemanticGrid uniform(int w, int h, double res, CellLabel fill) {
  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = res;
  return SemanticGrid(g, fill);
}

Outcome finish(const Check& c, const std::string& summary) {
  std::string s = summary;
  for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) s += "\n    - " + c.failures[k];
  if (c.failures.size() > 5) s += "\n    - ... " + std::to_string(c.failures.size() - 5) + " more";
  return {c.failures.empty(), s};
}

// 1 ---------------------------------------------------------------------------
Outcome metric_oracles() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> len(1, 6);
  double worst_f = 0.0, worst_h = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto a = oracle::random_polyline(rng, len(rng));
    const auto b = oracle::random_polyline(rng, len(rng));
    const double err = std::abs(frechet_distance(a, b) - oracle::frechet_exhaustive(a, b));
    worst_f = std::max(worst_f, err);
    c.expect(err <= 1e-9, "frechet pair " + std::to_string(k));
  }
  std::uniform_int_distribution<int> hlen(1, 40);
  for (int k = 0; k < 500; ++k) {
    const auto a = oracle::random_polyline(rng, hlen(rng));
    const auto b = oracle::random_polyline(rng, hlen(rng));
    const double err = std::abs(hausdorff_distance(a, b) - oracle::hausdorff_bruteforce(a, b));
    worst_h = std::max(worst_h, err);
    c.expect(err <= 1e-9, "hausdorff pair " + std::to_string(k));
  }
  const double t = seconds_since(t0);
  c.expect(t < 10.0, "runtime " + std::to_string(t) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "200 Frechet pairs (max err %.1e), 500 Hausdorff pairs (max err %.1e), %.2f s",
                worst_f, worst_h, t);
  return finish(c, buf);
}

// 2 ---------------------------------------------------------------------------
Outcome dedup_invariant() {
  Check c;
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<int> cap_d(1, 4), len_d(1, 20), batch_d(1, 8);
  std::uniform_real_distribution<double> u(-1, 1), dt_d(0.2, 3.0);
  std::size_t survivors = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t cap = cap_d(rng);
    selection::CandidatePool pool(cap);
    Pose2D pose;
    const int updates = len_d(rng);
    for (int step = 0; step < updates; ++step) {
      pose = Pose2D(pose.x + u(rng), pose.y + u(rng), pose.heading + 0.3 * u(rng));
      std::vector<Trajectory> batch;
      const int n = batch_d(rng);
      for (int k = 0; k < n; ++k) {
        Trajectory t;
        Vec2 p(0, 0);
        for (int m = 0; m < 6; ++m) t.waypoints.push_back(p += Vec2(1 + u(rng), 2 * u(rng)));
        batch.push_back(t);
      }
      pool = selection::update_pool(pool, batch, pose);
      c.expect(pool.size() <= cap, "pool over capacity in trial " + std::to_string(trial));
    }
    const double d_t = dt_d(rng);
    const auto kept = selection::dedup_representatives(pool, d_t);
    survivors += kept.size();
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t b = a + 1; b < kept.size(); ++b)
        c.expect(oracle::hausdorff_bruteforce(kept[a].waypoints, kept[b].waypoints) > d_t,
                 "pair within d_t in trial " + std::to_string(trial));
  }
  return finish(c, "1000 random pools, capacity and pairwise separation hold (" + std::to_string(survivors) +
                       " survivors checked)");
}

// 3 ---------------------------------------------------------------------------
Outcome latent_mechanics() {
  Check c;
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> n(0, 1);
  auto rnd = [&](int r, int cols) {
    Eigen::MatrixXd m(r, cols);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
    return m;
  };
  double worst = 0.0, worst_lin = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int dim = 2 + k % 15;
    const trajgen::ProjectionHead h{rnd(dim, dim), rnd(dim, 1), k + 1};
    const trajgen::LatentVector z1{rnd(dim, 1)}, z2{rnd(dim, 1)};
    const double err =
        (trajgen::project_latent(z1, h).values - oracle::affine_naive(h.A, z1.values, h.b)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    c.expect(err <= 1e-12, "head " + std::to_string(k));
    const double a = n(rng), b = n(rng);
    const Eigen::VectorXd lhs = trajgen::project_latent({a * z1.values + b * z2.values}, h).values;
    const Eigen::VectorXd rhs = a * trajgen::project_latent(z1, h).values +
                                b * trajgen::project_latent(z2, h).values - (a + b - 1) * h.b;
    const double lin = (lhs - rhs).cwiseAbs().maxCoeff();
    worst_lin = std::max(worst_lin, lin);
    c.expect(lin <= 1e-9, "linearity " + std::to_string(k));
  }

  // Decoder whose only non-zero parameter is the output bias (L/M, 0) per step.
  auto w = trajgen::GeneratorWeights::random(1);
  w.layer1.A.setZero();
  w.layer1.b.setZero();
  w.layer2.A.setZero();
  w.layer2.b.setZero();
  const double step = 15.0 / w.M;
  for (int m = 0; m < w.M; ++m) w.layer2.b[2 * m] = step;
  const auto t = trajgen::decode_trajectory({rnd(w.L, 1)}, {rnd(w.D, 1)}, w, 15.0);
  double worst_wp = 0.0;
  for (int m = 0; m < w.M; ++m)
    worst_wp = std::max(worst_wp, (t.waypoints[m] - Vec2(step * (m + 1), 0.0)).norm());
  c.expect(worst_wp <= 1e-6, "straight decode error " + std::to_string(worst_wp));
  Polyline from_origin = {Vec2::Zero()};
  from_origin.insert(from_origin.end(), t.waypoints.begin(), t.waypoints.end());
  c.expect(std::abs(polyline_length(from_origin) - 15.0) <= 1e-6, "straight decode length");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "100 heads vs naive matmul (max err %.1e), linearity (max err %.1e), straight 15 m decode (max err %.1e m)",
                worst, worst_lin, worst_wp);
  return finish(c, buf);
}

// 4 ---------------------------------------------------------------------------
Outcome generator_contract() {
  Check c;
  std::mt19937_64 rng(4004);
  std::size_t waypoints = 0;
  int redraws = 0;
  for (const auto& s : bundled()) {
    const auto view = TraversabilityView::from_grid(s.grid);
    std::uniform_real_distribution<double> ux(0, s.grid.width() * s.grid.resolution());
    std::uniform_real_distribution<double> uy(0, s.grid.height() * s.grid.resolution());
    std::uniform_real_distribution<double> uh(-M_PI, M_PI);
    int done = 0;
    while (done < 20) {
      const Pose2D pose(ux(rng), uy(rng), uh(rng));
      if (!view.traversable(TraversabilityLayer::kSemantic, pose.position())) continue;
      trajgen::GeneratorConfig cfg;
      cfg.K = 8;
      std::vector<Trajectory> out;
      try {
        out = trajgen::sample_geometric(view, pose, cfg);
      } catch (const NoFreeSpace&) {
        ++redraws;  // nothing reachable ahead: not a sampled pose
        continue;
      }
      ++done;
      c.expect(out.size() == 8, s.name + ": wrong candidate count");
      for (const auto& t : out)
        for (const auto& p : t.waypoints) {
          ++waypoints;
          c.expect(view.traversable(TraversabilityLayer::kGeometric, pose.to_world(p)),
                   s.name + ": waypoint off geometric free space");
        }
    }
  }

  // Diversity in open space.
  const auto open = uniform(400, 400, 0.1, CellLabel::kPavement);
  const auto view = TraversabilityView::from_grid(open);
  double min_h = 1e300;
  for (int K : {4, 8, 12}) {
    for (int k = 0; k < 5; ++k) {
      const Pose2D pose(20 + k, 20 - k, 0.7 * k);
      trajgen::GeneratorConfig cfg;
      cfg.K = K;
      const auto out = trajgen::sample_geometric(view, pose, cfg);
      for (std::size_t a = 0; a < out.size(); ++a)
        for (std::size_t b = a + 1; b < out.size(); ++b)
          min_h = std::min(min_h, oracle::hausdorff_bruteforce(out[a].waypoints, out[b].waypoints));
    }
  }
  c.expect(min_h > open.resolution(), "open-space min pairwise Hausdorff " + std::to_string(min_h));
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "4 scenarios x 20 poses x K=8: %zu waypoints all geometric (%d boxed-in draws redrawn); open-space "
                "min Hausdorff %.2f m",
                waypoints, redraws, min_h);
  return finish(c, buf);
}

// 5 ---------------------------------------------------------------------------
Outcome projection_annotation() {
  Check c;
  CameraModel cam;
  cam.fx = cam.fy = 100;
  cam.cx = cam.cy = 64;
  cam.width = cam.height = 128;
  const std::vector<Vec3> pts = {Vec3(0, 0, 2), Vec3(1, 0, 2)};
  const auto p = project_to_image(pts, cam);
  c.expect(p.points.size() == 2 && (p.points[0] - Eigen::Vector2d(64, 64)).norm() <= 0.5 &&
               (p.points[1] - Eigen::Vector2d(114, 64)).norm() <= 0.5,
           "pinhole example");
  const auto mounted = CameraModel::from_mount(100, 100, 64, 64, 128, 128, {0, 0, 0.5, 0});
  const auto q = project_to_image(to_camera_frame(Polyline{Vec2(2, 0), Vec2(3, 0)}, mounted), mounted);
  // (0, 0.5, 2) in the camera frame projects to (64, 89).
  c.expect((q.points[0] - Eigen::Vector2d(64, 89)).norm() <= 0.5, "mounted pinhole example");

  const auto s = load_scenario(resolve_scenario("crosswalk"));
  const auto view = TraversabilityView::from_grid(s.grid);
  RobotState state;
  state.pose = s.start;
  trajgen::GeneratorConfig gcfg;
  const auto goal_local = s.start.to_local(s.goal);
  const auto cands = trajgen::sample_geometric(view, s.start, gcfg, goal_local);
  selection::CandidatePool pool(2);
  pool = selection::update_pool(pool, cands, s.start);
  auto markers = selection::sort_and_number(selection::dedup_representatives(pool, 1.0), goal_local);
  selection::project_markers(markers, s.camera);
  const auto base = render_camera_image(s.grid, s.start, s.camera);
  const auto img = selection::annotate_image(base, markers);
  std::size_t visible = 0;
  for (const auto& m : markers.items) visible += !m.polyline.empty();
  const auto centres = oracle::find_disc_centres(img, selection::kCircleRadius, selection::kCircleColor,
                                                 selection::kGlyphColor);
  c.expect(centres.size() == visible,
           "found " + std::to_string(centres.size()) + " discs for " + std::to_string(visible) + " visible markers");
  for (const auto& m : markers.items) {
    if (m.polyline.empty()) continue;
    const auto end = m.polyline.points.back();
    bool hit = false;
    for (const auto& ctr : centres) hit = hit || (std::abs(ctr.x() - end.x()) <= 1.0 && std::abs(ctr.y() - end.y()) <= 1.0);
    c.expect(hit, "no disc centre within 1 px of marker " + std::to_string(m.number));
  }
  const auto base2 = render_camera_image(s.grid, s.start, s.camera);
  const auto img2 = selection::annotate_image(base2, markers);
  c.expect(base == base2 && encode_png(img) == encode_png(img2), "rendering not bit-identical");
  return finish(c, "pinhole examples within 0.5 px; crosswalk frame shows " + std::to_string(centres.size()) +
                       " discs for " + std::to_string(visible) + " visible markers, centres within 1 px; renders bit-identical");
}

// 6 ---------------------------------------------------------------------------
Outcome trend_reproduction() {
  Check c;
  const auto scenarios = bundled();
  const auto t0 = Clock::now();
  const auto report = eval::run_benchmark(scenarios, eval::offline_variants(), 5, 7);
  const double t = seconds_since(t0);
  int pivot_wins = 0;
  std::string detail;
  for (const auto& s : report.scenarios) {
    const auto* tgs = report.find(s, "tgs-oracle");
    const auto* mtg = report.find(s, "mtg-heuristic");
    const auto* pivot = report.find(s, "pivot-random");
    if (!tgs || !mtg || !pivot || tgs->skipped || mtg->skipped || pivot->skipped) {
      c.expect(false, s + ": missing cell");
      continue;
    }
    const double gap = 100.0 * (tgs->mean_fraction - mtg->mean_fraction);
    c.expect(gap >= 10.0, s + ": traversability gap " + std::to_string(gap) + " pp");
    c.expect(tgs->mean_frechet < mtg->mean_frechet, s + ": tgs Frechet not below mtg");
    if (tgs->mean_frechet < pivot->mean_frechet) ++pivot_wins;
    char buf[160];
    std::snprintf(buf, sizeof buf, "\n    %-10s trav %.1f%% vs %.1f%%, Frechet %.2f vs %.2f (pivot %.2f)", s.c_str(),
                  100 * tgs->mean_fraction, 100 * mtg->mean_fraction, tgs->mean_frechet, mtg->mean_frechet,
                  pivot->mean_frechet);
    detail += buf;
  }
  c.expect(pivot_wins >= 3, "tgs beats pivot on Frechet in only " + std::to_string(pivot_wins) + " scenarios");
  c.expect(t < 120.0, "bench took " + std::to_string(t) + " s");
  char head[160];
  std::snprintf(head, sizeof head, "4 x 4 x 5 bench in %.1f s; tgs-oracle beats pivot-random on Frechet in %d/4", t,
                pivot_wins);
  return finish(c, head + detail);
}

// 7 ---------------------------------------------------------------------------
Outcome closed_loop() {
  Check c;
  std::string detail;
  for (const auto& s : bundled()) {
    pipeline::EpisodeConfig cfg;
    cfg.seed = 7;
    const auto a = pipeline::run_episode(s, cfg);
    const auto b = pipeline::run_episode(s, cfg);
    const auto view = TraversabilityView::from_grid(s.grid);
    const double occ = pipeline::semantic_occupancy(a, view);
    const auto hits = pipeline::collision_count(a, view);
    c.expect(a.outcome == pipeline::Outcome::kReached, s.name + ": outcome " + pipeline::outcome_name(a.outcome));
    c.expect(hits == 0, s.name + ": " + std::to_string(hits) + " collisions");
    c.expect(occ >= 0.95, s.name + ": occupancy " + std::to_string(occ));
    c.expect(pipeline::log_to_jsonl(a, false) == pipeline::log_to_jsonl(b, false), s.name + ": logs differ");
    char buf[120];
    std::snprintf(buf, sizeof buf, "\n    %-10s %s in %d steps, occupancy %.3f, collisions %zu", s.name.c_str(),
                  pipeline::outcome_name(a.outcome), a.steps, occ, hits);
    detail += buf;
  }
  return finish(c, "oracle episodes on all bundled scenarios, repeated runs byte-identical" + detail);
}

// 8 ---------------------------------------------------------------------------
std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Outcome parser_robustness() {
  Check c;
  const auto responses = read_lines(std::string(TGS_FIXTURE_DIR) + "/responses.txt");
  const auto expected = read_lines(std::string(TGS_FIXTURE_DIR) + "/responses.expected");
  c.expect(responses.size() == 25 && expected.size() == 25, "fixture size");
  const std::set<int> valid = {1, 2, 3, 4, 5, 6, 7, 8};
  int recovered = 0, flagged = 0;
  for (std::size_t k = 0; k < responses.size() && k < expected.size(); ++k) {
    const auto& e = expected[k];
    try {
      const int got = selection::parse_response(responses[k], valid);
      const bool ok = e != "unparseable" && e != "invalid" && got == std::stoi(e);
      recovered += ok;
      c.expect(ok, "line " + std::to_string(k + 1) + " parsed as " + std::to_string(got));
    } catch (const Unparseable&) {
      flagged += e == "unparseable";
      c.expect(e == "unparseable", "line " + std::to_string(k + 1) + " unexpectedly unparseable");
    } catch (const InvalidChoice&) {
      flagged += e == "invalid";
      c.expect(e == "invalid", "line " + std::to_string(k + 1) + " unexpectedly invalid");
    }
  }
  c.expect(recovered == 20 && flagged == 5, "recovered/flagged counts");

  // Every response through the replay backend, then past the end of the fixture.
  const auto grid = uniform(300, 200, 0.1, CellLabel::kPavement);
  const auto view = TraversabilityView::from_grid(grid);
  std::vector<Trajectory> ts;
  for (int k = 0; k < 8; ++k) {
    Trajectory t;
    const double b = -0.6 + 1.2 * k / 7.0;
    for (int m = 1; m <= 8; ++m) t.waypoints.push_back(Vec2(std::cos(b), std::sin(b)) * m);
    ts.push_back(t);
  }
  auto markers = selection::sort_and_number(ts, Vec2(20, 0));
  const auto bundle = selection::build_prompt(markers);
  const selection::SelectionContext ctx{&markers, &view, Pose2D(5, 10, 0)};
  auto replay = selection::ReplayBackend::from_file(std::string(TGS_FIXTURE_DIR) + "/responses.txt");
  int valid_choices = 0;
  for (int k = 0; k < 27; ++k) {
    const auto r = selection::select_with_fallback(replay, bundle, ctx);
    const bool ok = bundle.valid_numbers.contains(r.chosen);
    valid_choices += ok;
    c.expect(ok, "selection " + std::to_string(k) + " outside valid numbers");
  }
  return finish(c, std::to_string(recovered) + "/20 labels recovered, " + std::to_string(flagged) +
                       "/5 adversarial flagged, " + std::to_string(valid_choices) + "/27 fallback selections valid");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric oracle equivalence", metric_oracles},
      {"dedup invariant", dedup_invariant},
      {"latent projection and decoder mechanics", latent_mechanics},
      {"generator contract", generator_contract},
      {"projection and annotation", projection_annotation},
      {"trend reproduction", trend_reproduction},
      {"closed-loop soundness", closed_loop},
      {"parser robustness", parser_robustness},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.summary.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
