// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tgs/errors.hpp"
#include "tgs/scenario_io.hpp"
#include "tgs/world.hpp"

using namespace tgs;
using doctest::Approx;

namespace {

SemanticGrid uniform(int w, int h, double res, CellLabel fill) {
  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = res;
  return SemanticGrid(g, fill);
}

/// Oracle colour of pixel (u, v): march the pixel ray in fine steps and
/// report the first building slab it meets below roof height, otherwise the
/// ground cell it lands on.
Rgb render_oracle(const SemanticGrid& grid, const Pose2D& pose, const CameraModel& cam, int u, int v) {
  const Eigen::Isometry3d cam_to_robot = cam.extrinsic.inverse();
  const Vec3 origin_r = cam_to_robot.translation();
  const Vec3 ray_r = cam_to_robot.linear() * Vec3((u + 0.5 - cam.cx) / cam.fx, (v + 0.5 - cam.cy) / cam.fy, 1.0);
  const Vec2 o = pose.to_world(origin_r.head<2>());
  const Vec2 d = pose.to_world(ray_r.head<2>()) - pose.position();
  const double t_ground = ray_r.z() < 0.0 ? -origin_r.z() / ray_r.z() : 1e9;
  const double step = grid.resolution() / 200.0 / std::max(d.norm(), 1e-9);
  const double t_end = std::min(t_ground, 200.0 / std::max(d.norm(), 1e-9));
  for (double t = 0.0; t < t_end; t += step) {
    const auto label = grid.label_at(o + t * d);
    if (!label) break;
    const double z = origin_r.z() + t * ray_r.z();
    if (*label == CellLabel::kBuilding && z <= kBuildingHeight && z >= 0.0) return label_color(*label);
  }
  if (ray_r.z() >= 0.0) return kSkyColor;
  const auto label = grid.label_at(o + t_ground * d);
  return label ? label_color(*label) : kVoidColor;
}

std::vector<ScenarioSpec> bundled() {
  std::vector<ScenarioSpec> out;
  for (const auto& name : bundled_scenario_names()) out.push_back(load_scenario(resolve_scenario(name)));
  return out;
}

}  // namespace

TEST_SUITE("world") {
  TEST_CASE("label encoding round trip and layer rules") {
    for (int k = 0; k < kLabelCount; ++k) {
      const auto label = static_cast<CellLabel>(k);
      CHECK(label_from_char(label_char(label)) == label);
    }
    CHECK_FALSE(label_from_char('x').has_value());
    CHECK(semantically_traversable(CellLabel::kSidewalk));
    CHECK(semantically_traversable(CellLabel::kPavement));
    CHECK(semantically_traversable(CellLabel::kCrosswalk));
    CHECK_FALSE(semantically_traversable(CellLabel::kFlowerbed));
    CHECK_FALSE(semantically_traversable(CellLabel::kRoad));
    CHECK(geometrically_traversable(CellLabel::kFlowerbed));
    CHECK(geometrically_traversable(CellLabel::kGrass));
    CHECK_FALSE(geometrically_traversable(CellLabel::kCurb));
    CHECK_FALSE(geometrically_traversable(CellLabel::kBuilding));
    for (int k = 0; k < kLabelCount; ++k) {
      const auto label = static_cast<CellLabel>(k);
      if (semantically_traversable(label)) CHECK(geometrically_traversable(label));
    }
  }

  TEST_CASE("bundled flowerbed has a flowerbed and a paved corridor") {
    const auto s = load_scenario(resolve_scenario("flowerbed"));
    const auto& cells = s.grid.cells();
    CHECK(std::count(cells.begin(), cells.end(), CellLabel::kFlowerbed) > 0);
    CHECK(std::count(cells.begin(), cells.end(), CellLabel::kPavement) > 0);
    const auto view = TraversabilityView::from_grid(s.grid);
    CHECK(oracle::semantic_path_exists(view, s.start.position(), s.goal));
    // The straight line from start to goal crosses the flowerbed.
    bool crosses = false;
    for (double f = 0; f <= 1.0; f += 0.01)
      crosses = crosses || s.grid.label_at(s.start.position() + f * (s.goal - s.start.position())) ==
                               CellLabel::kFlowerbed;
    CHECK(crosses);
  }

  TEST_CASE("every bundled scenario has a semantic corridor from start to goal") {
    const auto all = bundled();
    REQUIRE(all.size() == 4);
    for (const auto& s : all) {
      CAPTURE(s.name);
      CHECK_NOTHROW(s.validate());
      CHECK(oracle::semantic_path_exists(TraversabilityView::from_grid(s.grid), s.start.position(), s.goal));
    }
  }

  TEST_CASE("scenario validation names the field") {
    const std::filesystem::path dir = std::filesystem::path(TGS_FIXTURE_DIR) / "broken";
    const std::pair<const char*, const char*> cases[] = {
        {"bad_resolution.json", "resolution"},       {"start_on_building.json", "start"},
        {"goal_out_of_bounds.json", "goal"},         {"reference_off_semantic.json", "reference_path"},
        {"ragged_rows.json", "rows"},                {"camera_cx.json", "camera.cx"},
    };
    for (const auto& [file, field] : cases) {
      CAPTURE(file);
      try {
        load_scenario(dir / file);
        FAIL("expected ValidationError");
      } catch (const ValidationError& e) {
        CHECK(e.field() == field);
        CHECK(std::string(e.what()).find(field) != std::string::npos);
      }
    }
    CHECK_THROWS_AS(load_scenario(dir / "does_not_exist.json"), Error);
  }

  TEST_CASE("corner round trips through save and load") {
    const auto s = load_scenario(resolve_scenario("corner"));
    const auto tmp = std::filesystem::temp_directory_path() / "tgs_corner_roundtrip.json";
    save_scenario(s, tmp);
    CHECK(load_scenario(tmp) == s);
    CHECK(scenario_from_json(scenario_to_json(s)) == s);
    std::filesystem::remove(tmp);
  }

  TEST_CASE("lidar examples") {
    SUBCASE("empty grid reads range_max everywhere") {
      const auto g = uniform(100, 100, 0.1, CellLabel::kPavement);
      const auto scan = simulate_lidar(g, Pose2D(5, 5, 0.3), 360, 20.0);
      REQUIRE(scan.ranges.size() == 360);
      for (double r : scan.ranges) CHECK(r == 20.0);
    }
    SUBCASE("wall 3 m ahead") {
      auto g = uniform(100, 60, 0.1, CellLabel::kPavement);
      g.fill_box(Vec2(5.0, 0), Vec2(5.5, 6), CellLabel::kBuilding);
      const Pose2D pose(2.0, 3.0, 0.0);
      const auto scan = simulate_lidar(g, pose, 360, 20.0);
      // Beam b points at heading - pi + b * increment; heading 0 is beam 180.
      const double r = scan.ranges[180];
      CHECK(r >= 3.0 - g.resolution());
      CHECK(r <= 3.0 + g.resolution());
    }
    SUBCASE("beams over an open flowerbed read range_max") {
      auto g = uniform(200, 200, 0.1, CellLabel::kPavement);
      g.fill_box(Vec2(6, 0), Vec2(20, 20), CellLabel::kFlowerbed);
      const auto scan = simulate_lidar(g, Pose2D(5, 10, 0), 360, 5.0);
      for (int b = 150; b <= 210; ++b) CHECK(scan.ranges[b] == 5.0);
    }
    SUBCASE("pose outside the grid") {
      const auto g = uniform(10, 10, 0.1, CellLabel::kPavement);
      CHECK_THROWS_AS(simulate_lidar(g, Pose2D(5, 5, 0), 8, 5), PoseOutOfBounds);
    }
  }

  TEST_CASE("lidar agrees with exhaustive per-cell intersection on random 50x50 grids") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
      auto g = uniform(50, 50, 0.2, CellLabel::kPavement);
      for (int j = 0; j < 50; ++j)
        for (int i = 0; i < 50; ++i) {
          const double p = unit(rng);
          if (p < 0.05) g.set({i, j}, CellLabel::kBuilding);
          else if (p < 0.08) g.set({i, j}, CellLabel::kCurb);
          else if (p < 0.15) g.set({i, j}, CellLabel::kFlowerbed);
        }
      Pose2D pose;
      do {
        pose = Pose2D(unit(rng) * 10, unit(rng) * 10, unit(rng) * 6.28);
      } while (!geometrically_traversable(*g.label_at(pose.position())));
      const double range_max = 8.0;
      const auto a = simulate_lidar(g, pose, 90, range_max);
      CHECK(a == simulate_lidar(g, pose, 90, range_max));
      for (int b = 0; b < 90; ++b) {
        const double angle = pose.heading + a.angle_min + b * a.angle_increment;
        const double expected = oracle::ray_first_hit(g, pose.position(), angle, range_max);
        CAPTURE(trial);
        CAPTURE(b);
        // Soundness: never closer than the true first obstacle.
        CHECK(a.ranges[b] >= expected - 1e-9);
        CHECK(a.ranges[b] == Approx(expected).epsilon(1e-9));
        CHECK(a.ranges[b] > 0.0);
        CHECK(a.ranges[b] <= range_max);
      }
    }
  }

  TEST_CASE("render examples") {
    const auto cam = CameraModel::from_mount(320, 320, 320, 240, 640, 480, {0, 0, 1.0, 0.2});
    SUBCASE("uniform pavement fills everything below the horizon") {
      const auto g = uniform(2000, 2000, 0.1, CellLabel::kPavement);
      const auto img = render_camera_image(g, Pose2D(100, 100, 0.4), cam);
      // Horizon row: camera ray with zero vertical component.
      const double horizon = cam.cy - cam.fy * std::tan(0.2);
      // Rows from 5 px below the horizon hit the ground within 100 m, inside the grid.
      for (int v = static_cast<int>(std::ceil(horizon)) + 5; v < cam.height; ++v)
        for (int u = 0; u < cam.width; u += 7) REQUIRE(img.at(u, v) == label_color(CellLabel::kPavement));
      for (int v = 0; v < static_cast<int>(horizon) - 1; ++v) CHECK(img.at(320, v) == kSkyColor);
    }
    SUBCASE("crosswalk band 4 m ahead appears at the projected row") {
      auto g = uniform(400, 400, 0.05, CellLabel::kRoad);
      g.fill_box(Vec2(14.0, 0), Vec2(14.5, 20), CellLabel::kCrosswalk);
      const Pose2D pose(10.0, 10.0, 0.0);
      const auto img = render_camera_image(g, pose, cam);
      const std::vector<Vec2> pts = {Vec2(4.0, 0.0), Vec2(4.5, 0.0)};
      const auto proj = project_to_image(to_camera_frame(pts, cam), cam);
      const double near_row = proj.points[0].y(), far_row = proj.points[1].y();
      // Scan the centre column for the crosswalk band.
      int first = -1, last = -1;
      for (int v = 0; v < cam.height; ++v)
        if (img.at(320, v) == label_color(CellLabel::kCrosswalk)) {
          if (first < 0) first = v;
          last = v;
        }
      REQUIRE(first >= 0);
      for (int v = first; v <= last; ++v) CHECK(img.at(320, v) == label_color(CellLabel::kCrosswalk));
      CHECK(std::abs(last + 1 - near_row) <= 1.0);
      CHECK(std::abs(first - far_row) <= 1.0);
    }
    SUBCASE("repeated rendering is bit-identical") {
      const auto s = load_scenario(resolve_scenario("crosswalk"));
      const auto a = render_camera_image(s.grid, s.start, s.camera);
      CHECK(a == render_camera_image(s.grid, s.start, s.camera));
      CHECK(encode_png(a) == encode_png(render_camera_image(s.grid, s.start, s.camera)));
    }
  }

  TEST_CASE("rendered pixels match the inverse-projected cell colour") {
    std::mt19937_64 rng(131);
    for (const auto& s : bundled()) {
      CAPTURE(s.name);
      const auto img = render_camera_image(s.grid, s.start, s.camera);
      std::uniform_int_distribution<int> uu(0, s.camera.width - 1), vv(0, s.camera.height - 1);
      for (int k = 0; k < 100; ++k) {
        const int u = uu(rng), v = vv(rng);
        CAPTURE(u);
        CAPTURE(v);
        CHECK(img.at(u, v) == render_oracle(s.grid, s.start, s.camera, u, v));
      }
    }
  }

  TEST_CASE("step_robot examples") {
    RobotState s;
    auto a = step_robot(s, {1.0, 0.0}, 1.0, {1.0, 1.8, 5});
    CHECK(a.pose.x == Approx(1.0));
    CHECK(a.pose.y == Approx(0.0));
    CHECK(a.pose.heading == Approx(0.0));
    auto b = step_robot(s, {0.0, std::numbers::pi / 2}, 1.0, {1.0, 2.0, 5});
    CHECK(b.pose.x == 0.0);
    CHECK(b.pose.heading == Approx(std::numbers::pi / 2));
    RobotState c;
    for (int k = 0; k < 10; ++k) c = step_robot(c, {1.0, 1.0}, 0.1);
    const Pose2D arc = oracle::unicycle_arc(Pose2D(), 1.0, 1.0, 1.0);
    CHECK(std::hypot(c.pose.x - arc.x, c.pose.y - arc.y) < 1e-2);
    CHECK(c.pose.heading == Approx(arc.heading));
    CHECK_THROWS_AS(step_robot(s, {1.5, 0.0}, 0.1), ActionLimitExceeded);
    CHECK_THROWS_AS(step_robot(s, {0.0, 2.5}, 0.1), ActionLimitExceeded);
  }

  TEST_CASE("step_robot keeps heading normalised and history bounded") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> v(-1, 1), w(-1.8, 1.8);
    RobotState s;
    for (int k = 0; k < 2000; ++k) {
      s = step_robot(s, {v(rng), w(rng)}, 0.1);
      CHECK(s.pose.heading > -std::numbers::pi);
      CHECK(s.pose.heading <= std::numbers::pi);
      CHECK(s.velocity_history.size() <= 5);
    }
    CHECK(s.velocity_history.size() == 5);
  }

  TEST_CASE("trace_traversable examples") {
    auto g = uniform(100, 40, 0.1, CellLabel::kSidewalk);
    const auto view0 = TraversabilityView::from_grid(g);
    const Trajectory t{{Vec2(1, 0), Vec2(2, 0), Vec2(3, 0), Vec2(4, 0)}};
    const Pose2D pose(1.0, 2.0, 0.0);
    for (bool f : trace_traversable(view0, TraversabilityLayer::kSemantic, t, pose)) CHECK(f);

    g.fill_box(Vec2(3.9, 1.9), Vec2(4.1, 2.1), CellLabel::kFlowerbed);
    const auto view = TraversabilityView::from_grid(g);
    for (bool f : trace_traversable(view, TraversabilityLayer::kGeometric, t, pose)) CHECK(f);
    const auto sem = trace_traversable(view, TraversabilityLayer::kSemantic, t, pose);
    CHECK(sem == std::vector<bool>{true, true, false, true});

    const Trajectory off{{Vec2(1, 0), Vec2(20, 0)}};
    CHECK(trace_traversable(view, TraversabilityLayer::kGeometric, off, pose) == std::vector<bool>{true, false});
  }
}
