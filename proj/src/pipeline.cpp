// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "tgs/errors.hpp"

namespace tgs::pipeline {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Tracking

Action track(const Polyline& path_world, const Pose2D& pose, const TrackerConfig& cfg) {
  if (path_world.size() < 2 || polyline_length(path_world) == 0.0) return {};
  const double s = closest_arc_length(path_world, pose.position());
  const Vec2 target = point_at_arc_length(path_world, s + cfg.lookahead);
  const Vec2 local = pose.to_local(target);
  if (local.norm() < 1e-9) return {};

  const auto& lim = cfg.limits;
  const double alpha = std::atan2(local.y(), local.x());
  if (std::abs(alpha) > M_PI / 2.0) return {0.0, std::copysign(lim.omega_max, alpha)};

  const double kappa = 2.0 * std::sin(alpha) / cfg.lookahead;
  const double v = lim.v_max / (1.0 + cfg.curvature_gain * std::abs(kappa));
  const double omega = std::clamp(v * kappa, -lim.omega_max, lim.omega_max);
  return {std::clamp(v, -lim.v_max, lim.v_max), omega};
}

Action track(const Trajectory& traj, const Pose2D& pose, const TrackerConfig& cfg) {
  Polyline path = {pose.position()};
  const Polyline world = to_world(pose, traj.waypoints);
  path.insert(path.end(), world.begin(), world.end());
  return track(path, pose, cfg);
}

// ---------------------------------------------------------------------------
// Config and log types

void EpisodeConfig::validate() const {
  if (replan_period < 1) throw ValidationError("replan_period", "must be >= 1");
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (max_steps < 1) throw ValidationError("max_steps", "must be positive");
  if (!(goal_radius > 0.0)) throw ValidationError("goal_radius", "must be positive");
  if (!(d_t > 0.0)) throw ValidationError("d_t", "must be positive");
  if (pool_capacity < 1) throw ValidationError("pool_capacity", "must be >= 1");
  if (!(tracker.lookahead > 0.0)) throw ValidationError("lookahead", "must be positive");
  if (!(goal_noise >= 0.0)) throw ValidationError("goal_noise", "must be non-negative");
  if (lidar.beams < 1 || !(lidar.range_max > 0.0)) throw ValidationError("lidar", "needs beams and a positive range");
  generator.validate();
  if (source == CandidateSource::kGenerator && generator.backend == trajgen::Backend::kLatentDecoder && !weights)
    throw MissingWeights("latent-decoder backend requires generator weights");
  if (prompt_template.empty()) throw EmptyTemplate("prompt template is empty");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kReached: return "reached";
    case Outcome::kTimeout: return "timeout";
    case Outcome::kCollision: return "collision";
    case Outcome::kBoxedIn: return "boxed_in";
  }
  return "timeout";
}

Outcome outcome_from_name(const std::string& name) {
  for (Outcome o : {Outcome::kReached, Outcome::kTimeout, Outcome::kCollision, Outcome::kBoxedIn})
    if (name == outcome_name(o)) return o;
  throw ParseError("unknown outcome '" + name + "'");
}

const Trajectory& FrameRecord::chosen_trajectory() const {
  for (std::size_t k = 0; k < numbers.size(); ++k)
    if (numbers[k] == chosen) return candidates.at(k);
  throw ValidationError("chosen", "not among the frame's marker numbers");
}

// ---------------------------------------------------------------------------
// Episode loop

namespace {

std::vector<Trajectory> candidates_for_round(const EpisodeConfig& cfg, const RobotState& state,
                                             const LidarScan& scan, const TraversabilityView& view,
                                             const Vec2& goal_local, int round, std::mt19937_64& rng) {
  switch (cfg.source) {
    case CandidateSource::kRandomLines: {
      const auto& r = cfg.random_lines;
      return trajgen::sample_random_lines(rng, r.count, r.min_distance, r.max_distance, r.half_fov,
                                          cfg.generator.M);
    }
    case CandidateSource::kFreeSpace: {
      const auto& f = cfg.free_space;
      return trajgen::sample_free_space_points(scan, rng, f.count, f.max_distance, f.half_fov,
                                               cfg.generator.M);
    }
    case CandidateSource::kGenerator:
      break;
  }
  trajgen::GeneratorConfig gen = cfg.generator;
  gen.seed = cfg.generator.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(round + 1);
  trajgen::Observation obs{&scan, &state, &view, goal_local};
  return trajgen::generate_candidates(obs, gen, cfg.weights.get(), cfg.tracker.limits);
}

std::string frame_name(int round) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d.png", round);
  return buf;
}

}  // namespace

EpisodeLog run_episode(const ScenarioSpec& scenario, const EpisodeConfig& cfg, std::optional<Pose2D> start) {
  scenario.validate();
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const TraversabilityView view = TraversabilityView::from_grid(scenario.grid);
  std::shared_ptr<selection::SelectionBackend> backend = cfg.backend;
  if (!backend) backend = std::make_shared<selection::OracleBackend>();
  const bool want_image = backend->needs_image() || cfg.frame_dir.has_value();
  if (cfg.frame_dir) std::filesystem::create_directories(*cfg.frame_dir);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> goal_noise(0.0, 1.0);

  EpisodeLog log;
  log.scenario = scenario.name;
  RobotState state;
  state.pose = start.value_or(scenario.start);
  log.executed_path.push_back(state.pose.position());

  selection::CandidatePool pool(cfg.pool_capacity);
  Polyline active;  // world frame, generation position first
  int round = 0;
  bool done = false;

  for (int step = 0; !done; ++step) {
    if ((state.pose.position() - scenario.goal).norm() <= cfg.goal_radius) {
      log.outcome = Outcome::kReached;
      break;
    }
    if (step >= cfg.max_steps) {
      log.outcome = Outcome::kTimeout;
      break;
    }

    if (step % cfg.replan_period == 0) {
      const Pose2D pose = state.pose;
      const LidarScan scan = simulate_lidar(scenario.grid, pose, cfg.lidar.beams, cfg.lidar.range_max);
      Vec2 goal = scenario.goal;
      if (cfg.goal_noise > 0.0) goal += Vec2(goal_noise(rng), goal_noise(rng)) * cfg.goal_noise;
      const Vec2 goal_local = pose.to_local(goal);

      std::vector<Trajectory> batch;
      try {
        batch = candidates_for_round(cfg, state, scan, view, goal_local, round, rng);
      } catch (const NoFreeSpace&) {
        log.outcome = Outcome::kBoxedIn;
        break;
      }
      pool = selection::update_pool(std::move(pool), std::move(batch), pose);
      const auto reps = selection::dedup_representatives(pool, cfg.d_t);
      selection::MarkerSet markers = selection::sort_and_number(reps, goal_local);
      selection::project_markers(markers, scenario.camera);
      selection::PromptBundle bundle = selection::build_prompt(markers, cfg.prompt_template);

      FrameRecord frame;
      if (want_image) {
        const RgbImage raw = render_camera_image(scenario.grid, pose, scenario.camera);
        try {
          bundle.image = selection::annotate_image(raw, markers, cfg.marking);
        } catch (const NothingVisible&) {
          bundle.image = raw;
        }
        if (cfg.frame_dir) {
          frame.image = frame_name(round);
          write_png(bundle.image, *cfg.frame_dir / frame.image);
        }
      }

      const selection::SelectionContext ctx{&markers, &view, pose};
      const auto result = selection::select_with_fallback(*backend, bundle, ctx);

      frame.step = step;
      frame.pose = pose;
      frame.pool_size = pool.size();
      for (const auto& m : markers.items) {
        frame.candidates.push_back(m.trajectory);
        frame.numbers.push_back(m.number);
        frame.visible.push_back(!m.polyline.empty());
      }
      frame.chosen = result.chosen;
      frame.raw_response = result.raw_response;
      frame.backend = result.backend;

      active = {pose.position()};
      const Polyline world = to_world(pose, markers.find(result.chosen)->trajectory.waypoints);
      active.insert(active.end(), world.begin(), world.end());
      log.frames.push_back(std::move(frame));
      ++round;
    }

    const Action action = track(active, state.pose, cfg.tracker);
    state = step_robot(state, action, cfg.dt, cfg.tracker.limits);
    log.executed_path.push_back(state.pose.position());
    log.steps = step + 1;
    if (!view.traversable(TraversabilityLayer::kGeometric, state.pose.position())) {
      log.outcome = Outcome::kCollision;
      done = true;
    }
  }

  log.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return log;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json points_json(const Polyline& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({p.x(), p.y()});
  return out;
}

Polyline points_from(const json& j) {
  Polyline out;
  for (const auto& p : j) out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return out;
}

}  // namespace

std::string log_to_jsonl(const EpisodeLog& log, bool include_wall_time) {
  std::string out;
  for (const auto& f : log.frames) {
    json cands = json::array();
    for (const auto& t : f.candidates) cands.push_back(points_json(t.waypoints));
    json rec = {
        {"type", "frame"},
        {"step", f.step},
        {"pose", {f.pose.x, f.pose.y, f.pose.heading}},
        {"pool_size", f.pool_size},
        {"numbers", f.numbers},
        {"visible", f.visible},
        {"candidates", cands},
        {"chosen", f.chosen},
        {"raw_response", f.raw_response},
        {"backend", f.backend},
        {"image", f.image},
    };
    out += rec.dump() + '\n';
  }
  json summary = {
      {"type", "summary"},
      {"scenario", log.scenario},
      {"outcome", outcome_name(log.outcome)},
      {"steps", log.steps},
      {"frames", log.frames.size()},
      {"executed_path", points_json(log.executed_path)},
  };
  if (include_wall_time) summary["wall_time"] = log.wall_time;
  out += summary.dump() + '\n';
  return out;
}

EpisodeLog log_from_jsonl(const std::string& text) {
  EpisodeLog log;
  bool have_summary = false;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      const std::string type = rec.at("type");
      if (type == "frame") {
        FrameRecord f;
        f.step = rec.at("step");
        const auto& p = rec.at("pose");
        f.pose = Pose2D(p.at(0), p.at(1), p.at(2));
        f.pool_size = rec.at("pool_size");
        f.numbers = rec.at("numbers").get<std::vector<int>>();
        f.visible = rec.at("visible").get<std::vector<bool>>();
        for (const auto& c : rec.at("candidates")) f.candidates.push_back({points_from(c), 1.0});
        f.chosen = rec.at("chosen");
        f.raw_response = rec.at("raw_response");
        f.backend = rec.at("backend");
        f.image = rec.at("image");
        log.frames.push_back(std::move(f));
      } else if (type == "summary") {
        log.scenario = rec.at("scenario");
        log.outcome = outcome_from_name(rec.at("outcome"));
        log.steps = rec.at("steps");
        log.executed_path = points_from(rec.at("executed_path"));
        log.wall_time = rec.value("wall_time", 0.0);
        have_summary = true;
      } else {
        throw ParseError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError("episode log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_summary) throw ParseError("episode log has no summary record");
  return log;
}

void save_log(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << log_to_jsonl(log);
  if (!out) throw IoError("failed writing " + path.string());
}

EpisodeLog load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open episode log " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return log_from_jsonl(buf.str());
}

double semantic_occupancy(const EpisodeLog& log, const TraversabilityView& view) {
  if (log.executed_path.empty()) return 0.0;
  std::size_t on = 0;
  for (const auto& p : log.executed_path) on += view.traversable(TraversabilityLayer::kSemantic, p);
  return static_cast<double>(on) / static_cast<double>(log.executed_path.size());
}

std::size_t collision_count(const EpisodeLog& log, const TraversabilityView& view) {
  std::size_t n = 0;
  for (const auto& p : log.executed_path) n += !view.traversable(TraversabilityLayer::kGeometric, p);
  return n;
}

}  // namespace tgs::pipeline
