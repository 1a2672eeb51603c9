// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgs/backends.hpp"
#include "tgs/geometry.hpp"
#include "tgs/selection.hpp"
#include "tgs/trajgen.hpp"
#include "tgs/world.hpp"

namespace tgs::pipeline {

struct TrackerConfig {
  double lookahead = 1.0;
  /// Forward speed is v_max / (1 + curvature_gain * |kappa|).
  double curvature_gain = 0.5;
  RobotLimits limits;
};

/// Pure pursuit along a world-frame polyline. Turns in place when the
/// lookahead point lies behind the robot; a zero-length path yields (0, 0).
Action track(const Polyline& path_world, const Pose2D& pose, const TrackerConfig& cfg);
/// `traj` is in the robot frame at `pose`; the robot position is prepended.
Action track(const Trajectory& traj, const Pose2D& pose, const TrackerConfig& cfg);

/// Where a replan round's candidates come from.
enum class CandidateSource {
  kGenerator,    // generate_candidates with the configured backend
  kRandomLines,  // straight lines to random points ahead
  kFreeSpace,    // straight lines to LiDAR free-space points
};

struct RandomLinesConfig {
  int count = 10;
  double min_distance = 5.0;
  double max_distance = 15.0;
  double half_fov = 0.785398163397448;  // 45 degrees
};

struct FreeSpaceConfig {
  int count = 8;
  double max_distance = 8.0;
  double half_fov = 0.785398163397448;
};

struct EpisodeConfig {
  int replan_period = 10;
  double dt = 0.1;
  int max_steps = 3000;
  double goal_radius = 1.0;
  double d_t = 1.0;
  std::size_t pool_capacity = 2;
  TrackerConfig tracker;
  LidarConfig lidar;

  CandidateSource source = CandidateSource::kGenerator;
  trajgen::GeneratorConfig generator;
  std::shared_ptr<const trajgen::GeneratorWeights> weights;
  RandomLinesConfig random_lines;
  FreeSpaceConfig free_space;

  /// Null selects the oracle.
  std::shared_ptr<selection::SelectionBackend> backend;
  selection::MarkingStyle marking = selection::MarkingStyle::kLinesAndNumbers;
  std::string prompt_template = selection::kDefaultPrompt;

  /// Seeds every stochastic part of the episode (start jitter excluded).
  std::uint64_t seed = 0;
  /// Standard deviation of Gaussian noise on the goal the robot is told; 0
  /// gives the exact goal.
  double goal_noise = 0.0;
  /// When set, annotated frames are written here as frame_NNNN.png.
  std::optional<std::filesystem::path> frame_dir;

  /// Throws ValidationError naming the field.
  void validate() const;
};

enum class Outcome { kReached, kTimeout, kCollision, kBoxedIn };
const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& name);

struct FrameRecord {
  int step = 0;
  Pose2D pose;
  std::size_t pool_size = 0;
  /// Candidates in the robot frame at `pose`, ordered by marker number.
  std::vector<Trajectory> candidates;
  std::vector<int> numbers;
  std::vector<bool> visible;
  int chosen = 0;
  std::string raw_response;
  std::string backend;
  std::string image;  // empty when no frame was written

  const Trajectory& chosen_trajectory() const;
};

struct EpisodeLog {
  std::string scenario;
  std::vector<FrameRecord> frames;
  Polyline executed_path;
  Outcome outcome = Outcome::kTimeout;
  int steps = 0;
  double wall_time = 0.0;
};

/// Runs the closed loop from `start` (defaults to the scenario start).
EpisodeLog run_episode(const ScenarioSpec& scenario, const EpisodeConfig& cfg,
                       std::optional<Pose2D> start = std::nullopt);

/// One JSON document per line: a "frame" record per replan round followed by
/// one "summary" record.
std::string log_to_jsonl(const EpisodeLog& log, bool include_wall_time = true);
EpisodeLog log_from_jsonl(const std::string& text);
void save_log(const EpisodeLog& log, const std::filesystem::path& path);
EpisodeLog load_log(const std::filesystem::path& path);

/// Fraction of executed_path points on semantically traversable cells.
double semantic_occupancy(const EpisodeLog& log, const TraversabilityView& view);
/// Number of executed_path points on geometric obstacles or off the grid.
std::size_t collision_count(const EpisodeLog& log, const TraversabilityView& view);

}  // namespace tgs::pipeline
