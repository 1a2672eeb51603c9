// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgs/backends.hpp"
#include "tgs/pipeline.hpp"
#include "tgs/world.hpp"

namespace tgs::eval {

/// Points each curve is resampled to before the Frechet comparison.
inline constexpr int kFrechetSamples = 32;

struct FrameScore {
  double traversability_fraction = 0.0;
  int traversability_strict = 0;
  double frechet_to_reference = 0.0;
};

/// Frechet distance between a world-frame path and the stretch of
/// `reference` that starts at the point closest to path.front() and covers
/// the same arc length.
double frechet_to_reference(const Polyline& world_path, const Polyline& reference);

/// `traj` is in the robot frame at `pose`. The Frechet term compares the
/// path from the robot position through the waypoints.
FrameScore score_frame(const Trajectory& traj, const Pose2D& pose, const ScenarioSpec& scenario);
/// Same, reusing a view already derived from scenario.grid.
FrameScore score_frame(const Trajectory& traj, const Pose2D& pose, const ScenarioSpec& scenario,
                       const TraversabilityView& view);

struct MethodVariant {
  std::string id;
  pipeline::CandidateSource source = pipeline::CandidateSource::kGenerator;
  /// "oracle", "oracle-endpoint", "heuristic" or "remote".
  std::string selector;
  selection::MarkingStyle marking = selection::MarkingStyle::kLinesAndNumbers;
};

/// Fixed id -> components table. Throws UnknownVariant.
MethodVariant variant_components(const std::string& id);
const std::vector<std::string>& known_variants();
/// The four variants that run without a remote service.
std::vector<std::string> offline_variants();

struct BenchmarkOptions {
  int max_steps = 1000;
  double d_t = 1.0;
  int K = 8;
  trajgen::Backend generator = trajgen::Backend::kGeometricSampler;
  std::shared_ptr<const trajgen::GeneratorWeights> weights;
  /// Needed by tgs-remote; without it that variant's cells are skipped.
  std::optional<selection::RemoteConfig> remote;
  /// Random start perturbation, metres and radians.
  double start_jitter = 0.3;
  double heading_jitter = 0.15;
  bool parallel = true;
};

struct CellResult {
  std::string scenario;
  std::string variant;
  bool skipped = false;
  std::string skip_reason;
  int episodes = 0;
  std::size_t frames = 0;
  double mean_fraction = 0.0;
  double mean_strict = 0.0;
  double mean_frechet = 0.0;
  std::map<std::string, int> outcomes;
};

struct BenchmarkReport {
  std::vector<std::string> scenarios;
  std::vector<std::string> variants;
  std::vector<CellResult> cells;  // scenario-major

  const CellResult* find(const std::string& scenario, const std::string& variant) const;
};

/// Deterministic per-episode start, shared by every variant.
Pose2D episode_start(const ScenarioSpec& scenario, std::uint64_t seed, int episode,
                     const BenchmarkOptions& options);

/// Episode configuration for one (scenario, variant, episode) cell entry.
pipeline::EpisodeConfig episode_config(const ScenarioSpec& scenario, const MethodVariant& variant,
                                       std::uint64_t seed, int episode, const BenchmarkOptions& options);

/// Aggregates the chosen trajectory of every frame of `logs`.
CellResult score_logs(const ScenarioSpec& scenario, const std::vector<pipeline::EpisodeLog>& logs);

/// Throws NoScenarios and UnknownVariant. Cells whose backend cannot be
/// constructed are reported as skipped.
BenchmarkReport run_benchmark(const std::vector<ScenarioSpec>& scenarios, const std::vector<std::string>& variants,
                              int episodes_per_cell, std::uint64_t seed, const BenchmarkOptions& options = {});

enum class ReportFormat { kTable, kDelimited };
ReportFormat report_format_from_name(const std::string& name);

std::string format_report(const BenchmarkReport& report, ReportFormat format);
/// Throws IoError.
void emit_report(const BenchmarkReport& report, const std::filesystem::path& path, ReportFormat format);

/// splitmix64 finaliser folded over the parts; stable across platforms.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);
std::uint64_t hash_name(const std::string& s);

}  // namespace tgs::eval
