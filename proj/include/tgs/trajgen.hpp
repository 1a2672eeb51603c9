// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgs/geometry.hpp"
#include "tgs/world.hpp"

namespace tgs::trajgen {

/// 64 min-pooled normalised ranges followed by mean/last linear and
/// mean/last angular velocity, each normalised by the robot limits.
inline constexpr int kRangeBins = 64;
inline constexpr int kFeatureSize = kRangeBins + 4;

struct ConditionVector {
  Eigen::VectorXd values;
};

struct LatentVector {
  Eigen::VectorXd values;
};

struct AffineLayer {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  int inputs() const { return static_cast<int>(A.cols()); }
  int outputs() const { return static_cast<int>(A.rows()); }
};

/// One diversity head: z_k = A z + b.
struct ProjectionHead {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int head_index = 1;
};

/// Forward-pass parameters of the latent generator. The encoder refines the
/// raw observation features into the condition c; the decoder maps [z_k | c]
/// through tanh(layer1) and layer2 to M (dx, dy) step offsets.
struct GeneratorWeights {
  int D = kFeatureSize;
  int L = 16;
  int K = 8;
  int M = 16;
  AffineLayer encoder;  // kFeatureSize -> D
  AffineLayer latent;   // D -> L
  std::vector<ProjectionHead> heads;
  AffineLayer layer1;   // L + D -> H
  AffineLayer layer2;   // H -> 2M

  /// Throws DimensionMismatch when shapes disagree or heads coincide.
  void validate() const;

  /// Gaussian weights scaled by 1/sqrt(fan_in), reproducible from `seed`.
  static GeneratorWeights random(std::uint64_t seed, int D = kFeatureSize, int L = 16, int K = 8,
                                 int M = 16, int hidden = 64);
};

nlohmann::json weights_to_json(const GeneratorWeights& w);
GeneratorWeights weights_from_json(const nlohmann::json& doc);
GeneratorWeights load_weights(const std::filesystem::path& path);
void save_weights(const GeneratorWeights& w, const std::filesystem::path& path);

enum class Backend { kLatentDecoder, kGeometricSampler };

struct GeneratorConfig {
  Backend backend = Backend::kGeometricSampler;
  int K = 8;
  int M = 16;
  double max_length = 15.0;
  std::uint64_t seed = 0;
  /// Adds seeded N(0, latent_noise^2) noise to z; 0 uses the mean.
  double latent_noise = 0.0;

  // Geometric sampler tuning.
  double clearance = 0.3;          // preferred distance to geometric obstacles
  double min_target_distance = 3.0;
  int smoothing_passes = 3;

  void validate() const;
};

ConditionVector encode_condition(const LidarScan& scan, const RobotState& state,
                                 const RobotLimits& limits = {});

LatentVector project_latent(const LatentVector& z, const ProjectionHead& head);

/// Decodes one trajectory. Each step is clamped to max_length / M; a zero
/// network yields a degenerate (zero-length) trajectory, see
/// Trajectory::is_degenerate.
Trajectory decode_trajectory(const LatentVector& z_k, const ConditionVector& c,
                             const GeneratorWeights& weights, double max_length);

/// Inputs the generator sees at one planning instant.
struct Observation {
  const LidarScan* scan = nullptr;
  const RobotState* state = nullptr;
  const TraversabilityView* view = nullptr;
  /// Goal in the robot frame; when set, the sampler seeds its spread with
  /// the reachable cell nearest to it.
  std::optional<Vec2> goal_hint;
};

/// Exactly cfg.K trajectories in the robot frame.
std::vector<Trajectory> generate_candidates(const Observation& obs, const GeneratorConfig& cfg,
                                            const GeneratorWeights* weights = nullptr,
                                            const RobotLimits& limits = {});

/// Geometric-sampler backend on its own; every waypoint is geometrically
/// traversable. Throws NoFreeSpace.
std::vector<Trajectory> sample_geometric(const TraversabilityView& view, const Pose2D& pose,
                                         const GeneratorConfig& cfg,
                                         const std::optional<Vec2>& goal_hint = std::nullopt);

// ---------------------------------------------------------------------------
// Candidate sources used by the ablation variants.

/// Straight lines from the robot to `count` points drawn uniformly in
/// distance [min_distance, max_distance] and bearing [-half_fov, half_fov].
/// Waypoints are the two control points resampled to M.
std::vector<Trajectory> sample_random_lines(std::mt19937_64& rng, int count, double min_distance,
                                            double max_distance, double half_fov, int M);

/// Straight lines to sparse free-space points read off the LiDAR scan: one
/// point per evenly spaced bearing inside the field of view, at a random
/// distance short of the first return.
std::vector<Trajectory> sample_free_space_points(const LidarScan& scan, std::mt19937_64& rng,
                                                 int count, double max_distance, double half_fov,
                                                 int M);

}  // namespace tgs::trajgen
