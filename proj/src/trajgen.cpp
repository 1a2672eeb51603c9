// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/trajgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tgs/errors.hpp"

namespace tgs::trajgen {

using nlohmann::json;

Eigen::VectorXd AffineLayer::apply(const Eigen::VectorXd& x) const {
  if (x.size() != A.cols()) throw DimensionMismatch("affine layer input size mismatch");
  return A * x + b;
}

void GeneratorConfig::validate() const {
  if (K < 2) throw ValidationError("K", "must be at least 2");
  if (M < 2) throw ValidationError("M", "must be at least 2");
  if (!(max_length > 0.0)) throw ValidationError("max_length", "must be positive");
}

// ---------------------------------------------------------------------------
// Weights

namespace {

void check_layer(const AffineLayer& layer, int in, int out, const char* name) {
  if (layer.A.cols() != in || layer.A.rows() != out || layer.b.size() != out)
    throw DimensionMismatch(std::string(name) + ": expected " + std::to_string(out) + "x" +
                            std::to_string(in) + " matrix and length-" + std::to_string(out) +
                            " bias");
  if (!layer.A.allFinite() || !layer.b.allFinite())
    throw DimensionMismatch(std::string(name) + ": non-finite parameters");
}

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = n(rng);
  return m;
}

AffineLayer random_layer(std::mt19937_64& rng, int in, int out) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  return {gaussian_matrix(rng, out, in, scale), gaussian_matrix(rng, out, 1, scale).col(0)};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected an array of rows");
  const auto rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ParseError(field + ": ragged matrix");
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError(field + ": non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected an array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(field + ": non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

json layer_to_json(const AffineLayer& l) { return {{"A", matrix_to_json(l.A)}, {"b", vector_to_json(l.b)}}; }

AffineLayer layer_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("A") || !j.contains("b"))
    throw ParseError(field + ": expected {A, b}");
  return {matrix_from_json(j.at("A"), field + ".A"), vector_from_json(j.at("b"), field + ".b")};
}

}  // namespace

void GeneratorWeights::validate() const {
  if (D <= 0 || L <= 0 || K < 1 || M < 2) throw DimensionMismatch("non-positive dimensions");
  check_layer(encoder, kFeatureSize, D, "encoder");
  check_layer(latent, D, L, "latent");
  if (static_cast<int>(heads.size()) != K)
    throw DimensionMismatch("expected " + std::to_string(K) + " projection heads");
  for (const auto& h : heads) {
    if (h.A.rows() != L || h.A.cols() != L || h.b.size() != L)
      throw DimensionMismatch("projection head has wrong shape");
    if (!h.A.allFinite() || !h.b.allFinite()) throw DimensionMismatch("non-finite head parameters");
  }
  for (std::size_t i = 0; i < heads.size(); ++i)
    for (std::size_t j = i + 1; j < heads.size(); ++j)
      if ((heads[i].A - heads[j].A).norm() + (heads[i].b - heads[j].b).norm() == 0.0)
        throw DimensionMismatch("projection heads " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " coincide");
  if (layer1.A.cols() != L + D) throw DimensionMismatch("layer1 must take L + D inputs");
  check_layer(layer1, L + D, layer1.outputs(), "decoder.layer1");
  check_layer(layer2, layer1.outputs(), 2 * M, "decoder.layer2");
}

GeneratorWeights GeneratorWeights::random(std::uint64_t seed, int D, int L, int K, int M, int hidden) {
  std::mt19937_64 rng(seed);
  GeneratorWeights w;
  w.D = D;
  w.L = L;
  w.K = K;
  w.M = M;
  w.encoder = random_layer(rng, kFeatureSize, D);
  w.latent = random_layer(rng, D, L);
  for (int k = 0; k < K; ++k) {
    auto layer = random_layer(rng, L, L);
    w.heads.push_back({std::move(layer.A), std::move(layer.b), k + 1});
  }
  w.layer1 = random_layer(rng, L + D, hidden);
  w.layer2 = random_layer(rng, hidden, 2 * M);
  return w;
}

json weights_to_json(const GeneratorWeights& w) {
  json heads = json::array();
  for (const auto& h : w.heads) heads.push_back({{"A", matrix_to_json(h.A)}, {"b", vector_to_json(h.b)}});
  return {{"D", w.D},
          {"L", w.L},
          {"K", w.K},
          {"M", w.M},
          {"encoder", layer_to_json(w.encoder)},
          {"latent", layer_to_json(w.latent)},
          {"heads", heads},
          {"decoder", {{"layer1", layer_to_json(w.layer1)}, {"layer2", layer_to_json(w.layer2)}}}};
}

GeneratorWeights weights_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("weights document must be an object");
  for (const char* key : {"D", "L", "K", "M", "encoder", "latent", "heads", "decoder"})
    if (!doc.contains(key)) throw ParseError(std::string("weights: missing ") + key);
  GeneratorWeights w;
  w.D = doc.at("D").get<int>();
  w.L = doc.at("L").get<int>();
  w.K = doc.at("K").get<int>();
  w.M = doc.at("M").get<int>();
  w.encoder = layer_from_json(doc.at("encoder"), "encoder");
  w.latent = layer_from_json(doc.at("latent"), "latent");
  int index = 1;
  for (const auto& h : doc.at("heads")) {
    auto layer = layer_from_json(h, "heads");
    w.heads.push_back({std::move(layer.A), std::move(layer.b), index++});
  }
  const auto& dec = doc.at("decoder");
  if (!dec.is_object() || !dec.contains("layer1") || !dec.contains("layer2"))
    throw ParseError("weights: decoder needs layer1 and layer2");
  w.layer1 = layer_from_json(dec.at("layer1"), "decoder.layer1");
  w.layer2 = layer_from_json(dec.at("layer2"), "decoder.layer2");
  w.validate();
  return w;
}

GeneratorWeights load_weights(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open weights file " + path.string());
  try {
    return weights_from_json(json::parse(f));
  } catch (const json::exception& e) {
    throw ParseError("malformed weights " + path.string() + ": " + e.what());
  }
}

void save_weights(const GeneratorWeights& w, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << weights_to_json(w).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Latent path

ConditionVector encode_condition(const LidarScan& scan, const RobotState& state,
                                 const RobotLimits& limits) {
  const auto n = static_cast<int>(scan.ranges.size());
  if (n < kRangeBins) throw TooFewBeams("need at least 64 beams, got " + std::to_string(n));
  ConditionVector c{Eigen::VectorXd::Zero(kFeatureSize)};
  for (int bin = 0; bin < kRangeBins; ++bin) {
    const int lo = bin * n / kRangeBins, hi = (bin + 1) * n / kRangeBins;
    double m = scan.range_max;
    for (int k = lo; k < hi; ++k) m = std::min(m, scan.ranges[k]);
    c.values[bin] = m / scan.range_max;
  }
  const auto& hist = state.velocity_history;
  if (!hist.empty()) {
    double lin = 0.0, ang = 0.0;
    for (const auto& a : hist) {
      lin += a.linear;
      ang += a.angular;
    }
    const double count = static_cast<double>(hist.size());
    c.values[kRangeBins + 0] = lin / count / limits.v_max;
    c.values[kRangeBins + 1] = hist.back().linear / limits.v_max;
    c.values[kRangeBins + 2] = ang / count / limits.omega_max;
    c.values[kRangeBins + 3] = hist.back().angular / limits.omega_max;
  }
  return c;
}

LatentVector project_latent(const LatentVector& z, const ProjectionHead& head) {
  if (head.A.cols() != z.values.size() || head.A.rows() != head.b.size())
    throw DimensionMismatch("projection head does not match latent size");
  return {head.A * z.values + head.b};
}

Trajectory decode_trajectory(const LatentVector& z_k, const ConditionVector& c,
                             const GeneratorWeights& weights, double max_length) {
  if (z_k.values.size() != weights.L || c.values.size() != weights.D)
    throw DimensionMismatch("decoder input does not match weights");
  Eigen::VectorXd input(weights.L + weights.D);
  input << z_k.values, c.values;
  const Eigen::VectorXd hidden = weights.layer1.apply(input).array().tanh().matrix();
  const Eigen::VectorXd offsets = weights.layer2.apply(hidden);
  if (offsets.size() != 2 * weights.M) throw DimensionMismatch("decoder output size mismatch");

  const double max_step = max_length / weights.M;
  Trajectory traj;
  traj.confidence = 1.0;
  Vec2 p = Vec2::Zero();
  for (int m = 0; m < weights.M; ++m) {
    Vec2 step(offsets[2 * m], offsets[2 * m + 1]);
    const double norm = step.norm();
    if (norm > max_step) step *= max_step / norm;
    p += step;
    traj.waypoints.push_back(p);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Dispatch

std::vector<Trajectory> generate_candidates(const Observation& obs, const GeneratorConfig& cfg,
                                            const GeneratorWeights* weights,
                                            const RobotLimits& limits) {
  cfg.validate();
  if (cfg.backend == Backend::kGeometricSampler) {
    if (!obs.view || !obs.state) throw ValidationError("view", "geometric sampler needs a view and state");
    return sample_geometric(*obs.view, obs.state->pose, cfg, obs.goal_hint);
  }

  if (!weights) throw MissingWeights("latent-decoder backend requires generator weights");
  if (!obs.scan || !obs.state) throw ValidationError("scan", "latent decoder needs a scan and state");
  weights->validate();
  if (weights->K != cfg.K || weights->M != cfg.M)
    throw DimensionMismatch("weights K/M differ from generator config");

  const ConditionVector raw = encode_condition(*obs.scan, *obs.state, limits);
  const ConditionVector c{weights->encoder.apply(raw.values)};
  LatentVector z{weights->latent.apply(c.values)};
  if (cfg.latent_noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.latent_noise);
    for (int i = 0; i < z.values.size(); ++i) z.values[i] += noise(rng);
  }
  std::vector<Trajectory> out;
  out.reserve(weights->heads.size());
  for (const auto& head : weights->heads)
    out.push_back(decode_trajectory(project_latent(z, head), c, *weights, cfg.max_length));
  return out;
}

// ---------------------------------------------------------------------------
// Ablation candidate sources

namespace {

Trajectory straight_line(const Vec2& end, int M) {
  const Polyline control = {Vec2::Zero(), end};
  Polyline dense = resample(control, M + 1);
  dense.erase(dense.begin());
  return {std::move(dense), 1.0};
}

}  // namespace

std::vector<Trajectory> sample_random_lines(std::mt19937_64& rng, int count, double min_distance,
                                            double max_distance, double half_fov, int M) {
  std::uniform_real_distribution<double> dist(min_distance, max_distance);
  std::uniform_real_distribution<double> bearing(-half_fov, half_fov);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double d = dist(rng);
    const double a = bearing(rng);
    out.push_back(straight_line({d * std::cos(a), d * std::sin(a)}, M));
  }
  return out;
}

std::vector<Trajectory> sample_free_space_points(const LidarScan& scan, std::mt19937_64& rng,
                                                 int count, double max_distance, double half_fov,
                                                 int M) {
  constexpr double kMargin = 0.5;
  constexpr double kMinDistance = 1.0;
  std::vector<Trajectory> out;
  out.reserve(count);
  const auto beams = static_cast<int>(scan.ranges.size());
  for (int k = 0; k < count; ++k) {
    const double a = count == 1 ? 0.0 : -half_fov + 2.0 * half_fov * k / (count - 1);
    const int beam =
        std::clamp(static_cast<int>(std::lround((a - scan.angle_min) / scan.angle_increment)), 0,
                   beams - 1);
    const double reach = std::min(max_distance, scan.ranges[beam] - kMargin);
    const double hi = std::max(reach, kMinDistance);
    std::uniform_real_distribution<double> dist(std::min(kMinDistance + 0.5, hi), hi);
    const double d = dist(rng);
    out.push_back(straight_line({d * std::cos(a), d * std::sin(a)}, M));
  }
  return out;
}

}  // namespace tgs::trajgen
