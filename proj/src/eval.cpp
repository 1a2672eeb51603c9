// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>

#include "tgs/errors.hpp"

namespace tgs::eval {

// ---------------------------------------------------------------------------
// Scoring

namespace {

Polyline resample_or_repeat(const Polyline& pts, int n) {
  if (pts.size() >= 2 && polyline_length(pts) > 0.0) return resample(pts, n);
  return Polyline(static_cast<std::size_t>(n), pts.front());
}

}  // namespace

double frechet_to_reference(const Polyline& world_path, const Polyline& reference) {
  if (world_path.empty() || reference.empty()) throw EmptyCurve("frechet_to_reference needs two curves");
  const double s0 = closest_arc_length(reference, world_path.front());
  const Polyline window = extract_window(reference, s0, s0 + polyline_length(world_path));
  return frechet_distance(resample_or_repeat(world_path, kFrechetSamples),
                          resample_or_repeat(window, kFrechetSamples));
}

FrameScore score_frame(const Trajectory& traj, const Pose2D& pose, const ScenarioSpec& scenario) {
  return score_frame(traj, pose, scenario, TraversabilityView::from_grid(scenario.grid));
}

FrameScore score_frame(const Trajectory& traj, const Pose2D& pose, const ScenarioSpec& scenario,
                       const TraversabilityView& view) {
  if (traj.waypoints.empty()) throw EmptyCurve("cannot score an empty trajectory");
  const auto flags = trace_traversable(view, TraversabilityLayer::kSemantic, traj, pose);
  const auto on = static_cast<double>(std::count(flags.begin(), flags.end(), true));

  FrameScore score;
  score.traversability_fraction = on / static_cast<double>(flags.size());
  score.traversability_strict = on == static_cast<double>(flags.size()) ? 1 : 0;

  Polyline path = {pose.position()};
  const Polyline world = to_world(pose, traj.waypoints);
  path.insert(path.end(), world.begin(), world.end());
  score.frechet_to_reference = frechet_to_reference(path, scenario.reference_path);
  return score;
}

// ---------------------------------------------------------------------------
// Variants

const std::vector<std::string>& known_variants() {
  static const std::vector<std::string> kIds = {"tgs-oracle", "tgs-remote", "mtg-heuristic", "pivot-random",
                                                "convoi-waypoints"};
  return kIds;
}

std::vector<std::string> offline_variants() { return {"tgs-oracle", "mtg-heuristic", "pivot-random", "convoi-waypoints"}; }

MethodVariant variant_components(const std::string& id) {
  using pipeline::CandidateSource;
  using selection::MarkingStyle;
  if (id == "tgs-oracle") return {id, CandidateSource::kGenerator, "oracle", MarkingStyle::kLinesAndNumbers};
  if (id == "tgs-remote") return {id, CandidateSource::kGenerator, "remote", MarkingStyle::kLinesAndNumbers};
  if (id == "mtg-heuristic") return {id, CandidateSource::kGenerator, "heuristic", MarkingStyle::kLinesAndNumbers};
  if (id == "pivot-random") return {id, CandidateSource::kRandomLines, "oracle", MarkingStyle::kLinesAndNumbers};
  if (id == "convoi-waypoints")
    return {id, CandidateSource::kFreeSpace, "oracle-endpoint", MarkingStyle::kNumbersOnly};
  throw UnknownVariant("unknown method variant '" + id + "'");
}

// ---------------------------------------------------------------------------
// Seeds

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::uint64_t p : parts) {
    std::uint64_t z = h ^ (p + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    h = z ^ (z >> 31);
  }
  return h;
}

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Pose2D episode_start(const ScenarioSpec& scenario, std::uint64_t seed, int episode, const BenchmarkOptions& options) {
  if (episode == 0) return scenario.start;
  std::mt19937_64 rng(mix_seed({seed, hash_name(scenario.name), static_cast<std::uint64_t>(episode), 1}));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const TraversabilityView view = TraversabilityView::from_grid(scenario.grid);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Vec2 d(unit(rng), unit(rng));
    const double dh = unit(rng) * options.heading_jitter;
    if (d.norm() > 1.0) continue;
    const Vec2 p = scenario.start.position() + d * options.start_jitter;
    if (view.traversable(TraversabilityLayer::kSemantic, p) && view.traversable(TraversabilityLayer::kGeometric, p))
      return {p.x(), p.y(), scenario.start.heading + dh};
  }
  return scenario.start;
}

pipeline::EpisodeConfig episode_config(const ScenarioSpec& scenario, const MethodVariant& variant,
                                       std::uint64_t seed, int episode, const BenchmarkOptions& options) {
  const auto ep = static_cast<std::uint64_t>(episode);
  const std::uint64_t scen = hash_name(scenario.name);
  pipeline::EpisodeConfig cfg;
  cfg.max_steps = options.max_steps;
  cfg.d_t = options.d_t;
  cfg.source = variant.source;
  cfg.marking = variant.marking;
  cfg.generator.backend = options.generator;
  cfg.generator.K = options.K;
  cfg.weights = options.weights;
  // Generator seed is shared across variants so matched frames see the
  // same candidates; everything else is per variant.
  cfg.generator.seed = mix_seed({seed, scen, ep, 2});
  cfg.seed = mix_seed({seed, scen, hash_name(variant.id), ep, 3});

  if (variant.selector == "oracle") {
    cfg.backend = std::make_shared<selection::OracleBackend>(false);
  } else if (variant.selector == "oracle-endpoint") {
    cfg.backend = std::make_shared<selection::OracleBackend>(true);
  } else if (variant.selector == "heuristic") {
    cfg.backend = std::make_shared<selection::HeuristicBackend>();
  } else if (variant.selector == "remote") {
    if (!options.remote) throw BackendUnavailable("no remote endpoint configured");
    cfg.backend = std::make_shared<selection::RemoteBackend>(*options.remote);
  } else {
    throw UnknownVariant("unknown selector '" + variant.selector + "'");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Benchmark

CellResult score_logs(const ScenarioSpec& scenario, const std::vector<pipeline::EpisodeLog>& logs) {
  CellResult cell;
  cell.scenario = scenario.name;
  cell.episodes = static_cast<int>(logs.size());
  const TraversabilityView view = TraversabilityView::from_grid(scenario.grid);
  double fraction = 0.0, strict = 0.0, frechet = 0.0;
  for (const auto& log : logs) {
    ++cell.outcomes[pipeline::outcome_name(log.outcome)];
    for (const auto& f : log.frames) {
      const FrameScore s = score_frame(f.chosen_trajectory(), f.pose, scenario, view);
      fraction += s.traversability_fraction;
      strict += s.traversability_strict;
      frechet += s.frechet_to_reference;
      ++cell.frames;
    }
  }
  if (cell.frames > 0) {
    const auto n = static_cast<double>(cell.frames);
    cell.mean_fraction = fraction / n;
    cell.mean_strict = strict / n;
    cell.mean_frechet = frechet / n;
  }
  return cell;
}

namespace {

CellResult run_cell(const ScenarioSpec& scenario, const std::string& variant_id, int episodes, std::uint64_t seed,
                    const BenchmarkOptions& options) {
  const MethodVariant variant = variant_components(variant_id);
  std::vector<pipeline::EpisodeLog> logs;
  try {
    for (int e = 0; e < episodes; ++e) {
      const auto cfg = episode_config(scenario, variant, seed, e, options);
      logs.push_back(pipeline::run_episode(scenario, cfg, episode_start(scenario, seed, e, options)));
    }
  } catch (const BackendUnavailable& err) {
    CellResult skipped;
    skipped.scenario = scenario.name;
    skipped.variant = variant_id;
    skipped.skipped = true;
    skipped.skip_reason = err.what();
    return skipped;
  }
  CellResult cell = score_logs(scenario, logs);
  cell.variant = variant_id;
  return cell;
}

}  // namespace

const CellResult* BenchmarkReport::find(const std::string& scenario, const std::string& variant) const {
  for (const auto& c : cells)
    if (c.scenario == scenario && c.variant == variant) return &c;
  return nullptr;
}

BenchmarkReport run_benchmark(const std::vector<ScenarioSpec>& scenarios, const std::vector<std::string>& variants,
                              int episodes_per_cell, std::uint64_t seed, const BenchmarkOptions& options) {
  if (scenarios.empty()) throw NoScenarios("benchmark needs at least one scenario");
  if (episodes_per_cell < 1) throw ValidationError("episodes", "must be >= 1");
  for (const auto& v : variants) variant_components(v);

  BenchmarkReport report;
  for (const auto& s : scenarios) report.scenarios.push_back(s.name);
  report.variants = variants;

  std::vector<std::future<CellResult>> jobs;
  for (const auto& s : scenarios) {
    for (const auto& v : variants) {
      const auto policy = options.parallel ? std::launch::async : std::launch::deferred;
      jobs.push_back(std::async(policy, run_cell, std::cref(s), v, episodes_per_cell, seed, std::cref(options)));
    }
  }
  for (auto& j : jobs) report.cells.push_back(j.get());
  return report;
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "delimited") return ReportFormat::kDelimited;
  throw ValidationError("format", "expected 'table' or 'delimited', got '" + name + "'");
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Metric {
  const char* key;    // delimited name
  const char* title;  // table row label
  std::string (*value)(const CellResult&);
};

const std::vector<Metric>& metrics() {
  static const std::vector<Metric> kMetrics = {
      {"traversability", "Traversability (%)", [](const CellResult& c) { return fixed(100.0 * c.mean_fraction, 2); }},
      {"traversability_strict", "Traversability strict (%)",
       [](const CellResult& c) { return fixed(100.0 * c.mean_strict, 2); }},
      {"frechet", "Frechet (m)", [](const CellResult& c) { return fixed(c.mean_frechet, 3); }},
      {"reached", "Reached (episodes)",
       [](const CellResult& c) {
         const auto it = c.outcomes.find("reached");
         return std::to_string(it == c.outcomes.end() ? 0 : it->second) + "/" + std::to_string(c.episodes);
       }},
  };
  return kMetrics;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string format_report(const BenchmarkReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kDelimited) {
    out = "metric,method,scenario,value,frames\n";
    for (const auto& m : metrics()) {
      for (const auto& v : report.variants) {
        for (const auto& s : report.scenarios) {
          const CellResult* c = report.find(s, v);
          const std::string value = (c == nullptr || c->skipped) ? "skipped" : m.value(*c);
          const std::string frames = c == nullptr ? "0" : std::to_string(c->frames);
          out += std::string(m.key) + ',' + v + ',' + s + ',' + value + ',' + frames + '\n';
        }
      }
    }
    return out;
  }

  std::size_t col = 10;
  for (const auto& s : report.scenarios) col = std::max(col, s.size() + 2);
  std::size_t method_w = 8;
  for (const auto& v : report.variants) method_w = std::max(method_w, v.size() + 2);
  constexpr std::size_t kMetricW = 27;

  std::string header = pad("Metric", kMetricW) + pad("Method", method_w);
  for (const auto& s : report.scenarios) header += lpad(s, col);
  out += header + '\n' + std::string(header.size(), '-') + '\n';
  for (const auto& m : metrics()) {
    bool first = true;
    for (const auto& v : report.variants) {
      std::string row = pad(first ? m.title : "", kMetricW) + pad(v, method_w);
      for (const auto& s : report.scenarios) {
        const CellResult* c = report.find(s, v);
        row += lpad((c == nullptr || c->skipped) ? "-" : m.value(*c), col);
      }
      out += row + '\n';
      first = false;
    }
  }
  out += '\n';
  for (const auto& v : report.variants) {
    std::string row = pad(v == report.variants.front() ? "Frames" : "", kMetricW) + pad(v, method_w);
    for (const auto& s : report.scenarios) {
      const CellResult* c = report.find(s, v);
      row += lpad(c == nullptr ? "0" : std::to_string(c->frames), col);
    }
    out += row + '\n';
  }
  for (const auto& c : report.cells)
    if (c.skipped) out += "skipped " + c.variant + " on " + c.scenario + ": " + c.skip_reason + '\n';
  return out;
}

void emit_report(const BenchmarkReport& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  out << format_report(report, format);
  if (!out) throw IoError("failed writing report " + path.string());
}

}  // namespace tgs::eval
