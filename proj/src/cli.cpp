// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "tgs/backends.hpp"
#include "tgs/errors.hpp"
#include "tgs/eval.hpp"
#include "tgs/pipeline.hpp"
#include "tgs/scenario_io.hpp"
#include "tgs/selection.hpp"
#include "tgs/trajgen.hpp"

namespace tgs::cli {

namespace {

struct GeneratorFlags {
  std::string generator = "sampler";
  std::string weights;
  int k = 8;
  double d_t = 1.0;
  std::uint64_t seed = 0;
};

struct RemoteFlags {
  std::string endpoint;
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout = 20.0;
  int retries = 2;
};

void add_generator_flags(CLI::App* cmd, GeneratorFlags& g) {
  cmd->add_option("--generator", g.generator, "Candidate generator")->check(CLI::IsMember({"sampler", "latent"}));
  cmd->add_option("--weights", g.weights, "Generator weights file (latent generator)");
  cmd->add_option("--k", g.k, "Candidates per generation round")->check(CLI::Range(2, 64));
  cmd->add_option("--d-t", g.d_t, "Hausdorff dedup threshold, metres")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", g.seed, "Seed for every random component");
}

void add_remote_flags(CLI::App* cmd, RemoteFlags& r) {
  cmd->add_option("--endpoint", r.endpoint, "Chat-completion URL for the remote backend");
  cmd->add_option("--model", r.model, "Remote model name");
  cmd->add_option("--api-key-env", r.api_key_env, "Environment variable holding the API key");
  cmd->add_option("--timeout", r.timeout, "Remote request timeout, seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--retries", r.retries, "Remote retries")->check(CLI::NonNegativeNumber);
}

selection::RemoteConfig remote_config(const RemoteFlags& r) {
  selection::RemoteConfig cfg;
  cfg.endpoint = r.endpoint;
  cfg.model = r.model;
  cfg.api_key_env = r.api_key_env;
  cfg.timeout_seconds = r.timeout;
  cfg.retries = r.retries;
  return cfg;
}

trajgen::Backend generator_backend(const GeneratorFlags& g) {
  return g.generator == "latent" ? trajgen::Backend::kLatentDecoder : trajgen::Backend::kGeometricSampler;
}

std::shared_ptr<const trajgen::GeneratorWeights> load_weights_flag(const GeneratorFlags& g) {
  if (g.weights.empty()) {
    if (g.generator == "latent") throw MissingWeights("--generator latent needs --weights");
    return nullptr;
  }
  return std::make_shared<const trajgen::GeneratorWeights>(trajgen::load_weights(g.weights));
}

ScenarioSpec scenario_flag(const std::string& name) { return load_scenario(resolve_scenario(name)); }

Pose2D parse_pose(const std::string& text) {
  double x = 0, y = 0, h = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &x, &y, &h, &tail) != 3)
    throw ValidationError("pose", "expected x,y,heading");
  return {x, y, h};
}

// ---------------------------------------------------------------------------
// Subcommands

struct RunFlags {
  std::string scenario;
  std::string backend = "oracle";
  std::string fixture;
  std::string out = "tgs_run";
  int max_steps = 3000;
  GeneratorFlags gen;
  RemoteFlags remote;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
  const ScenarioSpec scenario = scenario_flag(f.scenario);
  pipeline::EpisodeConfig cfg;
  cfg.max_steps = f.max_steps;
  cfg.d_t = f.gen.d_t;
  cfg.seed = f.gen.seed;
  cfg.generator.seed = f.gen.seed;
  cfg.generator.K = f.gen.k;
  cfg.generator.backend = generator_backend(f.gen);
  cfg.weights = load_weights_flag(f.gen);
  if (cfg.weights) {
    cfg.generator.K = cfg.weights->K;
    cfg.generator.M = cfg.weights->M;
  }
  if (f.backend == "replay") {
    if (f.fixture.empty()) throw ValidationError("fixture", "--backend replay needs --fixture");
    cfg.backend = std::make_shared<selection::ReplayBackend>(selection::ReplayBackend::from_file(f.fixture));
  } else if (f.backend == "remote") {
    cfg.backend = std::make_shared<selection::RemoteBackend>(remote_config(f.remote));
  } else {
    cfg.backend = std::make_shared<selection::OracleBackend>();
  }
  const std::filesystem::path dir(f.out);
  std::filesystem::create_directories(dir);
  cfg.frame_dir = dir / "frames";

  const auto log = pipeline::run_episode(scenario, cfg);
  pipeline::save_log(log, dir / "episode.jsonl");
  const auto view = TraversabilityView::from_grid(scenario.grid);
  out << "scenario " << scenario.name << ": " << pipeline::outcome_name(log.outcome) << " after " << log.steps
      << " steps, " << log.frames.size() << " frames, semantic occupancy "
      << pipeline::semantic_occupancy(log, view) << "\n"
      << "log: " << (dir / "episode.jsonl").string() << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::vector<std::string> scenarios;
  std::vector<std::string> variants;
  int episodes = 5;
  int max_steps = 1000;
  std::string format = "table";
  std::string out;
  bool serial = false;
  GeneratorFlags gen;
  RemoteFlags remote;
};

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  std::vector<ScenarioSpec> scenarios;
  const auto names = f.scenarios.empty() ? bundled_scenario_names() : f.scenarios;
  for (const auto& n : names) scenarios.push_back(scenario_flag(n));
  const auto variants = f.variants.empty() ? eval::offline_variants() : f.variants;

  eval::BenchmarkOptions opts;
  opts.max_steps = f.max_steps;
  opts.d_t = f.gen.d_t;
  opts.K = f.gen.k;
  opts.generator = generator_backend(f.gen);
  opts.weights = load_weights_flag(f.gen);
  if (opts.weights) opts.K = opts.weights->K;
  if (!f.remote.endpoint.empty()) opts.remote = remote_config(f.remote);
  opts.parallel = !f.serial;
  const auto format = eval::report_format_from_name(f.format);

  const auto report = eval::run_benchmark(scenarios, variants, f.episodes, f.gen.seed, opts);
  if (f.out.empty()) {
    out << eval::format_report(report, format);
  } else {
    eval::emit_report(report, f.out, format);
    out << "report: " << f.out << "\n";
  }
  return kExitOk;
}

struct AnnotateFlags {
  std::string scenario;
  std::string pose;
  std::string out = "annotated.png";
  std::string style = "lines";
  GeneratorFlags gen;
};

int cmd_annotate(const AnnotateFlags& f, std::ostream& out) {
  const ScenarioSpec scenario = scenario_flag(f.scenario);
  RobotState state;
  state.pose = f.pose.empty() ? scenario.start : parse_pose(f.pose);
  const auto view = TraversabilityView::from_grid(scenario.grid);
  const LidarScan scan = simulate_lidar(scenario.grid, state.pose, 360, 20.0);

  trajgen::GeneratorConfig gcfg;
  gcfg.backend = generator_backend(f.gen);
  gcfg.K = f.gen.k;
  gcfg.seed = f.gen.seed;
  const auto weights = load_weights_flag(f.gen);
  if (weights) {
    gcfg.K = weights->K;
    gcfg.M = weights->M;
  }
  const Vec2 goal_local = state.pose.to_local(scenario.goal);
  const trajgen::Observation obs{&scan, &state, &view, goal_local};
  auto pool = selection::update_pool(selection::CandidatePool{},
                                     trajgen::generate_candidates(obs, gcfg, weights.get()), state.pose);
  auto markers = selection::sort_and_number(selection::dedup_representatives(pool, f.gen.d_t), goal_local);
  selection::project_markers(markers, scenario.camera);
  const auto style = f.style == "numbers" ? selection::MarkingStyle::kNumbersOnly
                                          : selection::MarkingStyle::kLinesAndNumbers;
  const RgbImage image = selection::annotate_image(render_camera_image(scenario.grid, state.pose, scenario.camera),
                                                   markers, style);
  write_png(image, f.out);
  const auto bundle = selection::build_prompt(markers);
  out << "wrote " << f.out << " with " << markers.items.size() << " markers\n" << bundle.instruction << "\n";
  return kExitOk;
}

struct WeightsFlags {
  std::string out = "weights.json";
  std::uint64_t seed = 0;
  int k = 8;
  int m = 16;
  int latent = 16;
  int hidden = 64;
};

int cmd_gen_weights(const WeightsFlags& f, std::ostream& out) {
  const auto w = trajgen::GeneratorWeights::random(f.seed, trajgen::kFeatureSize, f.latent, f.k, f.m, f.hidden);
  trajgen::save_weights(w, f.out);
  out << "wrote " << f.out << "\n";
  return kExitOk;
}

struct ReplayFlags {
  std::string log;
  std::string scenario;
  std::string format = "table";
};

int cmd_replay(const ReplayFlags& f, std::ostream& out) {
  const auto log = pipeline::load_log(f.log);
  const ScenarioSpec scenario = scenario_flag(f.scenario.empty() ? log.scenario : f.scenario);
  const auto view = TraversabilityView::from_grid(scenario.grid);
  const bool csv = eval::report_format_from_name(f.format) == eval::ReportFormat::kDelimited;

  char line[160];
  if (csv) out << "step,chosen,traversability,traversability_strict,frechet\n";
  for (const auto& frame : log.frames) {
    const auto s = eval::score_frame(frame.chosen_trajectory(), frame.pose, scenario, view);
    std::snprintf(line, sizeof line, csv ? "%d,%d,%.4f,%d,%.4f\n" : "step %5d  chosen %2d  trav %.4f  strict %d  frechet %.4f\n",
                  frame.step, frame.chosen, s.traversability_fraction, s.traversability_strict,
                  s.frechet_to_reference);
    out << line;
  }
  const auto cell = eval::score_logs(scenario, {log});
  if (!csv) {
    std::snprintf(line, sizeof line, "mean over %zu frames: trav %.4f  strict %.4f  frechet %.4f\n", cell.frames,
                  cell.mean_fraction, cell.mean_strict, cell.mean_frechet);
    out << line << "outcome " << pipeline::outcome_name(log.outcome) << ", semantic occupancy "
        << pipeline::semantic_occupancy(log, view) << ", collisions " << pipeline::collision_count(log, view)
        << "\n";
  }
  return kExitOk;
}

int cmd_validate(const std::string& scenario, std::ostream& out) {
  const ScenarioSpec spec = load_scenario(resolve_scenario(scenario));
  out << "ok: " << spec.name << " (" << spec.grid.width() << "x" << spec.grid.height() << " cells)\n";
  return kExitOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trajectory generation and selection for mapless navigation", "tgs"};
  app.require_subcommand(1, 1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run one closed-loop episode");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file or bundled name")->required();
  run_cmd->add_option("--backend", run.backend, "Selection backend")->check(CLI::IsMember({"oracle", "replay", "remote"}));
  run_cmd->add_option("--fixture", run.fixture, "Replay fixture, one response per line");
  run_cmd->add_option("--out", run.out, "Output directory for the log and frames");
  run_cmd->add_option("--max-steps", run.max_steps, "Step budget")->check(CLI::PositiveNumber);
  add_generator_flags(run_cmd, run.gen);
  add_remote_flags(run_cmd, run.remote);

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the method-variant benchmark");
  bench_cmd->add_option("--scenario", bench.scenarios, "Scenario file or bundled name (repeatable)");
  bench_cmd->add_option("--variants", bench.variants, "Comma-separated variant ids")->delimiter(',');
  bench_cmd->add_option("--episodes", bench.episodes, "Episodes per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-steps", bench.max_steps, "Step budget per episode")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--format", bench.format, "Report format")->check(CLI::IsMember({"table", "delimited"}));
  bench_cmd->add_option("--out", bench.out, "Report file (stdout when omitted)");
  bench_cmd->add_flag("--serial", bench.serial, "Run cells one after another");
  add_generator_flags(bench_cmd, bench.gen);
  add_remote_flags(bench_cmd, bench.remote);

  AnnotateFlags annotate;
  auto* annotate_cmd = app.add_subcommand("annotate", "Write one annotated camera frame");
  annotate_cmd->add_option("--scenario", annotate.scenario, "Scenario file or bundled name")->required();
  annotate_cmd->add_option("--pose", annotate.pose, "x,y,heading (defaults to the scenario start)");
  annotate_cmd->add_option("--out", annotate.out, "Output PNG");
  annotate_cmd->add_option("--style", annotate.style, "Marking style")->check(CLI::IsMember({"lines", "numbers"}));
  add_generator_flags(annotate_cmd, annotate.gen);

  WeightsFlags weights;
  auto* weights_cmd = app.add_subcommand("gen-weights", "Write seeded random generator weights");
  weights_cmd->add_option("--out", weights.out, "Output file");
  weights_cmd->add_option("--seed", weights.seed, "Seed");
  weights_cmd->add_option("--k", weights.k, "Projection heads")->check(CLI::Range(2, 64));
  weights_cmd->add_option("--m", weights.m, "Waypoints per trajectory")->check(CLI::Range(2, 256));
  weights_cmd->add_option("--latent", weights.latent, "Latent size")->check(CLI::PositiveNumber);
  weights_cmd->add_option("--hidden", weights.hidden, "Decoder hidden units")->check(CLI::PositiveNumber);

  ReplayFlags replay;
  auto* replay_cmd = app.add_subcommand("replay", "Re-score an episode log");
  replay_cmd->add_option("--log", replay.log, "Episode log (JSON lines)")->required();
  replay_cmd->add_option("--scenario", replay.scenario, "Scenario (defaults to the one named in the log)");
  replay_cmd->add_option("--format", replay.format, "Output format")->check(CLI::IsMember({"table", "delimited"}));

  std::string validate_scenario;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--scenario", validate_scenario, "Scenario file or bundled name")->required();

  std::vector<const char*> argv = {"tgs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tgs: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*bench_cmd) return cmd_bench(bench, out);
    if (*annotate_cmd) return cmd_annotate(annotate, out);
    if (*weights_cmd) return cmd_gen_weights(weights, out);
    if (*replay_cmd) return cmd_replay(replay, out);
    if (*validate_cmd) return cmd_validate(validate_scenario, out);
  } catch (const BackendUnavailable& e) {
    err << "tgs: backend unavailable: " << e.what() << "\n";
    return kExitBackend;
  } catch (const ValidationError& e) {
    err << "tgs: invalid " << e.what() << "\n";
    return kExitInvalid;
  } catch (const UnknownVariant& e) {
    err << "tgs: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "tgs: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "tgs: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}

int main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return main(args, std::cout, std::cerr);
}

}  // namespace tgs::cli
