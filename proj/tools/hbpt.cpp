// hbpt: command-line front end for synthesis, scene learning, tracking,
// the silhouette baseline and evaluation against truth.json.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hbpt/config.hpp"
#include "hbpt/evaluate.hpp"
#include "hbpt/imageio.hpp"
#include "hbpt/pipeline.hpp"
#include "hbpt/scene_model.hpp"
#include "hbpt/synthgen.hpp"

namespace fs = std::filesystem;
using namespace hbpt;

namespace {

struct CommonOptions {
  std::string config_file;
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  bool overlays = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_overlays) {
  cmd->add_option("--config", o.config_file, "Flat key = value config file");
  cmd->add_option("--input", o.input, "Input directory");
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--set", o.sets, "Override one config key (key=value), repeatable");
  if (with_overlays) cmd->add_flag("--overlays", o.overlays, "Write annotated frames to <output>/overlays");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_failure, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Defaults, then the config file (or <input>/scenario.toml when none is
// given), then command-line flags.
config::PipelineConfig resolve(const CommonOptions& o) {
  config::PipelineConfig cfg;
  if (!o.config_file.empty()) {
    cfg = config::load_config(o.config_file);
  } else if (!o.input.empty() && fs::is_regular_file(fs::path(o.input) / "scenario.toml")) {
    cfg = config::load_config(fs::path(o.input) / "scenario.toml");
  }
  if (!o.input.empty()) cfg.input = o.input;
  if (!o.output.empty()) cfg.output = o.output;
  if (o.seed) cfg.seed = *o.seed;
  if (o.overlays) cfg.emit_overlays = true;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::bad_config, "--set expects key=value, got '" + kv + "'");
    config::set_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config::validate(cfg);
  if (cfg.input.empty()) throw Error(ErrorKind::bad_config, "no input directory (use --input)");
  if (!fs::is_directory(cfg.input)) throw Error(ErrorKind::no_match, "input directory not found: " + cfg.input.string());
  return cfg;
}

void print_metrics(const pipeline::RunResult& r, const fs::path& out) {
  std::printf("%d frames, %.1f fps, %zu events -> %s\n", r.metrics.frames, r.metrics.fps, r.events.size(),
              out.string().c_str());
}

int cmd_synth(const std::string& scenario, std::uint64_t seed, const std::string& output, int frames) {
  const auto name = synth::scenario_from_string(scenario);
  if (!name) throw Error(ErrorKind::invalid_params, "unknown scenario '" + scenario + "'");
  synth::Scenario sc = synth::make_scenario(*name, seed);
  if (frames > 0) sc.params.frames = frames;
  const auto seq = synth::generate_scenario(sc);
  synth::write_sequence(seq, sc, output);
  std::printf("%s: %zu frames -> %s\n", scenario.c_str(), seq.frames.size(), output.c_str());
  return 0;
}

int cmd_learn(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto frames = imageio::load_frame_sequence(cfg.input, cfg.frame_pattern);
  if (static_cast<int>(frames.size()) < cfg.scene.learn_frames) {
    throw Error(ErrorKind::too_few_frames, cfg.input.string() + " holds " + std::to_string(frames.size()) +
                                               " frames, fewer than scene.learn_frames");
  }
  const auto model = scene::learn_scene(std::span<const Frame>(frames.data(), cfg.scene.learn_frames),
                                        cfg.scene.var_floor);
  const fs::path out = cfg.output.empty() ? fs::path("scene.hbsm")
                       : cfg.output.extension() == ".hbsm" ? cfg.output
                                                            : cfg.output / "scene.hbsm";
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  scene::save_scene(model, out);
  std::printf("scene model from %d frames -> %s\n", cfg.scene.learn_frames, out.string().c_str());
  return 0;
}

int cmd_track(const CommonOptions& o, bool baseline) {
  auto cfg = resolve(o);
  if (baseline) cfg.baseline_mode = true;
  if (cfg.output.empty()) throw Error(ErrorKind::bad_config, "no output directory (use --output)");
  const auto r = pipeline::run_pipeline(cfg);
  print_metrics(r, cfg.output);
  return 0;
}

int cmd_eval(const CommonOptions& o, const std::string& truth_path) {
  if (o.input.empty() || o.output.empty()) {
    throw Error(ErrorKind::bad_config, "eval needs --input (tracking output) and --output (report directory)");
  }
  const fs::path run_dir = o.input;
  if (!fs::is_directory(run_dir)) throw Error(ErrorKind::no_match, "input directory not found: " + run_dir.string());
  const fs::path truth_file = truth_path.empty() ? run_dir / "truth.json" : fs::path(truth_path);
  const auto truth = synth::truth_from_json(read_file(truth_file));

  std::vector<eval::ScoredFrame> frames;
  std::istringstream blobs(read_file(run_dir / "blobs.jsonl"));
  for (std::string line; std::getline(blobs, line);) {
    if (!line.empty()) frames.push_back(eval::scored_from_json(line));
  }
  const auto events = eval::events_from_json(read_file(run_dir / "events.json"));
  const auto summary = eval::evaluate(frames, events, truth);

  fs::create_directories(o.output);
  const fs::path report = fs::path(o.output) / "eval.json";
  std::ofstream(report) << eval::summary_to_json(summary) << '\n';

  std::printf("person frames %d, tracked %d, centroid RMS %.2f px, disc in torso %.1f%%\n", summary.person_frames,
              summary.tracked_frames, summary.centroid_rms, 100.0 * summary.disc_in_torso);
  for (const auto& [name, p] : summary.parts) {
    if (p.visible) std::printf("  %-6s %5.1f%% of %d visible frames\n", name.c_str(), 100.0 * p.rate(), p.visible);
  }
  std::printf("  armR presence agreement %.1f%%\n", 100.0 * summary.arm_right.rate());
  for (const auto& m : summary.events) {
    std::printf("  %s: scripted %d, found %s%s\n", m.kind.c_str(), m.truth_frame,
                m.found_frame ? std::to_string(*m.found_frame).c_str() : "none",
                m.within_tolerance ? "" : " (outside tolerance)");
  }
  std::printf("  unmatched events %d -> %s\n", summary.unmatched_events, report.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body-part tracking and activity recognition on color (+depth) frame sequences"};
  app.require_subcommand(1);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scenario (frames, depth, truth.json)");
  std::string scenario = "walker";
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  int synth_frames = 0;
  synth_cmd->add_option("--scenario", scenario,
                        "background|walker|starfish|occluded_arm|approach_box|open_box|carry_box|null_walk")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--output", synth_out, "Output directory")->required();
  synth_cmd->add_option("--frames", synth_frames, "Override the scenario's frame count");
  std::string synth_config;
  synth_cmd->add_option("--config", synth_config, "Accepted for symmetry; synth takes no config keys");

  CommonOptions learn_opts, track_opts, base_opts, eval_opts;
  auto* learn_cmd = app.add_subcommand("learn", "Learn the background model and save it (scene.hbsm)");
  add_common(learn_cmd, learn_opts, false);
  auto* track_cmd = app.add_subcommand("track", "Run the full pipeline: blobs.jsonl, events.json, metrics.json");
  add_common(track_cmd, track_opts, true);
  auto* base_cmd = app.add_subcommand("baseline", "Run the silhouette (hull/projection) labeler instead of blobs");
  add_common(base_cmd, base_opts, true);
  auto* eval_cmd = app.add_subcommand("eval", "Compare a track output directory (--input) with truth.json");
  add_common(eval_cmd, eval_opts, false);
  std::string truth_path;
  eval_cmd->add_option("--truth", truth_path, "truth.json (default: <input>/truth.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) return cmd_synth(scenario, synth_seed, synth_out, synth_frames);
    if (*learn_cmd) return cmd_learn(learn_opts);
    if (*track_cmd) return cmd_track(track_opts, false);
    if (*base_cmd) return cmd_track(base_opts, true);
    if (*eval_cmd) return cmd_eval(eval_opts, truth_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "hbpt: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hbpt: %s\n", e.what());
    return 1;
  }
  return 0;
}
