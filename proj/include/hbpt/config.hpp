#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbpt/activity.hpp"
#include "hbpt/scene_model.hpp"
#include "hbpt/silhouette.hpp"
#include "hbpt/tracker.hpp"

namespace hbpt::config {

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  std::string frame_pattern = "frame_*";
  std::string depth_pattern = "depth_*.pgm";
  std::uint64_t seed = 1;

  scene::SceneParams scene;
  long long min_area = 200;  // foreground contours and person detection
  double depth_gate_mm = 150.0;  // 0 disables clearing revealed background
  tracker::TrackerParams tracker;
  long long min_part_area = 15;
  silhouette::LabelParams baseline;
  activity::ActivityParams activity;
  activity::LkParams lk;
  int lk_spacing = 4;
  std::optional<Rect> box_rect;
  std::optional<int> box_ref_frame;  // defaults to the last learning frame

  bool emit_overlays = false;
  bool use_depth = true;
  bool baseline_mode = false;

  int box_reference_index() const { return box_ref_frame.value_or(std::max(scene.learn_frames - 1, 0)); }
};

/// Applies `key = value` lines (optionally under [section] headers, which
/// prefix the keys) onto base. Unknown keys and malformed values throw
/// bad_config naming the line.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Sets one dotted key from its textual value.
void set_value(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Range checks shared by the parser and programmatic callers.
void validate(const PipelineConfig& cfg);

std::vector<std::string> known_keys();

}  // namespace hbpt::config
