#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbpt/activity.hpp"
#include "hbpt/bodyparts.hpp"
#include "hbpt/config.hpp"
#include "hbpt/silhouette.hpp"
#include "hbpt/tracker.hpp"

namespace hbpt::pipeline {

struct Input {
  std::vector<Frame> frames;
  std::vector<DepthRaster> depth;  // empty, or one raster per frame
};

/// Frames matching cfg.frame_pattern in cfg.input, plus depth rasters when
/// use_depth is set and any match cfg.depth_pattern.
Input load_input(const config::PipelineConfig& cfg);

struct BaselineResult {
  silhouette::PartLabels labels;
  std::vector<PointI> concave;
};

struct FrameRecord {
  int frame = 0;
  bool learning = false;
  std::optional<tracker::PersonBlob> person;
  std::optional<tracker::TorsoDisc> torso;
  std::optional<parts::BodyPartModel> model;
  std::optional<BaselineResult> baseline;
  std::optional<Rect> box;
  activity::Phase phase = activity::Phase::Idle;
};

struct Metrics {
  int frames = 0;
  double wall_ms = 0.0;
  double fps = 0.0;
  std::map<std::string, double> stage_ms;  // summed over the run
};

struct RunResult {
  std::vector<FrameRecord> records;
  std::vector<activity::ActivityEvent> events;
  Metrics metrics;
};

/// Per-frame hook, called after each record is complete; the silhouette is
/// the tracked person's component (empty when no person).
using FrameHook = std::function<void(const Frame&, const FrameRecord&, const Mask& silhouette,
                                     const std::vector<activity::ActivityEvent>& new_events)>;

/// Learns the scene from the first learn_frames frames, then tracks, builds
/// the part model (or the silhouette baseline) and runs the activity
/// recognizers on each remaining frame. Deterministic for a given config.
RunResult run(const config::PipelineConfig& cfg, const Input& input, const FrameHook& hook = {});

/// One blobs.jsonl line (no trailing newline).
std::string record_to_json(const FrameRecord& record);
std::string events_to_json(const std::vector<activity::ActivityEvent>& events);
std::string metrics_to_json(const Metrics& metrics);

/// load_input, run, then writes blobs.jsonl, events.json, metrics.json and
/// (with emit_overlays) overlays/frame_*.ppm into cfg.output. Decode time is
/// part of the measured wall time.
RunResult run_pipeline(const config::PipelineConfig& cfg);

}  // namespace hbpt::pipeline
