#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbpt/activity.hpp"
#include "hbpt/pipeline.hpp"
#include "hbpt/synthgen.hpp"

namespace hbpt::eval {

/// The parts of a blobs.jsonl record that are scored against ground truth.
struct ScoredFrame {
  int frame = 0;
  std::optional<PointD> centroid;
  std::optional<PointD> disc_center;
  std::array<std::optional<PointD>, 8> parts{};  // indexed by PartLabel
};

ScoredFrame scored(const pipeline::FrameRecord& record);
/// Parses one blobs.jsonl line.
ScoredFrame scored_from_json(const std::string& line);

struct ScoredEvent {
  std::string kind;
  int frame = 0;
};

std::vector<ScoredEvent> scored(const std::vector<activity::ActivityEvent>& events);
std::vector<ScoredEvent> events_from_json(const std::string& text);

struct PartScore {
  int visible = 0;  // truth frames with the part visible
  int hits = 0;     // ...where the estimate lies within tolerance
  double rate() const { return visible ? static_cast<double>(hits) / visible : 1.0; }
};

struct PresenceScore {
  int frames = 0;
  int agree = 0;
  // Per scripted visibility change: estimated change frame minus truth frame
  // (nullopt when the estimate never changes within the search window).
  std::vector<std::pair<int, std::optional<int>>> transitions;
  double rate() const { return frames ? static_cast<double>(agree) / frames : 1.0; }
};

struct EventMatch {
  std::string kind;
  int truth_frame = 0;
  std::optional<int> found_frame;
  bool within_tolerance = false;
};

struct Summary {
  int person_frames = 0;     // truth frames with a person
  int tracked_frames = 0;    // ...where an estimate exists
  double centroid_rms = 0.0;  // over tracked frames
  double disc_in_torso = 0.0;  // fraction of person frames
  std::map<std::string, PartScore> parts;
  PresenceScore arm_right;
  std::vector<EventMatch> events;
  int unmatched_events = 0;  // estimated events with no scripted counterpart
};

struct Tolerances {
  double part_fraction = 0.15;  // of the true torso width
  int event_frames = 5;
  int open_frames = 5;  // Open is expected open_frames after the scripted recolor
  int open_slack = 2;
  int transition_window = 10;
};

Summary evaluate(const std::vector<ScoredFrame>& frames, const std::vector<ScoredEvent>& events,
                 const synth::GroundTruth& truth, const Tolerances& tol = {});

std::string summary_to_json(const Summary& s);

}  // namespace hbpt::eval
