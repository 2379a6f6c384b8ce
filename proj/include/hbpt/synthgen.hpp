#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hbpt/blobmodel.hpp"
#include "hbpt/types.hpp"

namespace hbpt::synth {

enum class ScenarioName { background, walker, starfish, occluded_arm, approach_box, open_box, carry_box, null_walk };

const char* to_string(ScenarioName name);
std::optional<ScenarioName> scenario_from_string(const std::string& name);

struct ScenarioParams {
  int width = 320;
  int height = 240;
  int frames = 300;
  int learn_frames = 30;  // leading person-free frames
  double speed = 0.8;     // px/frame for walking scripts
  double start_x = 50.0;
  double noise_sigma = 2.0;
  bool depth = true;
  double depth_dropout = 0.01;
  int wall_depth_mm = 4000;
  int person_depth_mm = 2500;
  int box_depth_mm = 2500;
  Rect box{250, 100, 30, 24};  // shelf height, within reach of the raised arm
};

struct Scenario {
  ScenarioName name = ScenarioName::walker;
  ScenarioParams params;
  std::uint64_t seed = 1;
};

/// Default parameters of each named scenario.
Scenario make_scenario(ScenarioName name, std::uint64_t seed = 1);

/// Articulated figure pose. Arm elevations are degrees below horizontal
/// (90 = hanging), leg angles are degrees from vertical toward +x.
struct Pose {
  double cx = 160.0;
  double y0 = 80.0;  // top of the head; feet at y0 + 150
  double arm_left = 90.0;
  double arm_right = 90.0;
  double leg_left = 0.0;
  double leg_right = 0.0;
  bool left_arm_visible = true;
  bool right_arm_visible = true;
};

struct FigureGeometry {
  static constexpr double stature = 150.0;
  static constexpr double head_radius = 8.0;
  static constexpr double torso_half_width = 20.0;
  static constexpr double arm_length = 52.0;
  static constexpr double arm_radius = 6.0;
  static constexpr double leg_length = 62.0;
  static constexpr double leg_radius = 8.0;
};

/// Pixels whose centers fall inside the figure.
Mask render_silhouette(const Pose& pose, int width, int height);

struct PartTruth {
  bool visible = false;
  PointD centroid;
};

struct FrameTruth {
  int index = 0;
  bool person = false;
  PointD centroid;
  Rect bbox;
  Rect torso_rect;
  double body_width = 0.0;
  std::array<PartTruth, 8> parts{};  // indexed by PartLabel
  PointD head_top;
  std::array<PointD, 2> hand_tips{};  // left, right
  std::array<PointD, 2> foot_tips{};  // left, right
  bool right_arm_visible = false;
  Rect box;
  bool box_present = false;
  bool box_open = false;
};

struct ScriptedEvent {
  std::string kind;  // "Approach", "Open", "Carry"
  int frame = 0;
};

struct GroundTruth {
  std::string scenario;
  std::uint64_t seed = 0;
  int learn_frames = 0;
  std::vector<FrameTruth> frames;
  std::vector<ScriptedEvent> events;
};

struct Sequence {
  std::vector<Frame> frames;
  std::vector<DepthRaster> depth;  // empty when the scenario has no depth
  std::vector<Mask> silhouettes;   // clean person masks
  GroundTruth truth;
};

Sequence generate_scenario(const Scenario& scenario);

/// frame_%06d.ppm, depth_%06d.pgm, truth.json and scenario.toml under dir.
void write_sequence(const Sequence& seq, const Scenario& scenario, const std::filesystem::path& dir);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);

}  // namespace hbpt::synth
