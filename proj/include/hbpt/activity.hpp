#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbpt/bodyparts.hpp"
#include "hbpt/histogram.hpp"
#include "hbpt/types.hpp"

namespace hbpt::activity {

struct ActivityParams {
  double d_xy = 30.0;  // px, hand-to-box proximity
  int approach_frames = 3;
  double approach_dz_mm = 300.0;
  double open_threshold = 0.4;
  int open_frames = 5;
  int carry_frames = 5;
  double carry_min_step = 1.0;  // px/frame of object motion
  double carry_dz_mm = 200.0;
  int depth_window = 5;
};

/// The configured box ("yellow") rectangle, its reference histogram and the
/// rectangle currently tracked over it.
struct BoxRegion {
  Rect rect;
  hist::Hist16 ref_hist{};
  Rect tracked_rect;
  bool lost = false;  // last mean-shift step saw no box colors
};

BoxRegion make_box_region(const Frame& ref_frame, const Rect& rect);

/// Mean shift over the back-projection of ref_hist, seeded at tracked_rect.
BoxRegion track_box_region(const BoxRegion& box, const Frame& frame, int max_iter = 20, double eps = 1.0);

struct LkParams {
  int window = 15;
  int levels = 3;
  int iterations = 20;
  double min_eig = 1e-3;      // window-averaged tensor of 8-bit gradients / 1024
  double max_residual = 0.1;  // mean |I - J| over the window, Y scaled to [0,1]
};

struct FlowResult {
  std::vector<PointD> points;
  std::vector<bool> alive;
};

/// Pyramidal iterative Lucas-Kanade on the Y channel.
FlowResult lk_flow(const Frame& prev, const Frame& next, std::span<const PointD> points, const LkParams& params = {});

struct TrackPoint {
  PointD p;
  bool alive = true;
};

struct ObjectTrack {
  std::vector<TrackPoint> points;

  int alive_count() const;
  bool valid() const { return alive_count() > 0; }
  PointD centroid() const;
};

/// Grid points inside rect (spacing px apart, clear of the border by half a
/// window) whose structure tensor passes min_eig.
ObjectTrack seed_object_track(const Frame& frame, const Rect& rect, int spacing = 4, const LkParams& params = {});
ObjectTrack advance_track(const ObjectTrack& track, const Frame& prev, const Frame& next, const LkParams& params = {});

enum class EventKind { Approach, Open, Carry };
const char* to_string(EventKind kind);

struct ActivityEvent {
  EventKind kind = EventKind::Approach;
  int frame_index = 0;
  double confidence = 0.0;
  bool depth_used = false;
  double distance_px = 0.0;           // Approach, Carry: hand to box / object
  std::optional<double> dz_mm;        // Approach: |z_hand - z_box|; Carry: |dz_object - dz_hand|
  std::optional<double> hist_distance;  // Open
  std::optional<double> step_px;        // Carry: object displacement this frame
};

enum class Phase { Idle, Approached, Opened, Carrying };
const char* to_string(Phase phase);

struct ActivityState {
  Phase phase = Phase::Idle;
  int approach_count = 0;
  int open_count = 0;
  int carry_count = 0;
  bool approach_fired = false;
  bool open_fired = false;
  bool carry_fired = false;
  // Previous-frame carry measurements.
  std::optional<PointD> last_object;
  std::optional<double> last_object_z;
  std::optional<double> last_hand_z;

  bool approached() const { return phase != Phase::Idle; }
};

/// Median of the valid (nonzero) depth samples in the size x size window at p,
/// restricted to `only` when given. None when no sample qualifies.
std::optional<double> sample_depth(const DepthRaster& depth, PointD p, int size, const Mask* only = nullptr);
/// Median of the valid depth samples of rect, skipping pixels set in `skip`.
std::optional<double> rect_depth(const DepthRaster& depth, const Rect& rect, const Mask* skip = nullptr);

/// Hand point of the model nearest the box, if any arm is present.
std::optional<PointI> nearest_hand(const parts::BodyPartModel& model, const Rect& box);

std::optional<ActivityEvent> detect_approach(const parts::BodyPartModel& model, const BoxRegion& box,
                                             const DepthRaster* depth, const Mask* silhouette, ActivityState& state,
                                             const ActivityParams& params = {});

std::optional<ActivityEvent> detect_open(const BoxRegion& box, const Frame& frame, ActivityState& state,
                                         const ActivityParams& params = {});

std::optional<ActivityEvent> detect_carry(const parts::BodyPartModel& model, const ObjectTrack& track,
                                          const DepthRaster* depth, const Mask* silhouette, ActivityState& state,
                                          const ActivityParams& params = {});

}  // namespace hbpt::activity
