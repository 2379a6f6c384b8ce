#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hbpt/histogram.hpp"
#include "hbpt/maskops.hpp"
#include "hbpt/types.hpp"

namespace hbpt::tracker {

struct PersonBlob {
  Rect bbox;
  PointD centroid;
  long long area = 0;
  hist::Hist16 ref_hist{};
  double confidence = 0.0;
  // Median silhouette row width near the centroid; 0 means "use bbox.w".
  double body_width = 0.0;
  PointD velocity;
};

struct TorsoDisc {
  PointD center;
  double radius = 0.0;
};

struct Particle {
  double x = 0.0;
  double y = 0.0;
  double scale = 1.0;
  double weight = 0.0;
};

struct ParticleSet {
  std::vector<Particle> particles;
  std::uint64_t rng_seed = 0;
  std::mt19937_64 rng;
};

struct TrackerParams {
  int n_particles = 100;
  double sigma_xy = 5.0;
  double sigma_scale = 0.02;
  double iou_gate = 0.3;
  double window_margin = 0.25;
  double coast_decay = 0.8;
  double drop_confidence = 0.05;
  int ms_max_iter = 20;
  double ms_eps = 1.0;
};

/// Median per-row pixel count of `silhouette` over the rows within bbox.h/8
/// of the centroid (bbox.w when no row qualifies).
double measure_body_width(const Mask& silhouette, PointD centroid, const Rect& bbox);

/// Largest component with area >= min_area, as a fresh PersonBlob (confidence 1).
std::optional<PersonBlob> detect_person(const maskops::LabeledComponents& components, const Frame& frame,
                                        long long min_area);

/// All particles at the person centroid with scale 1 and weight 1/n.
ParticleSet init_particles(const PersonBlob& person, int n, std::uint64_t seed);

struct MeanShiftResult {
  Rect window;
  int iterations = 0;
  bool converged = false;
  PointD centroid;               // weighted centroid of the final window
  std::vector<double> weight_sums;  // window weight sum after each accepted step, starting with the input
};

/// Flat-kernel mean shift. A step that would lower the window weight sum is
/// halved until it does not (or vanishes, which ends the search).
MeanShiftResult mean_shift(const hist::WeightImage& weights, const Rect& window, int max_iter = 20, double eps = 1.0);

struct TrackResult {
  PersonBlob person;
  ParticleSet particles;
  std::optional<int> component;  // label of the fused fg component, if any
  maskops::LabeledComponents components;
};

TrackResult mspf_track(const PersonBlob& prev, ParticleSet particles, const Frame& frame, const ForegroundMask& fg,
                       const TrackerParams& params = {});

/// Disc at the centroid with radius body_width / 2, shrunk if needed so it
/// stays within the bbox columns [x, x + w] horizontally.
TorsoDisc torso_from_person(const PersonBlob& person);

}  // namespace hbpt::tracker
