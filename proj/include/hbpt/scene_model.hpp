#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "hbpt/types.hpp"

namespace hbpt::scene {

/// Per-pixel Gaussian background: independent mean and variance for each of
/// the Y, U and V channels. Planes are interleaved as [pixel][channel].
struct SceneModel {
  int width = 0;
  int height = 0;
  std::vector<float> mean;
  std::vector<float> var;
  int frames_seen = 0;
  float var_floor = 4.0f;
};

struct SceneParams {
  int learn_frames = 30;
  float var_floor = 4.0f;
  double tau = 4.0;
  double alpha = 0.05;
};

/// Sample mean and population variance over `frames` (at least two), each
/// variance floored at var_floor.
SceneModel learn_scene(std::span<const Frame> frames, float var_floor = 4.0f);

/// Sets a pixel when sum_c (x_c - mean_c)^2 / var_c > tau^2.
ForegroundMask detect_foreground(const SceneModel& model, const Frame& frame, double tau = 4.0);

/// Exponential update of the pixels not covered by `fg`:
/// mean <- (1-alpha) mean + alpha x, var <- (1-alpha) var + alpha (x - mean')^2.
void update_scene(SceneModel& model, const Frame& frame, const ForegroundMask& fg, double alpha = 0.05);

/// Per-pixel median of the valid samples of `frames` (0 where none is valid).
DepthRaster learn_depth(std::span<const DepthRaster> frames);

/// Clears foreground pixels whose valid depth lies more than margin_mm behind
/// the learned depth: surfaces revealed by a moved background object.
void gate_revealed(ForegroundMask& fg, const DepthRaster& learned, const DepthRaster& depth, double margin_mm = 150.0);

/// Little-endian: "HBSM", u32 version, u32 width, u32 height, u32 frames_seen,
/// f32 var_floor, then the mean plane and the var plane as f32.
void save_scene(const SceneModel& model, const std::filesystem::path& path);
SceneModel load_scene(const std::filesystem::path& path);

}  // namespace hbpt::scene
