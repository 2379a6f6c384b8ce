#pragma once

#include <array>
#include <span>
#include <vector>

#include "hbpt/types.hpp"

namespace hbpt::hist {

/// Joint 4x4 (U,V) histogram; bin = 4 * (U / 64) + V / 64.
using Hist16 = std::array<double, 16>;

inline int uv_bin(std::uint8_t u, std::uint8_t v) { return 4 * (u >> 6) + (v >> 6); }

/// Normalized histogram of the pixels of `rect`.
Hist16 color_hist16(const Frame& frame, const Rect& rect);
/// Normalized histogram of an arbitrary pixel set.
Hist16 hist_from_pixels(const Frame& frame, std::span<const PointI> pixels);

bool is_normalized(const Hist16& h, double tol = 1e-9);

/// Bhattacharyya coefficient sum_i sqrt(h1_i h2_i).
double similarity(const Hist16& h1, const Hist16& h2);
/// sqrt(1 - similarity), in [0, 1].
double hist_distance(const Hist16& h1, const Hist16& h2);

struct WeightImage {
  int width = 0;
  int height = 0;
  std::vector<double> w;

  double at(int x, int y) const { return w[static_cast<std::size_t>(y) * width + x]; }
};

/// Each pixel's weight is the histogram value of its (U,V) bin.
WeightImage back_project(const Frame& frame, const Hist16& h);

}  // namespace hbpt::hist
