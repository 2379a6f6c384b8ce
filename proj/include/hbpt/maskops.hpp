#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hbpt/types.hpp"

namespace hbpt::maskops {

enum class MorphOp { dilate, erode };

/// Rectangular structuring element anchored at its center; sides must be odd.
struct StructuringElement {
  int width = 3;
  int height = 3;
};

/// Binary dilation or erosion repeated `iterations` times. Pixels outside the
/// frame are background, so erosion eats into the border.
Mask morph(const Mask& mask, MorphOp op, StructuringElement se = {}, int iterations = 1);

inline Mask dilate(const Mask& m, StructuringElement se = {}, int iterations = 1) {
  return morph(m, MorphOp::dilate, se, iterations);
}
inline Mask erode(const Mask& m, StructuringElement se = {}, int iterations = 1) {
  return morph(m, MorphOp::erode, se, iterations);
}
/// Dilate then erode on the zero-extended plane, cropped back to the frame.
/// Working on the plane keeps closing extensive at the frame border, where a
/// cropped dilation followed by erode() would strip edge pixels.
Mask close(const Mask& m, StructuringElement se = {}, int iterations = 1);

struct ComponentStats {
  int label = 0;
  long long area = 0;
  Rect bbox;
  PointD centroid;
};

/// labels[i] is 0 for background or 1..count(); stats[k] describes label k+1.
/// Labels are numbered in raster order of each component's first pixel.
struct LabeledComponents {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<ComponentStats> stats;

  int count() const { return static_cast<int>(stats.size()); }
  int label_at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  /// Index into stats of the largest component, or nullopt when there is none.
  std::optional<int> largest() const;
  Mask component_mask(int label) const;
  std::vector<PointI> component_pixels(int label) const;
};

LabeledComponents connected_components(const Mask& mask, int connectivity = 8);

struct Contour {
  enum class Level { outer, hole };

  std::vector<PointI> points;  // closed 8-connected chain, first point not repeated
  Level level = Level::outer;
  std::optional<int> parent;   // index of the enclosing outer contour, holes only
};

/// Suzuki-Abe border following, flattened to two levels: every outer border
/// (including one lying inside a hole) is top level; hole borders point at the
/// outer border of the component that surrounds them.
std::vector<Contour> extract_contours(const Mask& mask);

/// Keeps only the chain points where the step direction changes, so straight
/// horizontal, vertical and diagonal runs collapse to their end points.
std::vector<PointI> approximate_contour(const Contour& contour);

/// Graham scan. Counter-clockwise in the (x right, y up) sense, i.e. every
/// point satisfies cross(b - a, p - a) >= 0 for every edge a->b. Starts at the
/// point with the smallest y (then smallest x); collinear boundary points are
/// dropped.
std::vector<PointI> convex_hull(std::span<const PointI> points);

/// Pixels of the closed polygon through `vertices` (pixel centers): its
/// boundary segments plus every pixel center strictly inside.
Mask fill_polygon(std::span<const PointI> vertices, int width, int height);

struct RefineParams {
  StructuringElement se{3, 3};
  int iterations = 1;
};

/// Dilate, erode, dilate (a closing followed by a dilation); then keep each outer contour whose filled area is at
/// least min_area and fill it (holes included).
Mask refine_mask(const Mask& mask, long long min_area, const RefineParams& params = {});

}  // namespace hbpt::maskops
