#pragma once

#include <optional>
#include <vector>

#include "hbpt/maskops.hpp"
#include "hbpt/types.hpp"

namespace hbpt::silhouette {

inline constexpr int kProjectionLength = 100;

struct ProjectionHistograms {
  // vertical: indexed along the minor axis; horizontal: indexed along the major axis.
  std::vector<double> vertical;
  std::vector<double> horizontal;
  int median_index = kProjectionLength / 2;
  // Unscaled projections over integer axis coordinates starting at *_origin.
  std::vector<long long> raw_vertical;
  std::vector<long long> raw_horizontal;
  int vertical_origin = 0;
  int horizontal_origin = 0;
};

struct Geometry {
  PointD centroid;
  PointD major_axis;  // unit, y >= 0 (x > 0 when y == 0)
  PointD minor_axis;  // (major.y, -major.x)
  ProjectionHistograms projections;
  Rect bbox;
};

/// Projection bin of a pixel: p . axis, rounded half away from zero. Absolute
/// coordinates keep axis-aligned shapes free of empty bins.
int axis_bin(PointI p, PointD axis);

Geometry silhouette_geometry(const Mask& mask);

struct VertexSet {
  std::vector<PointI> convex;
  std::vector<PointI> concave;
};

/// Hull vertices of the contour plus, per hull edge, the deepest contour point
/// between its end vertices when it lies at least d_min inside.
VertexSet hull_vertices(const maskops::Contour& contour, double d_min = 3.0);

/// k-cosine corners: points whose angle between p[i-k]-p[i] and p[i+k]-p[i]
/// is at most angle_deg, kept where the cosine peaks locally.
std::vector<PointI> curvature_corners(const maskops::Contour& contour, int k = 7, double angle_deg = 140.0);

struct LabelParams {
  double head_band = 0.25;     // of bbox width
  double feet_separation = 0.15;  // of bbox width
  double hand_reach = 0.4;     // of bbox height
};

struct PartLabels {
  std::optional<PointI> head;
  std::vector<PointI> feet;
  std::vector<PointI> hands;
  PointD torso;
};

PartLabels label_parts_by_distance(const VertexSet& vertices, PointD centroid, const Mask& mask,
                                   const LabelParams& params = {});

}  // namespace hbpt::silhouette
