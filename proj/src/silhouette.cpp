#include "hbpt/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hbpt/blobmodel.hpp"

namespace hbpt::silhouette {

namespace {

int round_half_away(double v) { return static_cast<int>(v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5)); }

double median_of_bins(const std::vector<long long>& raw, int origin, long long total) {
  // Lower and upper medians of the binned coordinates, averaged.
  const long long lo_rank = (total - 1) / 2, hi_rank = total / 2;
  long long seen = 0;
  double lo = 0, hi = 0;
  bool have_lo = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const long long next = seen + raw[i];
    if (!have_lo && lo_rank < next) {
      lo = origin + static_cast<double>(i);
      have_lo = true;
    }
    if (hi_rank < next) {
      hi = origin + static_cast<double>(i);
      break;
    }
    seen = next;
  }
  return 0.5 * (lo + hi);
}

// Nearest bin to t; ties go away from the median so a histogram symmetric
// about the median resamples symmetrically.
int nearest_bin(double t, double median) {
  const double f = std::floor(t);
  if (t - f != 0.5) return static_cast<int>(std::floor(t + 0.5));
  return static_cast<int>(t >= median ? f + 1 : f);
}

std::vector<double> resample(const std::vector<long long>& raw, int origin, double median) {
  const double lo = origin, hi = origin + static_cast<double>(raw.size()) - 1;
  const double half_extent = std::max({median - lo, hi - median, 1.0});
  const double scale = (kProjectionLength / 2.0) / half_extent;
  std::vector<double> out(kProjectionLength, 0.0);
  for (int i = 0; i < kProjectionLength; ++i) {
    const double t = median + (i - kProjectionLength / 2) / scale;
    const int bin = nearest_bin(t, median) - origin;
    if (bin >= 0 && bin < static_cast<int>(raw.size())) out[i] = static_cast<double>(raw[bin]);
  }
  return out;
}

double cross(PointI o, PointI a, PointI b) {
  return static_cast<double>(a.x - o.x) * (b.y - o.y) - static_cast<double>(a.y - o.y) * (b.x - o.x);
}

}  // namespace

int axis_bin(PointI p, PointD axis) { return round_half_away(p.x * axis.x + p.y * axis.y); }

Geometry silhouette_geometry(const Mask& mask) {
  std::vector<PointI> px;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.get(x, y)) px.push_back({x, y});
    }
  }
  if (px.empty()) throw Error(ErrorKind::empty_mask, "silhouette_geometry of an empty mask");
  Frame dummy(mask.width, mask.height);
  const blob::GaussianBlob b = blob::fit_blob(px, dummy, blob::PartLabel::torso, 0.0);
  Geometry g;
  g.centroid = b.mu;
  const double angle = blob::eigen(b.K).angle;
  PointD major{std::cos(angle), std::sin(angle)};
  if (angle == std::numbers::pi / 2) major = {0.0, 1.0};
  if (major.y < 0 || (major.y == 0 && major.x < 0)) major = {-major.x, -major.y};
  g.major_axis = major;
  g.minor_axis = {major.y, -major.x};

  int x0 = px[0].x, x1 = x0, y0 = px[0].y, y1 = y0;
  int vmin = 0, vmax = 0, hmin = 0, hmax = 0;
  bool first = true;
  std::vector<std::pair<int, int>> bins;
  bins.reserve(px.size());
  for (const PointI& p : px) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
    const int v = axis_bin(p, g.minor_axis);
    const int h = axis_bin(p, g.major_axis);
    bins.push_back({v, h});
    if (first) {
      vmin = vmax = v;
      hmin = hmax = h;
      first = false;
    }
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  g.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  auto& pr = g.projections;
  pr.vertical_origin = vmin;
  pr.horizontal_origin = hmin;
  pr.raw_vertical.assign(vmax - vmin + 1, 0);
  pr.raw_horizontal.assign(hmax - hmin + 1, 0);
  for (const auto& [v, h] : bins) {
    ++pr.raw_vertical[v - vmin];
    ++pr.raw_horizontal[h - hmin];
  }
  const auto n = static_cast<long long>(px.size());
  pr.vertical = resample(pr.raw_vertical, vmin, median_of_bins(pr.raw_vertical, vmin, n));
  pr.horizontal = resample(pr.raw_horizontal, hmin, median_of_bins(pr.raw_horizontal, hmin, n));
  return g;
}

VertexSet hull_vertices(const maskops::Contour& contour, double d_min) {
  const auto& pts = contour.points;
  if (pts.size() < 3) throw Error(ErrorKind::degenerate_contour, "contour has fewer than 3 points");
  VertexSet vs;
  vs.convex = maskops::convex_hull(pts);
  if (vs.convex.size() < 3) throw Error(ErrorKind::degenerate_contour, "contour is collinear");

  // Hull vertices sorted by their first position along the chain.
  std::vector<std::size_t> idx;
  for (const PointI& h : vs.convex) {
    idx.push_back(static_cast<std::size_t>(std::find(pts.begin(), pts.end(), h) - pts.begin()));
  }
  std::sort(idx.begin(), idx.end());
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t a = idx[k], b = idx[(k + 1) % idx.size()];
    const PointI pa = pts[a], pb = pts[b];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    if (len == 0) continue;
    double best = -1;
    std::size_t best_i = a;
    for (std::size_t i = (a + 1) % n; i != b; i = (i + 1) % n) {
      const double d = std::abs(cross(pa, pb, pts[i])) / len;
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best >= d_min) vs.concave.push_back(pts[best_i]);
  }
  return vs;
}

std::vector<PointI> curvature_corners(const maskops::Contour& contour, int k, double angle_deg) {
  const auto& pts = contour.points;
  const int n = static_cast<int>(pts.size());
  std::vector<PointI> out;
  if (n < 2 * k + 1) return out;
  std::vector<double> cosv(n);
  for (int i = 0; i < n; ++i) {
    const PointI p = pts[i], a = pts[(i - k + n) % n], b = pts[(i + k) % n];
    const double ax = a.x - p.x, ay = a.y - p.y, bx = b.x - p.x, by = b.y - p.y;
    const double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
    cosv[i] = (na == 0 || nb == 0) ? -1.0 : (ax * bx + ay * by) / (na * nb);
  }
  const double thresh = std::cos(angle_deg * std::numbers::pi / 180.0);
  const int half = std::max(1, k / 2);
  for (int i = 0; i < n; ++i) {
    if (cosv[i] < thresh) continue;
    bool peak = true;
    for (int d = -half; d <= half && peak; ++d) {
      if (d == 0) continue;
      const double other = cosv[(i + d + n) % n];
      // Plateaus keep their first point only.
      if (other > cosv[i] || (other == cosv[i] && d < 0)) peak = false;
    }
    if (peak) out.push_back(pts[i]);
  }
  return out;
}

PartLabels label_parts_by_distance(const VertexSet& vertices, PointD centroid, const Mask& mask,
                                   const LabelParams& params) {
  PartLabels out;
  out.torso = centroid;
  if (vertices.convex.empty()) throw Error(ErrorKind::empty_input, "no vertices to label");
  int x0 = mask.width, x1 = -1, y0 = mask.height, y1 = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  const double bw = x1 >= x0 ? x1 - x0 + 1 : 0, bh = y1 >= y0 ? y1 - y0 + 1 : 0;
  auto dist2 = [&](PointI p) { return (p.x - centroid.x) * (p.x - centroid.x) + (p.y - centroid.y) * (p.y - centroid.y); };
  auto before = [](PointI a, PointI b) { return a.x != b.x ? a.x < b.x : a.y < b.y; };

  // Head: highest convex vertex near the vertical through the centroid.
  std::optional<PointI> head, top;
  for (const PointI& p : vertices.convex) {
    auto higher = [&](const std::optional<PointI>& cur) { return !cur || p.y < cur->y || (p.y == cur->y && before(p, *cur)); };
    if (higher(top)) top = p;
    if (std::abs(p.x - centroid.x) <= params.head_band * bw && higher(head)) head = p;
  }
  out.head = head ? head : top;

  // Feet: farthest convex vertices below the centroid, horizontally apart.
  std::vector<PointI> below;
  for (const PointI& p : vertices.convex) {
    if (p.y > centroid.y) below.push_back(p);
  }
  std::sort(below.begin(), below.end(), [&](PointI a, PointI b) {
    const double da = dist2(a), db = dist2(b);
    if (da != db) return da > db;
    return before(a, b);
  });
  if (!below.empty()) {
    out.feet.push_back(below[0]);
    for (std::size_t i = 1; i < below.size(); ++i) {
      if (std::abs(below[i].x - below[0].x) >= params.feet_separation * bw) {
        out.feet.push_back(below[i]);
        break;
      }
    }
  }

  // Hands: the most lateral vertex on each side beyond the reach threshold.
  std::optional<PointI> left, right;
  for (const PointI& p : vertices.convex) {
    const double dx = p.x - centroid.x;
    if (std::abs(dx) <= params.hand_reach * bh) continue;
    auto& side = dx < 0 ? left : right;
    if (!side || std::abs(dx) > std::abs(side->x - centroid.x) ||
        (std::abs(dx) == std::abs(side->x - centroid.x) && before(p, *side))) {
      side = p;
    }
  }
  if (left) out.hands.push_back(*left);
  if (right) out.hands.push_back(*right);
  return out;
}

}  // namespace hbpt::silhouette
