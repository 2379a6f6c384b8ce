#include "hbpt/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace hbpt::maskops {

namespace {

// Directions in counter-clockwise screen order (y down): E, NE, N, NW, W, SW, S, SE.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(PointI from, PointI to) {
  const int dx = to.x - from.x, dy = to.y - from.y;
  for (int d = 0; d < 8; ++d) {
    if (kDx[d] == dx && kDy[d] == dy) return d;
  }
  return -1;
}

// One separable pass of a box filter on a binary raster.
// dilate: any set pixel in the window; erode: every window pixel set.
void box_pass(const std::vector<std::uint8_t>& in, std::vector<std::uint8_t>& out, int w, int h, int radius,
              bool horizontal, bool dilate) {
  const int len = horizontal ? w : h;
  const int lines = horizontal ? h : w;
  std::vector<int> prefix(len + 1);
  const int window = 2 * radius + 1;
  for (int line = 0; line < lines; ++line) {
    auto at = [&](int i) -> std::size_t {
      return horizontal ? static_cast<std::size_t>(line) * w + i : static_cast<std::size_t>(i) * w + line;
    };
    prefix[0] = 0;
    for (int i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + (in[at(i)] ? 1 : 0);
    for (int i = 0; i < len; ++i) {
      const int lo = std::max(0, i - radius);
      const int hi = std::min(len, i + radius + 1);
      const int ones = prefix[hi] - prefix[lo];
      out[at(i)] = dilate ? (ones > 0) : (ones == window);
    }
  }
}

}  // namespace

Mask morph(const Mask& mask, MorphOp op, StructuringElement se, int iterations) {
  if (iterations < 1) throw Error(ErrorKind::invalid_params, "morph iterations must be >= 1");
  if (se.width < 1 || se.height < 1 || se.width % 2 == 0 || se.height % 2 == 0) {
    throw Error(ErrorKind::invalid_params, "structuring element sides must be odd and positive");
  }
  const bool dil = op == MorphOp::dilate;
  Mask cur = mask;
  std::vector<std::uint8_t> tmp(mask.bits.size());
  for (int it = 0; it < iterations; ++it) {
    box_pass(cur.bits, tmp, mask.width, mask.height, se.width / 2, true, dil);
    box_pass(tmp, cur.bits, mask.width, mask.height, se.height / 2, false, dil);
  }
  return cur;
}

Mask close(const Mask& m, StructuringElement se, int iterations) {
  const int px = (se.width / 2) * iterations, py = (se.height / 2) * iterations;
  Mask padded(m.width + 2 * px, m.height + 2 * py);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) padded.set(x + px, y + py, m.get(x, y));
  }
  const Mask closed = erode(dilate(padded, se, iterations), se, iterations);
  Mask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) out.set(x, y, closed.get(x + px, y + py));
  }
  return out;
}

std::optional<int> LabeledComponents::largest() const {
  if (stats.empty()) return std::nullopt;
  int best = 0;
  for (int i = 1; i < count(); ++i) {
    if (stats[i].area > stats[best].area) best = i;
  }
  return best;
}

Mask LabeledComponents::component_mask(int label) const {
  Mask m(width, height);
  for (std::size_t i = 0; i < labels.size(); ++i) m.bits[i] = labels[i] == label ? 1 : 0;
  return m;
}

std::vector<PointI> LabeledComponents::component_pixels(int label) const {
  std::vector<PointI> px;
  if (label >= 1 && label <= count()) px.reserve(static_cast<std::size_t>(stats[label - 1].area));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (label_at(x, y) == label) px.push_back({x, y});
    }
  }
  return px;
}

LabeledComponents connected_components(const Mask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8) throw Error(ErrorKind::invalid_params, "connectivity must be 4 or 8");
  const int w = mask.width, h = mask.height;
  LabeledComponents out;
  out.width = w;
  out.height = h;
  out.labels.assign(mask.bits.size(), 0);

  // First pass: provisional labels with union-find over equivalences.
  std::vector<int> parent{0};
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.get(x, y)) continue;
      int neigh[4];
      int n = 0;
      auto consider = [&](int nx, int ny) {
        if (mask.get(nx, ny)) neigh[n++] = out.labels[static_cast<std::size_t>(ny) * w + nx];
      };
      consider(x - 1, y);
      consider(x, y - 1);
      if (connectivity == 8) {
        consider(x - 1, y - 1);
        consider(x + 1, y - 1);
      }
      int label;
      if (n == 0) {
        label = static_cast<int>(parent.size());
        parent.push_back(label);
      } else {
        label = *std::min_element(neigh, neigh + n);
        for (int k = 0; k < n; ++k) unite(label, neigh[k]);
      }
      out.labels[static_cast<std::size_t>(y) * w + x] = label;
    }
  }

  // Second pass: contiguous labels in raster order of first appearance, plus stats.
  std::vector<int> remap(parent.size(), 0);
  struct Acc {
    long long area = 0, sx = 0, sy = 0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  };
  std::vector<Acc> acc;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int& l = out.labels[static_cast<std::size_t>(y) * w + x];
      if (l == 0) continue;
      const int root = find(l);
      if (remap[root] == 0) {
        acc.push_back({0, 0, 0, x, y, x, y});
        remap[root] = static_cast<int>(acc.size());
      }
      l = remap[root];
      Acc& a = acc[l - 1];
      ++a.area;
      a.sx += x;
      a.sy += y;
      a.x0 = std::min(a.x0, x);
      a.x1 = std::max(a.x1, x);
      a.y0 = std::min(a.y0, y);
      a.y1 = std::max(a.y1, y);
    }
  }
  out.stats.reserve(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const Acc& a = acc[i];
    out.stats.push_back({static_cast<int>(i + 1), a.area, Rect{a.x0, a.y0, a.x1 - a.x0 + 1, a.y1 - a.y0 + 1},
                         PointD{static_cast<double>(a.sx) / a.area, static_cast<double>(a.sy) / a.area}});
  }
  return out;
}

std::vector<Contour> extract_contours(const Mask& mask) {
  const int w = mask.width + 2, h = mask.height + 2;
  // Zero-padded working raster: 1 = unvisited foreground, +/-nbd = border marks.
  std::vector<int> img(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.get(x, y)) img[static_cast<std::size_t>(y + 1) * w + x + 1] = 1;
    }
  }
  auto at = [&](int x, int y) -> int& { return img[static_cast<std::size_t>(y) * w + x]; };

  struct Border {
    bool hole;
    int parent;  // border number; 1 is the frame
  };
  std::vector<Border> borders{{true, 0}, {true, 0}};  // indices 0 (unused) and 1 (frame)
  std::vector<Contour> contours;

  int nbd = 1;
  for (int y = 1; y < h - 1; ++y) {
    int lnbd = 1;
    for (int x = 1; x < w - 1; ++x) {
      const int f = at(x, y);
      if (f == 0) continue;
      bool hole;
      int start_dir;
      if (f == 1 && at(x - 1, y) == 0) {
        hole = false;
        start_dir = 4;
      } else if (f >= 1 && at(x + 1, y) == 0) {
        hole = true;
        start_dir = 0;
        if (f > 1) lnbd = f;
      } else {
        if (f != 1) lnbd = std::abs(f);
        continue;
      }

      ++nbd;
      const Border& prev = borders[lnbd];
      int parent;
      if (hole) {
        parent = prev.hole ? prev.parent : lnbd;
      } else {
        parent = prev.hole ? lnbd : prev.parent;
      }
      borders.push_back({hole, parent});

      Contour c;
      c.level = hole ? Contour::Level::hole : Contour::Level::outer;
      const PointI p0{x, y};

      // Clockwise search for the first foreground neighbour.
      int s = start_dir;
      PointI p1{};
      bool found = false;
      do {
        s = (s + 7) & 7;
        p1 = {x + kDx[s], y + kDy[s]};
        if (at(p1.x, p1.y) != 0) {
          found = true;
          break;
        }
      } while (s != start_dir);

      if (!found) {
        at(x, y) = -nbd;
        c.points.push_back({x - 1, y - 1});
      } else {
        PointI p3 = p0;
        for (;;) {
          const int s_end = s;
          PointI p4{};
          int k = s;
          bool east_zero = false;
          for (;;) {
            ++k;
            const int d = k & 7;
            p4 = {p3.x + kDx[d], p3.y + kDy[d]};
            if (at(p4.x, p4.y) != 0) break;
            if (d == 0) east_zero = true;
          }
          s = k & 7;
          (void)s_end;
          if (east_zero) {
            at(p3.x, p3.y) = -nbd;
          } else if (at(p3.x, p3.y) == 1) {
            at(p3.x, p3.y) = nbd;
          }
          c.points.push_back({p3.x - 1, p3.y - 1});
          if (p4 == p0 && p3 == p1) break;
          p3 = p4;
          s = (s + 4) & 7;
        }
      }
      contours.push_back(std::move(c));

      const int fv = at(x, y);
      if (fv != 1) lnbd = std::abs(fv);
    }
  }

  // Flatten: outer borders are top level; holes hang off their outer border.
  for (std::size_t i = 0; i < contours.size(); ++i) {
    const int number = static_cast<int>(i) + 2;
    if (borders[number].hole) {
      const int p = borders[number].parent;
      if (p >= 2) contours[i].parent = p - 2;
    }
  }
  return contours;
}

std::vector<PointI> approximate_contour(const Contour& contour) {
  const auto& pts = contour.points;
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<int> dir(n);
  for (std::size_t i = 0; i < n; ++i) dir[i] = direction_of(pts[i], pts[(i + 1) % n]);
  std::vector<PointI> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (dir[(i + n - 1) % n] != dir[i]) out.push_back(pts[i]);
  }
  if (out.empty()) out.push_back(pts.front());
  return out;
}

namespace {

std::int64_t cross(PointI o, PointI a, PointI b) {
  return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) - static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

std::int64_t dist2(PointI a, PointI b) {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::vector<PointI> convex_hull(std::span<const PointI> input) {
  if (input.empty()) throw Error(ErrorKind::empty_input, "convex_hull of no points");
  std::vector<PointI> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    std::sort(pts.begin(), pts.end(), [](PointI a, PointI b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
    return pts;
  }
  auto pivot_it = std::min_element(pts.begin(), pts.end(),
                                   [](PointI a, PointI b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  std::iter_swap(pts.begin(), pivot_it);
  const PointI pivot = pts.front();
  std::sort(pts.begin() + 1, pts.end(), [&](PointI a, PointI b) {
    const std::int64_t c = cross(pivot, a, b);
    if (c != 0) return c > 0;
    return dist2(pivot, a) < dist2(pivot, b);
  });

  std::vector<PointI> hull;
  hull.reserve(pts.size());
  for (const PointI& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

Mask fill_polygon(std::span<const PointI> v, int width, int height) {
  Mask out(width, height);
  const std::size_t n = v.size();
  if (n == 0) return out;
  auto plot = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < width && y < height) out.set(x, y);
  };
  int y_min = v[0].y, y_max = v[0].y;
  for (const auto& p : v) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  // Interior: even-odd crossings of each row through the pixel centers, with
  // half-open edges so shared vertices count once.
  std::vector<double> xs;
  for (int y = std::max(y_min, 0); y <= std::min(y_max, height - 1); ++y) {
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const PointI a = v[i], b = v[(i + 1) % n];
      if (a.y == b.y) continue;
      const PointI lo = a.y < b.y ? a : b;
      const PointI hi = a.y < b.y ? b : a;
      if (y < lo.y || y >= hi.y) continue;
      xs.push_back(lo.x + static_cast<double>(y - lo.y) * (hi.x - lo.x) / (hi.y - lo.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int x0 = std::max(0, static_cast<int>(std::ceil(xs[k])));
      const int x1 = std::min(width - 1, static_cast<int>(std::floor(xs[k + 1])));
      for (int x = x0; x <= x1; ++x) out.set(x, y);
    }
  }
  // Boundary: the polygon's segments are axis-aligned or diagonal for traced
  // contours, but general segments are rasterized with the same stepping.
  for (std::size_t i = 0; i < n; ++i) {
    PointI a = v[i];
    const PointI b = v[(i + 1) % n];
    const int steps = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
    for (int k = 0; k <= steps; ++k) {
      const double t = steps == 0 ? 0.0 : static_cast<double>(k) / steps;
      plot(static_cast<int>(std::lround(a.x + t * (b.x - a.x))), static_cast<int>(std::lround(a.y + t * (b.y - a.y))));
    }
  }
  return out;
}

Mask refine_mask(const Mask& mask, long long min_area, const RefineParams& params) {
  const Mask opened = dilate(close(mask, params.se, params.iterations), params.se, params.iterations);
  Mask out(mask.width, mask.height);
  for (const Contour& c : extract_contours(opened)) {
    if (c.level != Contour::Level::outer) continue;
    const std::vector<PointI> poly = approximate_contour(c);
    const Mask filled = fill_polygon(poly, mask.width, mask.height);
    if (static_cast<long long>(filled.count()) < min_area) continue;
    for (std::size_t i = 0; i < filled.bits.size(); ++i) out.bits[i] |= filled.bits[i];
  }
  return out;
}

}  // namespace hbpt::maskops
