#include "hbpt/histogram.hpp"

#include <cmath>

namespace hbpt::hist {

namespace {

void require_normalized(const Hist16& h, const char* what) {
  if (!is_normalized(h)) throw Error(ErrorKind::unnormalized_hist, std::string(what) + ": histogram does not sum to 1");
}

Hist16 normalize(const std::array<long long, 16>& counts, long long n) {
  Hist16 h{};
  for (int i = 0; i < 16; ++i) h[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return h;
}

}  // namespace

Hist16 color_hist16(const Frame& frame, const Rect& rect) {
  const Rect r = intersect(rect, Rect{0, 0, frame.width, frame.height});
  if (r.empty()) throw Error(ErrorKind::empty_rect, "histogram rectangle is empty inside the frame");
  std::array<long long, 16> counts{};
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      const Yuv& p = frame.at(x, y);
      ++counts[uv_bin(p.u, p.v)];
    }
  }
  return normalize(counts, r.area());
}

Hist16 hist_from_pixels(const Frame& frame, std::span<const PointI> pixels) {
  if (pixels.empty()) throw Error(ErrorKind::empty_cluster, "histogram of no pixels");
  std::array<long long, 16> counts{};
  for (const PointI& p : pixels) {
    const Yuv& c = frame.at(p.x, p.y);
    ++counts[uv_bin(c.u, c.v)];
  }
  return normalize(counts, static_cast<long long>(pixels.size()));
}

bool is_normalized(const Hist16& h, double tol) {
  double s = 0.0;
  for (double v : h) {
    if (!(v >= 0.0)) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= tol;
}

double similarity(const Hist16& h1, const Hist16& h2) {
  require_normalized(h1, "similarity");
  require_normalized(h2, "similarity");
  if (h1 == h2) return 1.0;
  double bc = 0.0;
  for (int i = 0; i < 16; ++i) bc += std::sqrt(h1[i] * h2[i]);
  return std::min(bc, 1.0);
}

double hist_distance(const Hist16& h1, const Hist16& h2) { return std::sqrt(1.0 - similarity(h1, h2)); }

WeightImage back_project(const Frame& frame, const Hist16& h) {
  require_normalized(h, "back_project");
  WeightImage out{frame.width, frame.height, std::vector<double>(frame.size())};
  for (std::size_t i = 0; i < frame.size(); ++i) out.w[i] = h[uv_bin(frame.yuv[i].u, frame.yuv[i].v)];
  return out;
}

}  // namespace hbpt::hist
