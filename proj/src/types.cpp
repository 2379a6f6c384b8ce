#include "hbpt/types.hpp"

#include "hbpt/imageio.hpp"

namespace hbpt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_match: return "no-match";
    case ErrorKind::decode_failure: return "decode-failure";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::io_failure: return "io-failure";
    case ErrorKind::too_few_frames: return "too-few-frames";
    case ErrorKind::empty_cluster: return "empty-cluster";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::empty_mask: return "empty-mask";
    case ErrorKind::empty_rect: return "empty-rect";
    case ErrorKind::empty_silhouette: return "empty-silhouette";
    case ErrorKind::degenerate_contour: return "degenerate-contour";
    case ErrorKind::degenerate_width: return "degenerate-width";
    case ErrorKind::unnormalized_hist: return "unnormalized-hist";
    case ErrorKind::invalid_params: return "invalid-params";
    case ErrorKind::bad_config: return "bad-config";
  }
  return "error";
}

Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

double iou(const Rect& a, const Rect& b) {
  const long long inter = intersect(a, b).area();
  const long long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

Rect clamp_into(const Rect& r, int width, int height) {
  Rect out = r;
  if (out.w <= width) out.x = std::clamp(out.x, 0, width - out.w);
  if (out.h <= height) out.y = std::clamp(out.y, 0, height - out.h);
  return intersect(out, Rect{0, 0, width, height});
}

Rect rect_around(PointD c, int w, int h) {
  const int x = static_cast<int>(std::lround(c.x - (w - 1) / 2.0));
  const int y = static_cast<int>(std::lround(c.y - (h - 1) / 2.0));
  return {x, y, w, h};
}

double distance_to_rect(PointD p, const Rect& r) {
  const double dx = std::max({static_cast<double>(r.x) - p.x, 0.0, p.x - (r.right() - 1)});
  const double dy = std::max({static_cast<double>(r.y) - p.y, 0.0, p.y - (r.bottom() - 1)});
  return std::hypot(dx, dy);
}

Frame::Frame(int w, int h)
    : width(w), height(h), yuv(static_cast<std::size_t>(w) * h) {}

Frame Frame::from_rgb(int w, int h, std::vector<Rgb> rgb, int index) {
  Frame f;
  f.index = index;
  f.width = w;
  f.height = h;
  f.rgb = std::move(rgb);
  f.yuv.resize(f.rgb.size());
  for (std::size_t i = 0; i < f.rgb.size(); ++i) {
    const Rgb& p = f.rgb[i];
    f.yuv[i] = imageio::convert_rgb_to_yuv(p.r, p.g, p.b);
  }
  return f;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

bool Mask::any() const {
  return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

double mask_iou(const Mask& a, const Mask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::dimension_mismatch, "mask_iou operands differ in size");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool pa = a.bits[i] != 0;
    const bool pb = b.bits[i] != 0;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace hbpt
