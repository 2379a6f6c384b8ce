#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbpt {

enum class ErrorKind {
  no_match,
  decode_failure,
  dimension_mismatch,
  io_failure,
  too_few_frames,
  empty_cluster,
  empty_input,
  empty_mask,
  empty_rect,
  empty_silhouette,
  degenerate_contour,
  degenerate_width,
  unnormalized_hist,
  invalid_params,
  bad_config,
};

const char* to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct PointI {
  int x = 0;
  int y = 0;
  friend bool operator==(const PointI&, const PointI&) = default;
  friend auto operator<=>(const PointI&, const PointI&) = default;
};

struct PointD {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointD&, const PointD&) = default;
};

inline double distance(PointD a, PointD b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline PointD to_double(PointI p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

// Half-open pixel rectangle: columns [x, x+w), rows [y, y+h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;

  bool empty() const { return w <= 0 || h <= 0; }
  long long area() const { return empty() ? 0 : static_cast<long long>(w) * h; }
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
  PointD center() const { return {x + (w - 1) / 2.0, y + (h - 1) / 2.0}; }
};

Rect intersect(const Rect& a, const Rect& b);
double iou(const Rect& a, const Rect& b);
// Shifts r so it lies inside [0,width)x[0,height) when it fits; otherwise intersects.
Rect clamp_into(const Rect& r, int width, int height);
// Rectangle of size w x h whose center() is as close as possible to c.
Rect rect_around(PointD c, int w, int h);
// Euclidean distance from p to the closed pixel area of r (0 inside).
double distance_to_rect(PointD p, const Rect& r);

struct Yuv {
  std::uint8_t y = 0;
  std::uint8_t u = 0;
  std::uint8_t v = 0;
  friend bool operator==(const Yuv&, const Yuv&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// A color frame. yuv is the working representation; rgb keeps the decoded
// source bytes so unannotated frames can be written back unchanged.
struct Frame {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<Yuv> yuv;
  std::vector<Rgb> rgb;
  std::string source_path;

  Frame() = default;
  // yuv-only frame; rgb stays empty until set.
  Frame(int w, int h);
  // Builds yuv from rgb.
  static Frame from_rgb(int w, int h, std::vector<Rgb> rgb, int index = 0);

  const Yuv& at(int x, int y) const { return yuv[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  std::size_t size() const { return static_cast<std::size_t>(width) * height; }
};

// Millimeter depth raster; 0 marks an invalid return.
struct DepthRaster {
  static constexpr std::uint16_t max_range_mm = 10000;

  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> z;

  std::uint16_t at(int x, int y) const { return z[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

// Binary raster. Pixels outside the frame read as background.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool get(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height && bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  bool any() const;
  friend bool operator==(const Mask&, const Mask&) = default;
};

using ForegroundMask = Mask;

// Intersection-over-union of two equally sized masks (1 when both are empty).
double mask_iou(const Mask& a, const Mask& b);

}  // namespace hbpt
