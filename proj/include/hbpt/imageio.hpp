#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hbpt/types.hpp"

namespace hbpt::imageio {

/// BT.601 full-range transform, rounded to nearest and clamped to 0..255.
Yuv convert_rgb_to_yuv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
/// Inverse of convert_rgb_to_yuv (lossy by at most 2 levels per channel).
Rgb convert_yuv_to_rgb(std::uint8_t y, std::uint8_t u, std::uint8_t v);

/// Loads every file in `directory` whose name matches `pattern` (a glob where
/// `*` matches any run of characters). Files are ordered by the last run of
/// digits in their name, ties broken lexicographically; that number becomes
/// Frame::index (the position in the list when a name has no digits).
std::vector<Frame> load_frame_sequence(const std::filesystem::path& directory, std::string_view pattern);

/// Decodes one PPM (P6, maxval 255) or PNG file.
Frame load_frame(const std::filesystem::path& path, int index = 0);

void write_ppm(const Frame& frame, const std::filesystem::path& path);

/// 16-bit PGM (P5, maxval 65535, big-endian samples) in millimeters.
/// Values above 10000 are clamped to 0 (invalid).
DepthRaster load_depth_raster(const std::filesystem::path& path);
void write_depth_raster(const DepthRaster& depth, const std::filesystem::path& path);

/// PBM (P4) fixtures; a set bit is foreground.
Mask load_pbm(const std::filesystem::path& path);
void write_pbm(const Mask& mask, const std::filesystem::path& path);

bool glob_match(std::string_view pattern, std::string_view name);

enum class Color { red, green, blue, yellow, cyan, magenta, white, orange };
Rgb palette(Color c);

struct OverlayItem {
  enum class Kind { ellipse, rectangle, polyline, text };

  Kind kind = Kind::rectangle;
  // ellipse: cx, cy, a, b, angle(rad); rectangle: x, y, w, h;
  // polyline: x0, y0, x1, y1, ... (closed when `closed`); text: x, y (top-left).
  std::vector<double> geometry;
  std::string label;
  Color color = Color::yellow;
  bool closed = false;

  static OverlayItem ellipse(PointD c, double a, double b, double angle, Color color, std::string label = {});
  static OverlayItem rectangle(const Rect& r, Color color, std::string label = {});
  static OverlayItem polyline(const std::vector<PointI>& pts, bool closed, Color color, std::string label = {});
  static OverlayItem text(PointI at, std::string label, Color color);
};

/// Rasterizes overlays onto a copy of frame.rgb (clipped to the frame).
std::vector<Rgb> render_overlays(const Frame& frame, const std::vector<OverlayItem>& overlays);

/// Writes a PPM (P6) of the frame with overlays drawn in the fixed palette.
void write_annotated_frame(const Frame& frame, const std::vector<OverlayItem>& overlays,
                           const std::filesystem::path& path);

}  // namespace hbpt::imageio
