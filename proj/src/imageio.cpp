#include "hbpt/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace hbpt::imageio {

namespace fs = std::filesystem;

namespace {

std::uint8_t clamp_u8(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

std::vector<char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::decode_failure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header: magic then `count` integers, '#' comments allowed. Returns the
// offset of the first raster byte (one whitespace byte after the last field).
std::size_t parse_netpbm_header(const std::vector<char>& data, const char* magic, int count, int* fields,
                                const fs::path& path) {
  if (data.size() < 2 || data[0] != magic[0] || data[1] != magic[1]) {
    throw Error(ErrorKind::decode_failure, path.string() + ": expected " + magic + " header");
  }
  std::size_t pos = 2;
  for (int i = 0; i < count; ++i) {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    std::size_t digits = 0;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
      value = value * 10 + (data[pos] - '0');
      if (value > 1'000'000) throw Error(ErrorKind::decode_failure, path.string() + ": header value too large");
      ++pos;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorKind::decode_failure, path.string() + ": malformed header");
    fields[i] = static_cast<int>(value);
  }
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
    throw Error(ErrorKind::decode_failure, path.string() + ": malformed header");
  }
  return pos + 1;
}

Frame load_ppm(const fs::path& path) {
  const auto data = read_file(path);
  int f[3];
  const std::size_t off = parse_netpbm_header(data, "P6", 3, f, path);
  const int w = f[0], h = f[1], maxval = f[2];
  if (w <= 0 || h <= 0) throw Error(ErrorKind::decode_failure, path.string() + ": empty image");
  if (maxval != 255) throw Error(ErrorKind::decode_failure, path.string() + ": only maxval 255 is supported");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (data.size() < off + 3 * n) throw Error(ErrorKind::decode_failure, path.string() + ": truncated raster");
  std::vector<Rgb> rgb(n);
  std::memcpy(rgb.data(), data.data() + off, 3 * n);
  return Frame::from_rgb(w, h, std::move(rgb));
}

Frame load_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw Error(ErrorKind::decode_failure, path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<Rgb> rgb(static_cast<std::size_t>(w) * h);
  static_assert(sizeof(Rgb) == 3);
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::decode_failure, path.string() + ": " + msg);
  }
  return Frame::from_rgb(w, h, std::move(rgb));
}

std::optional<long long> trailing_number(const std::string& name) {
  const auto end = name.find_last_of("0123456789");
  if (end == std::string::npos) return std::nullopt;
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(name[begin - 1]))) --begin;
  const std::string digits = name.substr(begin, end - begin + 1);
  if (digits.size() > 18) return std::nullopt;
  return std::stoll(digits);
}

void write_bytes(const fs::path& path, const std::string& header, const void* data, std::size_t n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw Error(ErrorKind::io_failure, "write failed for " + path.string());
}

}  // namespace

Yuv convert_rgb_to_yuv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  const double u = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
  const double v = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
  return {clamp_u8(y), clamp_u8(u), clamp_u8(v)};
}

Rgb convert_yuv_to_rgb(std::uint8_t y, std::uint8_t u, std::uint8_t v) {
  const double cb = u - 128.0;
  const double cr = v - 128.0;
  return {clamp_u8(y + 1.402 * cr), clamp_u8(y - 0.344136 * cb - 0.714136 * cr), clamp_u8(y + 1.772 * cb)};
}

bool glob_match(std::string_view pattern, std::string_view name) {
  std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

Frame load_frame(const fs::path& path, int index) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  Frame f;
  if (ext == ".png") {
    f = load_png(path);
  } else if (ext == ".ppm") {
    f = load_ppm(path);
  } else {
    throw Error(ErrorKind::decode_failure, path.string() + ": unsupported extension");
  }
  f.index = index;
  f.source_path = path.string();
  return f;
}

std::vector<Frame> load_frame_sequence(const fs::path& directory, std::string_view pattern) {
  if (!fs::is_directory(directory)) {
    throw Error(ErrorKind::no_match, "not a directory: " + directory.string());
  }
  struct Entry {
    std::optional<long long> number;
    std::string name;
    fs::path path;
  };
  std::vector<Entry> entries;
  for (const auto& de : fs::directory_iterator(directory)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (glob_match(pattern, name)) entries.push_back({trailing_number(name), name, de.path()});
  }
  if (entries.empty()) {
    throw Error(ErrorKind::no_match, "no file in " + directory.string() + " matches '" + std::string(pattern) + "'");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    const long long na = a.number.value_or(-1);
    const long long nb = b.number.value_or(-1);
    if (na != nb) return na < nb;
    return a.name < b.name;
  });

  std::vector<Frame> frames;
  frames.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int index = entries[i].number ? static_cast<int>(*entries[i].number) : static_cast<int>(i);
    Frame f = load_frame(entries[i].path, index);
    if (!frames.empty() && (f.width != frames.front().width || f.height != frames.front().height)) {
      throw Error(ErrorKind::dimension_mismatch, entries[i].path.string() + " is " + std::to_string(f.width) + "x" +
                                                     std::to_string(f.height) + ", expected " +
                                                     std::to_string(frames.front().width) + "x" +
                                                     std::to_string(frames.front().height));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_ppm(const Frame& frame, const fs::path& path) {
  const std::string header = "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  if (frame.rgb.size() == frame.size()) {
    write_bytes(path, header, frame.rgb.data(), frame.rgb.size() * 3);
    return;
  }
  std::vector<Rgb> rgb(frame.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = convert_yuv_to_rgb(frame.yuv[i].y, frame.yuv[i].u, frame.yuv[i].v);
  write_bytes(path, header, rgb.data(), rgb.size() * 3);
}

DepthRaster load_depth_raster(const fs::path& path) {
  const auto data = read_file(path);
  int f[3];
  const std::size_t off = parse_netpbm_header(data, "P5", 3, f, path);
  DepthRaster d;
  d.width = f[0];
  d.height = f[1];
  if (f[2] != 65535) {
    throw Error(ErrorKind::decode_failure, path.string() + ": depth maxval must be 65535, got " + std::to_string(f[2]));
  }
  if (d.width <= 0 || d.height <= 0) throw Error(ErrorKind::decode_failure, path.string() + ": empty raster");
  const std::size_t n = static_cast<std::size_t>(d.width) * d.height;
  if (data.size() < off + 2 * n) throw Error(ErrorKind::decode_failure, path.string() + ": truncated raster");
  d.z.resize(n);
  const auto* raw = reinterpret_cast<const unsigned char*>(data.data() + off);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t v = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    d.z[i] = v > DepthRaster::max_range_mm ? 0 : v;
  }
  return d;
}

void write_depth_raster(const DepthRaster& depth, const fs::path& path) {
  std::vector<unsigned char> raw(depth.z.size() * 2);
  for (std::size_t i = 0; i < depth.z.size(); ++i) {
    raw[2 * i] = static_cast<unsigned char>(depth.z[i] >> 8);
    raw[2 * i + 1] = static_cast<unsigned char>(depth.z[i] & 0xff);
  }
  const std::string header = "P5\n" + std::to_string(depth.width) + " " + std::to_string(depth.height) + "\n65535\n";
  write_bytes(path, header, raw.data(), raw.size());
}

Mask load_pbm(const fs::path& path) {
  const auto data = read_file(path);
  int f[2];
  const std::size_t off = parse_netpbm_header(data, "P4", 2, f, path);
  Mask m(f[0], f[1]);
  const std::size_t stride = (static_cast<std::size_t>(m.width) + 7) / 8;
  if (data.size() < off + stride * m.height) throw Error(ErrorKind::decode_failure, path.string() + ": truncated");
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const auto byte = static_cast<unsigned char>(data[off + y * stride + x / 8]);
      m.set(x, y, (byte >> (7 - x % 8)) & 1);
    }
  }
  return m;
}

void write_pbm(const Mask& mask, const fs::path& path) {
  const std::size_t stride = (static_cast<std::size_t>(mask.width) + 7) / 8;
  std::vector<unsigned char> raw(stride * mask.height, 0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.get(x, y)) raw[y * stride + x / 8] |= static_cast<unsigned char>(0x80 >> (x % 8));
    }
  }
  const std::string header = "P4\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
  write_bytes(path, header, raw.data(), raw.size());
}

// ---------------------------------------------------------------------------
// Overlay rasterization

Rgb palette(Color c) {
  switch (c) {
    case Color::red: return {255, 0, 0};
    case Color::green: return {0, 255, 0};
    case Color::blue: return {0, 64, 255};
    case Color::yellow: return {255, 255, 0};
    case Color::cyan: return {0, 255, 255};
    case Color::magenta: return {255, 0, 255};
    case Color::white: return {255, 255, 255};
    case Color::orange: return {255, 128, 0};
  }
  return {255, 255, 255};
}

OverlayItem OverlayItem::ellipse(PointD c, double a, double b, double angle, Color color, std::string label) {
  return {Kind::ellipse, {c.x, c.y, a, b, angle}, std::move(label), color, true};
}

OverlayItem OverlayItem::rectangle(const Rect& r, Color color, std::string label) {
  return {Kind::rectangle,
          {static_cast<double>(r.x), static_cast<double>(r.y), static_cast<double>(r.w), static_cast<double>(r.h)},
          std::move(label), color, true};
}

OverlayItem OverlayItem::polyline(const std::vector<PointI>& pts, bool closed, Color color, std::string label) {
  OverlayItem item{Kind::polyline, {}, std::move(label), color, closed};
  for (const auto& p : pts) {
    item.geometry.push_back(p.x);
    item.geometry.push_back(p.y);
  }
  return item;
}

OverlayItem OverlayItem::text(PointI at, std::string label, Color color) {
  return {Kind::text, {static_cast<double>(at.x), static_cast<double>(at.y)}, std::move(label), color, false};
}

namespace {

class Canvas {
 public:
  Canvas(int w, int h, std::vector<Rgb> px) : w_(w), h_(h), px_(std::move(px)) {}

  void plot(int x, int y, Rgb c) {
    if (x >= 0 && y >= 0 && x < w_ && y < h_) px_[static_cast<std::size_t>(y) * w_ + x] = c;
  }

  void line(int x0, int y0, int x1, int y1, Rgb c) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      plot(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  std::vector<Rgb> take() { return std::move(px_); }

 private:
  int w_, h_;
  std::vector<Rgb> px_;
};

// 3x5 glyphs, rows top to bottom, '1' = ink.
const std::map<char, const char*>& glyphs() {
  static const std::map<char, const char*> g = {
      {'0', "111101101101111"}, {'1', "010110010010111"}, {'2', "111001111100111"}, {'3', "111001111001111"},
      {'4', "101101111001001"}, {'5', "111100111001111"}, {'6', "111100111101111"}, {'7', "111001001001001"},
      {'8', "111101111101111"}, {'9', "111101111001111"}, {'A', "010101111101101"}, {'B', "110101110101110"},
      {'C', "011100100100011"}, {'D', "110101101101110"}, {'E', "111100110100111"}, {'F', "111100110100100"},
      {'G', "011100101101011"}, {'H', "101101111101101"}, {'I', "111010010010111"}, {'J', "001001001101010"},
      {'K', "101101110101101"}, {'L', "100100100100111"}, {'M', "101111111101101"}, {'N', "110101101101101"},
      {'O', "010101101101010"}, {'P', "110101110100100"}, {'Q', "010101101110011"}, {'R', "110101110101101"},
      {'S', "011100010001110"}, {'T', "111010010010010"}, {'U', "101101101101111"}, {'V', "101101101101010"},
      {'W', "101101111111101"}, {'X', "101101010101101"}, {'Y', "101101010010010"}, {'Z', "111001010100111"},
      {'-', "000000111000000"}, {'.', "000000000000010"}, {':', "000010000010000"}, {'_', "000000000000111"},
      {'=', "000111000111000"}, {'/', "001001010100100"},
  };
  return g;
}

void draw_text(Canvas& canvas, int x, int y, const std::string& text, Rgb c) {
  for (char ch : text) {
    const auto it = glyphs().find(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (it != glyphs().end()) {
      for (int r = 0; r < 5; ++r) {
        for (int col = 0; col < 3; ++col) {
          if (it->second[r * 3 + col] == '1') canvas.plot(x + col, y + r, c);
        }
      }
    }
    x += 4;
  }
}

void draw_ellipse(Canvas& canvas, const std::vector<double>& g, Rgb c) {
  const double cx = g[0], cy = g[1], a = g[2], b = g[3], th = g[4];
  const double ct = std::cos(th), st = std::sin(th);
  // Ramanujan perimeter, sampled at ~2 points per pixel of arc.
  const double h = (a - b) * (a - b) / ((a + b) * (a + b) + 1e-12);
  const double perim = M_PI * (a + b) * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h)));
  const int n = std::max(16, static_cast<int>(std::ceil(perim * 2)));
  auto at = [&](int i) {
    const double t = 2.0 * M_PI * i / n;
    const double ex = a * std::cos(t), ey = b * std::sin(t);
    return PointI{static_cast<int>(std::lround(cx + ex * ct - ey * st)),
                  static_cast<int>(std::lround(cy + ex * st + ey * ct))};
  };
  PointI prev = at(0);
  for (int i = 1; i <= n; ++i) {
    const PointI cur = at(i % n);
    canvas.line(prev.x, prev.y, cur.x, cur.y, c);
    prev = cur;
  }
}

}  // namespace

std::vector<Rgb> render_overlays(const Frame& frame, const std::vector<OverlayItem>& overlays) {
  std::vector<Rgb> base = frame.rgb;
  if (base.size() != frame.size()) {
    base.resize(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) base[i] = convert_yuv_to_rgb(frame.yuv[i].y, frame.yuv[i].u, frame.yuv[i].v);
  }
  Canvas canvas(frame.width, frame.height, std::move(base));
  for (const auto& item : overlays) {
    const Rgb c = palette(item.color);
    const auto& g = item.geometry;
    switch (item.kind) {
      case OverlayItem::Kind::rectangle: {
        if (g.size() < 4) break;
        const int x0 = static_cast<int>(g[0]), y0 = static_cast<int>(g[1]);
        const int x1 = x0 + static_cast<int>(g[2]) - 1, y1 = y0 + static_cast<int>(g[3]) - 1;
        if (x1 < x0 || y1 < y0) break;
        canvas.line(x0, y0, x1, y0, c);
        canvas.line(x0, y1, x1, y1, c);
        canvas.line(x0, y0, x0, y1, c);
        canvas.line(x1, y0, x1, y1, c);
        break;
      }
      case OverlayItem::Kind::ellipse:
        if (g.size() >= 5) draw_ellipse(canvas, g, c);
        break;
      case OverlayItem::Kind::polyline: {
        const std::size_t n = g.size() / 2;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          canvas.line(static_cast<int>(g[2 * i]), static_cast<int>(g[2 * i + 1]), static_cast<int>(g[2 * i + 2]),
                      static_cast<int>(g[2 * i + 3]), c);
        }
        if (item.closed && n > 2) {
          canvas.line(static_cast<int>(g[2 * n - 2]), static_cast<int>(g[2 * n - 1]), static_cast<int>(g[0]),
                      static_cast<int>(g[1]), c);
        } else if (n == 1) {
          canvas.plot(static_cast<int>(g[0]), static_cast<int>(g[1]), c);
        }
        break;
      }
      case OverlayItem::Kind::text:
        if (g.size() >= 2) draw_text(canvas, static_cast<int>(g[0]), static_cast<int>(g[1]), item.label, c);
        break;
    }
  }
  return canvas.take();
}

void write_annotated_frame(const Frame& frame, const std::vector<OverlayItem>& overlays, const fs::path& path) {
  Frame out;
  out.width = frame.width;
  out.height = frame.height;
  out.rgb = (overlays.empty() && frame.rgb.size() == frame.size()) ? frame.rgb : render_overlays(frame, overlays);
  write_ppm(out, path);
}

}  // namespace hbpt::imageio
