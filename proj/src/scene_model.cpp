#include "hbpt/scene_model.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace hbpt::scene {

namespace {

constexpr char kMagic[4] = {'H', 'B', 'S', 'M'};
constexpr std::uint32_t kVersion = 1;

void check_dims(const SceneModel& model, int w, int h, const char* what) {
  if (model.width != w || model.height != h) {
    throw Error(ErrorKind::dimension_mismatch, std::string(what) + ": " + std::to_string(w) + "x" + std::to_string(h) +
                                                   " against a " + std::to_string(model.width) + "x" +
                                                   std::to_string(model.height) + " scene");
  }
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f32(std::vector<unsigned char>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(const std::vector<char>& in, std::size_t& pos) {
  if (pos + 4 > in.size()) throw Error(ErrorKind::decode_failure, "scene file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 4;
  return v;
}

float get_f32(const std::vector<char>& in, std::size_t& pos) { return std::bit_cast<float>(get_u32(in, pos)); }

}  // namespace

SceneModel learn_scene(std::span<const Frame> frames, float var_floor) {
  if (frames.size() < 2) {
    throw Error(ErrorKind::too_few_frames, "learn_scene needs at least 2 frames, got " + std::to_string(frames.size()));
  }
  const int w = frames.front().width;
  const int h = frames.front().height;
  for (const auto& f : frames) {
    if (f.width != w || f.height != h) {
      throw Error(ErrorKind::dimension_mismatch, "frame " + std::to_string(f.index) + " differs in size");
    }
  }
  const std::size_t n_px = static_cast<std::size_t>(w) * h;
  // Integer moments keep the result exact up to the final division.
  std::vector<std::int64_t> sum(n_px * 3, 0), sum_sq(n_px * 3, 0);
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < n_px; ++i) {
      const Yuv& p = f.yuv[i];
      const std::int64_t c[3] = {p.y, p.u, p.v};
      for (int k = 0; k < 3; ++k) {
        sum[3 * i + k] += c[k];
        sum_sq[3 * i + k] += c[k] * c[k];
      }
    }
  }
  SceneModel m;
  m.width = w;
  m.height = h;
  m.frames_seen = static_cast<int>(frames.size());
  m.var_floor = var_floor;
  m.mean.resize(n_px * 3);
  m.var.resize(n_px * 3);
  const auto n = static_cast<std::int64_t>(frames.size());
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t j = 0; j < n_px * 3; ++j) {
    m.mean[j] = static_cast<float>(static_cast<double>(sum[j]) / static_cast<double>(n));
    const std::int64_t num = n * sum_sq[j] - sum[j] * sum[j];
    m.var[j] = std::max(static_cast<float>(static_cast<double>(num) / n2), var_floor);
  }
  return m;
}

ForegroundMask detect_foreground(const SceneModel& model, const Frame& frame, double tau) {
  check_dims(model, frame.width, frame.height, "detect_foreground");
  ForegroundMask fg(frame.width, frame.height);
  const float tau2 = static_cast<float>(tau * tau);
  const std::size_t n_px = frame.size();
  for (std::size_t i = 0; i < n_px; ++i) {
    const Yuv& p = frame.yuv[i];
    const float* mu = &model.mean[3 * i];
    const float* var = &model.var[3 * i];
    const float dy = p.y - mu[0], du = p.u - mu[1], dv = p.v - mu[2];
    const float d2 = dy * dy / var[0] + du * du / var[1] + dv * dv / var[2];
    fg.bits[i] = d2 > tau2 ? 1 : 0;
  }
  return fg;
}

DepthRaster learn_depth(std::span<const DepthRaster> frames) {
  if (frames.empty()) throw Error(ErrorKind::too_few_frames, "learn_depth needs at least one raster");
  DepthRaster out;
  out.width = frames[0].width;
  out.height = frames[0].height;
  out.z.assign(frames[0].z.size(), 0);
  for (const auto& d : frames) {
    if (d.width != out.width || d.height != out.height) {
      throw Error(ErrorKind::dimension_mismatch, "learn_depth rasters differ in size");
    }
  }
  std::vector<std::uint16_t> v;
  for (std::size_t i = 0; i < out.z.size(); ++i) {
    v.clear();
    for (const auto& d : frames) {
      if (d.z[i] != 0) v.push_back(d.z[i]);
    }
    if (v.empty()) continue;
    // Lower median keeps the result an observed value.
    const auto mid = v.begin() + (v.size() - 1) / 2;
    std::nth_element(v.begin(), mid, v.end());
    out.z[i] = *mid;
  }
  return out;
}

void gate_revealed(ForegroundMask& fg, const DepthRaster& learned, const DepthRaster& depth, double margin_mm) {
  if (learned.width != fg.width || learned.height != fg.height || depth.width != fg.width ||
      depth.height != fg.height) {
    throw Error(ErrorKind::dimension_mismatch, "gate_revealed inputs differ in size");
  }
  for (std::size_t i = 0; i < fg.bits.size(); ++i) {
    if (fg.bits[i] && learned.z[i] != 0 && depth.z[i] != 0 && depth.z[i] > learned.z[i] + margin_mm) fg.bits[i] = 0;
  }
}

void update_scene(SceneModel& model, const Frame& frame, const ForegroundMask& fg, double alpha) {
  check_dims(model, frame.width, frame.height, "update_scene frame");
  check_dims(model, fg.width, fg.height, "update_scene mask");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_params, "alpha must lie in (0,1)");
  const float a = static_cast<float>(alpha);
  const std::size_t n_px = frame.size();
  for (std::size_t i = 0; i < n_px; ++i) {
    if (fg.bits[i]) continue;
    const Yuv& p = frame.yuv[i];
    const float x[3] = {static_cast<float>(p.y), static_cast<float>(p.u), static_cast<float>(p.v)};
    for (int k = 0; k < 3; ++k) {
      float& mu = model.mean[3 * i + k];
      float& var = model.var[3 * i + k];
      mu += a * (x[k] - mu);
      const float d = x[k] - mu;
      var = std::max(var + a * (d * d - var), model.var_floor);
    }
  }
  ++model.frames_seen;
}

void save_scene(const SceneModel& model, const std::filesystem::path& path) {
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(model.width));
  put_u32(out, static_cast<std::uint32_t>(model.height));
  put_u32(out, static_cast<std::uint32_t>(model.frames_seen));
  put_f32(out, model.var_floor);
  out.reserve(out.size() + 8 * model.mean.size());
  for (float f : model.mean) put_f32(out, f);
  for (float f : model.var) put_f32(out, f);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorKind::io_failure, "write failed for " + path.string());
}

SceneModel load_scene(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::decode_failure, "cannot open " + path.string());
  const std::vector<char> in{std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
  if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw Error(ErrorKind::decode_failure, path.string() + ": not a scene model file");
  }
  std::size_t pos = 4;
  if (get_u32(in, pos) != kVersion) throw Error(ErrorKind::decode_failure, path.string() + ": unknown version");
  SceneModel m;
  m.width = static_cast<int>(get_u32(in, pos));
  m.height = static_cast<int>(get_u32(in, pos));
  m.frames_seen = static_cast<int>(get_u32(in, pos));
  m.var_floor = get_f32(in, pos);
  const std::size_t n = static_cast<std::size_t>(m.width) * m.height * 3;
  if (in.size() != pos + 8 * n) throw Error(ErrorKind::decode_failure, path.string() + ": plane size mismatch");
  m.mean.resize(n);
  m.var.resize(n);
  for (auto& f : m.mean) f = get_f32(in, pos);
  for (auto& f : m.var) f = get_f32(in, pos);
  return m;
}

}  // namespace hbpt::scene
