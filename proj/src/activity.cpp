#include "hbpt/activity.hpp"

#include <algorithm>
#include <cmath>

#include "hbpt/tracker.hpp"

namespace hbpt::activity {

namespace {

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<float> v;

  float at(int x, int y) const {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return v[static_cast<std::size_t>(y) * w + x];
  }
  float sample(double x, double y) const {
    const double fx = std::floor(x), fy = std::floor(y);
    const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
    const float ax = static_cast<float>(x - fx), ay = static_cast<float>(y - fy);
    const float top = at(x0, y0) * (1 - ax) + at(x0 + 1, y0) * ax;
    const float bot = at(x0, y0 + 1) * (1 - ax) + at(x0 + 1, y0 + 1) * ax;
    return top * (1 - ay) + bot * ay;
  }
};

Plane luma(const Frame& f) {
  Plane p{f.width, f.height, std::vector<float>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) p.v[i] = f.yuv[i].y / 255.0f;
  return p;
}

// [1 2 1]/4 smoothing in both directions, then every other sample.
Plane downsample(const Plane& src) {
  Plane out{(src.w + 1) / 2, (src.h + 1) / 2, {}};
  out.v.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    for (int x = 0; x < out.w; ++x) {
      const int sx = 2 * x, sy = 2 * y;
      float acc = 0.0f;
      for (int dy = -1; dy <= 1; ++dy) {
        const float wy = dy == 0 ? 0.5f : 0.25f;
        for (int dx = -1; dx <= 1; ++dx) {
          const float wx = dx == 0 ? 0.5f : 0.25f;
          acc += wx * wy * src.at(sx + dx, sy + dy);
        }
      }
      out.v[static_cast<std::size_t>(y) * out.w + x] = acc;
    }
  }
  return out;
}

std::vector<Plane> pyramid(const Frame& f, int levels) {
  std::vector<Plane> pyr{luma(f)};
  for (int l = 1; l < levels; ++l) pyr.push_back(downsample(pyr.back()));
  return pyr;
}

struct Gradients {
  Plane gx, gy;
};

Gradients gradients(const Plane& p) {
  Gradients g{{p.w, p.h, std::vector<float>(p.v.size())}, {p.w, p.h, std::vector<float>(p.v.size())}};
  for (int y = 0; y < p.h; ++y) {
    for (int x = 0; x < p.w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * p.w + x;
      g.gx.v[i] = 0.5f * (p.at(x + 1, y) - p.at(x - 1, y));
      g.gy.v[i] = 0.5f * (p.at(x, y + 1) - p.at(x, y - 1));
    }
  }
  return g;
}

// Gradients are taken on Y/255; min_eig reports the window-averaged tensor of
// 8-bit gradients divided by 1024, the scale OpenCV's threshold uses.
constexpr double kEigScale = 255.0 * 255.0 / 1024.0;

struct Tensor {
  double xx = 0, xy = 0, yy = 0;
  double min_eig(int n) const {
    const double tr = xx + yy, d = std::sqrt((xx - yy) * (xx - yy) + 4 * xy * xy);
    return 0.5 * (tr - d) / n * kEigScale;
  }
};

Tensor tensor_at(const Gradients& g, PointD c, int half) {
  Tensor t;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double ix = g.gx.sample(c.x + dx, c.y + dy), iy = g.gy.sample(c.x + dx, c.y + dy);
      t.xx += ix * ix;
      t.xy += ix * iy;
      t.yy += iy * iy;
    }
  }
  return t;
}

double median(std::vector<double>& v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  if (v.size() % 2) return v[m];
  const double hi = v[m];
  return 0.5 * (*std::max_element(v.begin(), v.begin() + m) + hi);
}

}  // namespace

BoxRegion make_box_region(const Frame& ref_frame, const Rect& rect) {
  const Rect r = intersect(rect, Rect{0, 0, ref_frame.width, ref_frame.height});
  if (r.empty() || r != rect) throw Error(ErrorKind::empty_rect, "box rectangle must lie inside the frame");
  BoxRegion box;
  box.rect = rect;
  box.tracked_rect = rect;
  box.ref_hist = hist::color_hist16(ref_frame, rect);
  return box;
}

BoxRegion track_box_region(const BoxRegion& box, const Frame& frame, int max_iter, double eps) {
  BoxRegion out = box;
  const auto weights = hist::back_project(frame, box.ref_hist);
  const auto ms = tracker::mean_shift(weights, box.tracked_rect, max_iter, eps);
  out.lost = ms.weight_sums.empty();
  if (!out.lost) out.tracked_rect = ms.window;
  return out;
}

FlowResult lk_flow(const Frame& prev, const Frame& next, std::span<const PointD> points, const LkParams& params) {
  if (prev.width != next.width || prev.height != next.height) {
    throw Error(ErrorKind::dimension_mismatch, "lk_flow frames differ in size");
  }
  if (params.window < 3 || params.window % 2 == 0 || params.levels < 1 || params.iterations < 1) {
    throw Error(ErrorKind::invalid_params, "lk_flow needs an odd window >= 3, levels >= 1, iterations >= 1");
  }
  const int levels = params.levels;
  const auto P = pyramid(prev, levels);
  const auto N = pyramid(next, levels);
  std::vector<Gradients> G;
  for (const auto& p : P) G.push_back(gradients(p));
  const int half = params.window / 2;
  const int n_win = params.window * params.window;

  FlowResult res;
  for (const PointD& p0 : points) {
    bool alive = p0.x >= half && p0.y >= half && p0.x <= prev.width - 1 - half && p0.y <= prev.height - 1 - half;
    PointD guess{0, 0};
    PointD d{0, 0};
    for (int l = levels - 1; l >= 0 && alive; --l) {
      const double s = std::ldexp(1.0, -l);
      const PointD c{p0.x * s, p0.y * s};
      const Tensor t = tensor_at(G[l], c, half);
      const double det = t.xx * t.yy - t.xy * t.xy;
      if (l == 0 && t.min_eig(n_win) < params.min_eig) {
        alive = false;
        break;
      }
      PointD nu{0, 0};
      if (det > 1e-12) {
        for (int it = 0; it < params.iterations; ++it) {
          double bx = 0, by = 0;
          for (int dy = -half; dy <= half; ++dy) {
            for (int dx = -half; dx <= half; ++dx) {
              const double e = P[l].sample(c.x + dx, c.y + dy) -
                               N[l].sample(c.x + dx + guess.x + nu.x, c.y + dy + guess.y + nu.y);
              bx += e * G[l].gx.sample(c.x + dx, c.y + dy);
              by += e * G[l].gy.sample(c.x + dx, c.y + dy);
            }
          }
          const double ex = (t.yy * bx - t.xy * by) / det;
          const double ey = (t.xx * by - t.xy * bx) / det;
          nu.x += ex;
          nu.y += ey;
          if (!std::isfinite(nu.x) || !std::isfinite(nu.y)) {
            alive = false;
            break;
          }
          if (ex * ex + ey * ey < 1e-4) break;
        }
      }
      d = {guess.x + nu.x, guess.y + nu.y};
      if (l > 0) guess = {2 * d.x, 2 * d.y};
    }
    PointD q{p0.x + d.x, p0.y + d.y};
    if (alive) {
      alive = q.x >= 0 && q.y >= 0 && q.x <= prev.width - 1 && q.y <= prev.height - 1;
    }
    if (alive) {
      double resid = 0;
      for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx)
          resid += std::abs(P[0].sample(p0.x + dx, p0.y + dy) - N[0].sample(q.x + dx, q.y + dy));
      alive = resid / n_win <= params.max_residual;
    }
    if (!alive) q = p0;
    res.points.push_back(q);
    res.alive.push_back(alive);
  }
  return res;
}

int ObjectTrack::alive_count() const {
  return static_cast<int>(std::count_if(points.begin(), points.end(), [](const TrackPoint& t) { return t.alive; }));
}

PointD ObjectTrack::centroid() const {
  double sx = 0, sy = 0;
  int n = 0;
  for (const auto& t : points) {
    if (!t.alive) continue;
    sx += t.p.x;
    sy += t.p.y;
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::empty_input, "object track has no live points");
  return {sx / n, sy / n};
}

ObjectTrack seed_object_track(const Frame& frame, const Rect& rect, int spacing, const LkParams& params) {
  const Plane p = luma(frame);
  const Gradients g = gradients(p);
  const int half = params.window / 2;
  ObjectTrack track;
  const Rect r = intersect(rect, Rect{half, half, frame.width - 2 * half, frame.height - 2 * half});
  for (int y = r.y + spacing / 2; y < r.bottom(); y += spacing) {
    for (int x = r.x + spacing / 2; x < r.right(); x += spacing) {
      const PointD c{static_cast<double>(x), static_cast<double>(y)};
      if (tensor_at(g, c, half).min_eig(params.window * params.window) >= params.min_eig) {
        track.points.push_back({c, true});
      }
    }
  }
  return track;
}

ObjectTrack advance_track(const ObjectTrack& track, const Frame& prev, const Frame& next, const LkParams& params) {
  std::vector<PointD> pts;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    if (!track.points[i].alive) continue;
    pts.push_back(track.points[i].p);
    idx.push_back(i);
  }
  ObjectTrack out = track;
  const auto flow = lk_flow(prev, next, pts, params);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.points[idx[k]] = {flow.points[k], static_cast<bool>(flow.alive[k])};
  }
  return out;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Approach: return "Approach";
    case EventKind::Open: return "Open";
    case EventKind::Carry: return "Carry";
  }
  return "?";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Idle: return "Idle";
    case Phase::Approached: return "Approached";
    case Phase::Opened: return "Opened";
    case Phase::Carrying: return "Carrying";
  }
  return "?";
}

std::optional<double> sample_depth(const DepthRaster& depth, PointD p, int size, const Mask* only) {
  const int cx = static_cast<int>(std::lround(p.x)), cy = static_cast<int>(std::lround(p.y));
  const int h = size / 2;
  std::vector<double> v;
  for (int y = cy - h; y <= cy + h; ++y) {
    for (int x = cx - h; x <= cx + h; ++x) {
      if (!depth.in_bounds(x, y) || depth.at(x, y) == 0) continue;
      if (only && !only->get(x, y)) continue;
      v.push_back(depth.at(x, y));
    }
  }
  if (v.empty()) return std::nullopt;
  return median(v);
}

std::optional<double> rect_depth(const DepthRaster& depth, const Rect& rect, const Mask* skip) {
  const Rect r = intersect(rect, Rect{0, 0, depth.width, depth.height});
  std::vector<double> v;
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      if (depth.at(x, y) == 0 || (skip && skip->get(x, y))) continue;
      v.push_back(depth.at(x, y));
    }
  }
  if (v.empty()) return std::nullopt;
  return median(v);
}

std::optional<PointI> nearest_hand(const parts::BodyPartModel& model, const Rect& box) {
  std::optional<PointI> best;
  double best_d = 0;
  for (const auto& h : model.hands) {
    if (!h) continue;
    const double d = distance_to_rect(to_double(*h), box);
    if (!best || d < best_d) {
      best = h;
      best_d = d;
    }
  }
  return best;
}

std::optional<ActivityEvent> detect_approach(const parts::BodyPartModel& model, const BoxRegion& box,
                                             const DepthRaster* depth, const Mask* silhouette, ActivityState& state,
                                             const ActivityParams& params) {
  if (state.approach_fired) return std::nullopt;
  const auto hand = nearest_hand(model, box.tracked_rect);
  bool ok = false;
  ActivityEvent ev;
  ev.kind = EventKind::Approach;
  ev.frame_index = model.frame_index;
  if (hand && model.has(blob::PartLabel::torso)) {
    ev.distance_px = distance_to_rect(to_double(*hand), box.tracked_rect);
    ok = ev.distance_px <= params.d_xy;
    if (ok && depth) {
      const auto zh = sample_depth(*depth, to_double(*hand), params.depth_window, silhouette);
      const auto zb = rect_depth(*depth, box.tracked_rect, silhouette);
      if (zh && zb) {
        ev.depth_used = true;
        ev.dz_mm = std::abs(*zh - *zb);
        ok = *ev.dz_mm <= params.approach_dz_mm;
      }
    }
  }
  state.approach_count = ok ? state.approach_count + 1 : 0;
  if (state.approach_count < params.approach_frames) return std::nullopt;
  state.approach_fired = true;
  if (state.phase == Phase::Idle) state.phase = Phase::Approached;
  ev.confidence = std::clamp(1.0 - ev.distance_px / params.d_xy, 0.0, 1.0);
  return ev;
}

std::optional<ActivityEvent> detect_open(const BoxRegion& box, const Frame& frame, ActivityState& state,
                                         const ActivityParams& params) {
  if (!state.approached() || state.open_fired) {
    state.open_count = 0;
    return std::nullopt;
  }
  const double d = hist::hist_distance(hist::color_hist16(frame, box.tracked_rect), box.ref_hist);
  state.open_count = d > params.open_threshold ? state.open_count + 1 : 0;
  if (state.open_count < params.open_frames) return std::nullopt;
  state.open_fired = true;
  if (state.phase == Phase::Approached) state.phase = Phase::Opened;
  ActivityEvent ev;
  ev.kind = EventKind::Open;
  ev.frame_index = frame.index;
  ev.hist_distance = d;
  ev.confidence = d;
  return ev;
}

std::optional<ActivityEvent> detect_carry(const parts::BodyPartModel& model, const ObjectTrack& track,
                                          const DepthRaster* depth, const Mask* silhouette, ActivityState& state,
                                          const ActivityParams& params) {
  if (!state.approached() || state.carry_fired || !track.valid()) {
    state.carry_count = 0;
    state.last_object.reset();
    state.last_object_z.reset();
    state.last_hand_z.reset();
    return std::nullopt;
  }
  const PointD obj = track.centroid();
  std::optional<PointI> hand;
  double hand_d = 0;
  for (const auto& h : model.hands) {
    if (!h) continue;
    const double d = distance(to_double(*h), obj);
    if (!hand || d < hand_d) {
      hand = h;
      hand_d = d;
    }
  }
  std::optional<double> z_obj, z_hand;
  if (depth) {
    z_obj = sample_depth(*depth, obj, params.depth_window);
    if (hand) z_hand = sample_depth(*depth, to_double(*hand), params.depth_window, silhouette);
  }

  ActivityEvent ev;
  ev.kind = EventKind::Carry;
  ev.frame_index = model.frame_index;
  bool ok = hand.has_value() && state.last_object.has_value();
  if (ok) {
    ev.step_px = distance(obj, *state.last_object);
    ev.distance_px = hand_d;
    ok = *ev.step_px > params.carry_min_step && hand_d <= params.d_xy;
  }
  if (ok && z_obj && z_hand && state.last_object_z && state.last_hand_z) {
    ev.depth_used = true;
    ev.dz_mm = std::abs((*z_obj - *state.last_object_z) - (*z_hand - *state.last_hand_z));
    ok = *ev.dz_mm <= params.carry_dz_mm;
  }
  state.last_object = obj;
  state.last_object_z = z_obj;
  state.last_hand_z = z_hand;
  state.carry_count = ok ? state.carry_count + 1 : 0;
  if (state.carry_count < params.carry_frames) return std::nullopt;
  state.carry_fired = true;
  state.phase = Phase::Carrying;
  ev.confidence = std::clamp(1.0 - ev.distance_px / params.d_xy, 0.0, 1.0);
  return ev;
}

}  // namespace hbpt::activity
