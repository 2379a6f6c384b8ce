#include "hbpt/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace hbpt::tracker {

namespace {

// Window the person bbox occupies around a centroid, enlarged by the margin.
Rect search_window(const PersonBlob& p, PointD c, double scale, double margin) {
  const int w = std::max(3, static_cast<int>(std::lround(p.bbox.w * scale * (1.0 + 2.0 * margin))));
  const int h = std::max(3, static_cast<int>(std::lround(p.bbox.h * scale * (1.0 + 2.0 * margin))));
  return rect_around(c, w, h);
}

// Bbox of the same size as prev's, keeping prev's bbox-center offset from the centroid.
Rect shifted_bbox(const PersonBlob& prev, PointD c) {
  const PointD off{prev.bbox.center().x - prev.centroid.x, prev.bbox.center().y - prev.centroid.y};
  return rect_around({c.x + off.x, c.y + off.y}, prev.bbox.w, prev.bbox.h);
}

struct WindowSum {
  double sum = 0.0;
  PointD centroid;
};

WindowSum window_sum(const hist::WeightImage& wi, const Rect& r) {
  double s = 0.0, sx = 0.0, sy = 0.0;
  for (int y = r.y; y < r.bottom(); ++y) {
    const double* row = &wi.w[static_cast<std::size_t>(y) * wi.width];
    for (int x = r.x; x < r.right(); ++x) {
      const double v = row[x];
      s += v;
      sx += v * x;
      sy += v * y;
    }
  }
  if (s <= 0.0) return {0.0, r.center()};
  return {s, {sx / s, sy / s}};
}

std::vector<PointI> mask_pixels_in(const maskops::LabeledComponents& cc, int label, const Rect& r) {
  std::vector<PointI> px;
  const Rect c = intersect(r, Rect{0, 0, cc.width, cc.height});
  for (int y = c.y; y < c.bottom(); ++y) {
    for (int x = c.x; x < c.right(); ++x) {
      if (cc.label_at(x, y) == label) px.push_back({x, y});
    }
  }
  return px;
}

}  // namespace

double measure_body_width(const Mask& silhouette, PointD centroid, const Rect& bbox) {
  const double half = bbox.h / 8.0;
  const int y0 = std::max(bbox.y, static_cast<int>(std::ceil(centroid.y - half)));
  const int y1 = std::min(bbox.bottom() - 1, static_cast<int>(std::floor(centroid.y + half)));
  std::vector<int> counts;
  for (int y = y0; y <= y1; ++y) {
    int n = 0;
    for (int x = bbox.x; x < bbox.right(); ++x) n += silhouette.get(x, y) ? 1 : 0;
    counts.push_back(n);
  }
  if (counts.empty()) return bbox.w;
  std::sort(counts.begin(), counts.end());
  const std::size_t m = counts.size();
  return m % 2 ? counts[m / 2] : 0.5 * (counts[m / 2 - 1] + counts[m / 2]);
}

std::optional<PersonBlob> detect_person(const maskops::LabeledComponents& components, const Frame& frame,
                                        long long min_area) {
  const auto best = components.largest();
  if (!best || components.stats[*best].area < min_area) return std::nullopt;
  const auto& s = components.stats[*best];
  PersonBlob p;
  p.bbox = s.bbox;
  p.centroid = s.centroid;
  p.area = s.area;
  p.confidence = 1.0;
  const auto px = components.component_pixels(s.label);
  p.ref_hist = hist::hist_from_pixels(frame, px);
  p.body_width = measure_body_width(components.component_mask(s.label), s.centroid, s.bbox);
  return p;
}

ParticleSet init_particles(const PersonBlob& person, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::invalid_params, "particle count must be >= 1");
  ParticleSet ps;
  ps.rng_seed = seed;
  ps.rng.seed(seed);
  ps.particles.assign(n, Particle{person.centroid.x, person.centroid.y, 1.0, 1.0 / n});
  return ps;
}

MeanShiftResult mean_shift(const hist::WeightImage& weights, const Rect& window, int max_iter, double eps) {
  MeanShiftResult res;
  res.window = window;
  const int W = weights.width, H = weights.height;
  if (intersect(window, Rect{0, 0, W, H}).empty()) {
    throw Error(ErrorKind::empty_rect, "mean_shift window lies outside the image");
  }
  Rect cur = clamp_into(window, W, H);
  WindowSum ws = window_sum(weights, cur);
  if (ws.sum <= 0.0) {
    res.centroid = window.center();
    return res;
  }
  res.weight_sums.push_back(ws.sum);
  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    const PointD c = cur.center();
    const double dx = ws.centroid.x - c.x, dy = ws.centroid.y - c.y;
    if (std::hypot(dx, dy) < eps) {
      res.converged = true;
      break;
    }
    bool moved = false;
    for (double f = 1.0; f > 1e-3; f *= 0.5) {
      const Rect cand = clamp_into(rect_around({c.x + f * dx, c.y + f * dy}, cur.w, cur.h), W, H);
      if (cand == cur) break;
      const WindowSum cs = window_sum(weights, cand);
      if (cs.sum >= ws.sum) {
        cur = cand;
        ws = cs;
        moved = true;
        break;
      }
    }
    if (!moved) {
      res.converged = true;
      break;
    }
    res.weight_sums.push_back(ws.sum);
  }
  res.window = cur;
  res.centroid = ws.centroid;
  return res;
}

TrackResult mspf_track(const PersonBlob& prev, ParticleSet particles, const Frame& frame, const ForegroundMask& fg,
                       const TrackerParams& params) {
  if (fg.width != frame.width || fg.height != frame.height) {
    throw Error(ErrorKind::dimension_mismatch, "foreground mask does not match frame");
  }
  TrackResult out;
  out.components = maskops::connected_components(fg);
  const int W = frame.width, H = frame.height;

  if (out.components.count() == 0) {
    PersonBlob p = prev;
    p.centroid = {prev.centroid.x + prev.velocity.x, prev.centroid.y + prev.velocity.y};
    p.bbox = shifted_bbox(prev, p.centroid);
    p.confidence = prev.confidence * params.coast_decay;
    for (auto& q : particles.particles) {
      q.x += prev.velocity.x;
      q.y += prev.velocity.y;
    }
    out.person = p;
    out.particles = std::move(particles);
    return out;
  }

  // Propagate and weight.
  auto& ps = particles.particles;
  const int n = static_cast<int>(ps.size());
  std::normal_distribution<double> nxy(0.0, 1.0);
  for (auto& q : ps) {
    // Draw order is fixed (x, y, scale) so a seed reproduces the run exactly.
    const double ex = nxy(particles.rng), ey = nxy(particles.rng), es = nxy(particles.rng);
    q.x += prev.velocity.x + params.sigma_xy * ex;
    q.y += prev.velocity.y + params.sigma_xy * ey;
    q.scale = std::clamp(q.scale + params.sigma_scale * es, 0.5, 2.0);
  }
  double total = 0.0;
  for (auto& q : ps) {
    const Rect win = intersect(search_window(prev, {q.x, q.y}, q.scale, params.window_margin), Rect{0, 0, W, H});
    q.weight = win.empty() ? 0.0 : hist::similarity(hist::color_hist16(frame, win), prev.ref_hist);
    total += q.weight;
  }
  for (auto& q : ps) q.weight = total > 0.0 ? q.weight / total : 1.0 / n;
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (ps[i].weight > ps[best].weight) best = i;
  }
  const Particle best_p = ps[best];

  // Systematic resampling, consuming weights in index order.
  {
    std::uniform_real_distribution<double> u01(0.0, 1.0 / n);
    const double u0 = u01(particles.rng);
    std::vector<Particle> next;
    next.reserve(n);
    double cum = ps[0].weight;
    int j = 0;
    for (int i = 0; i < n; ++i) {
      const double target = u0 + static_cast<double>(i) / n;
      while (target > cum && j < n - 1) cum += ps[++j].weight;
      Particle q = ps[j];
      q.weight = 1.0 / n;
      next.push_back(q);
    }
    ps = std::move(next);
  }

  // Mean-shift refinement of the best particle on the fg-masked back-projection.
  hist::WeightImage bp = hist::back_project(frame, prev.ref_hist);
  for (std::size_t i = 0; i < bp.w.size(); ++i) {
    if (!fg.bits[i]) bp.w[i] = 0.0;
  }
  PointD estimate{best_p.x, best_p.y};
  // The fused bbox already tracks size, so the refinement window stays at
  // scale 1; a shrunken window would clip the silhouette.
  const Rect seed = search_window(prev, estimate, 1.0, params.window_margin);
  if (!intersect(seed, Rect{0, 0, W, H}).empty()) {
    const MeanShiftResult ms = mean_shift(bp, seed, params.ms_max_iter, params.ms_eps);
    if (!ms.weight_sums.empty()) estimate = ms.centroid;
  }

  // Fuse with the largest foreground component.
  PersonBlob p = prev;
  p.centroid = estimate;
  p.bbox = shifted_bbox(prev, estimate);
  const int li = *out.components.largest();
  const auto& comp = out.components.stats[li];
  if (iou(p.bbox, comp.bbox) > params.iou_gate) {
    p.centroid = {0.5 * (estimate.x + comp.centroid.x), 0.5 * (estimate.y + comp.centroid.y)};
    p.bbox = comp.bbox;
    p.area = comp.area;
    p.body_width = measure_body_width(out.components.component_mask(comp.label), comp.centroid, comp.bbox);
    out.component = comp.label;
  }
  // Confidence: foreground colors under the estimate against the reference.
  const auto px = out.component ? mask_pixels_in(out.components, *out.component, p.bbox) : std::vector<PointI>{};
  p.confidence = px.empty() ? 0.0 : hist::similarity(hist::hist_from_pixels(frame, px), prev.ref_hist);
  p.velocity = {p.centroid.x - prev.centroid.x, p.centroid.y - prev.centroid.y};

  // Carry the particle cloud along with the refinement.
  const double sx = p.centroid.x - best_p.x, sy = p.centroid.y - best_p.y;
  for (auto& q : ps) {
    q.x += sx;
    q.y += sy;
  }
  out.person = p;
  out.particles = std::move(particles);
  return out;
}

TorsoDisc torso_from_person(const PersonBlob& person) {
  if (person.bbox.w < 2) throw Error(ErrorKind::degenerate_width, "person bbox narrower than 2 px");
  const double width = person.body_width > 0.0 ? person.body_width : person.bbox.w;
  double r = width / 2.0;
  const double left = person.centroid.x - person.bbox.x;
  const double right = person.bbox.right() - person.centroid.x;
  r = std::min({r, left, right});
  if (r <= 0.0) throw Error(ErrorKind::degenerate_width, "centroid outside person bbox");
  return {person.centroid, r};
}

}  // namespace hbpt::tracker
