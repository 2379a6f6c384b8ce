#include "hbpt/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <span>

#include <json.hpp>

#include "hbpt/imageio.hpp"
#include "hbpt/maskops.hpp"
#include "hbpt/scene_model.hpp"

namespace hbpt::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

// Adds the elapsed time of its scope to one stage total.
class StageTimer {
 public:
  StageTimer(Metrics& m, const char* stage) : total_(m.stage_ms[stage]), start_(Clock::now()) {}
  ~StageTimer() { total_ += std::chrono::duration<double, std::milli>(Clock::now() - start_).count(); }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  double& total_;
  Clock::time_point start_;
};

BaselineResult run_baseline(const Mask& silhouette, const silhouette::LabelParams& params) {
  const auto geom = silhouette::silhouette_geometry(silhouette);
  const auto contours = maskops::extract_contours(silhouette);
  const maskops::Contour* outer = nullptr;
  for (const auto& c : contours) {
    if (c.level == maskops::Contour::Level::outer && (!outer || c.points.size() > outer->points.size())) outer = &c;
  }
  BaselineResult out;
  out.labels.torso = geom.centroid;
  if (!outer || outer->points.size() < 3) return out;
  try {
    const auto vs = silhouette::hull_vertices(*outer);
    out.labels = silhouette::label_parts_by_distance(vs, geom.centroid, silhouette, params);
    out.concave = vs.concave;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_contour) throw;
  }
  return out;
}

json point(PointD p) { return json::array({p.x, p.y}); }
json point(PointI p) { return json::array({p.x, p.y}); }
json rect(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }

json event_json(const activity::ActivityEvent& e) {
  json j;
  j["kind"] = activity::to_string(e.kind);
  j["frame"] = e.frame_index;
  j["confidence"] = e.confidence;
  j["depth_used"] = e.depth_used;
  j["distance_px"] = e.distance_px;
  if (e.dz_mm) j["dz_mm"] = *e.dz_mm;
  if (e.hist_distance) j["hist_distance"] = *e.hist_distance;
  if (e.step_px) j["step_px"] = *e.step_px;
  return j;
}

}  // namespace

Input load_input(const config::PipelineConfig& cfg) {
  Input in;
  in.frames = imageio::load_frame_sequence(cfg.input, cfg.frame_pattern);
  if (!cfg.use_depth) return in;
  std::vector<fs::path> depth_files;
  for (const auto& de : fs::directory_iterator(cfg.input)) {
    if (de.is_regular_file() && imageio::glob_match(cfg.depth_pattern, de.path().filename().string())) {
      depth_files.push_back(de.path());
    }
  }
  if (depth_files.empty()) return in;
  std::sort(depth_files.begin(), depth_files.end());
  if (depth_files.size() != in.frames.size()) {
    throw Error(ErrorKind::dimension_mismatch, cfg.input.string() + ": " + std::to_string(depth_files.size()) +
                                                   " depth rasters for " + std::to_string(in.frames.size()) + " frames");
  }
  for (const auto& p : depth_files) in.depth.push_back(imageio::load_depth_raster(p));
  return in;
}

RunResult run(const config::PipelineConfig& cfg, const Input& input, const FrameHook& hook) {
  config::validate(cfg);
  const auto& frames = input.frames;
  const int n = static_cast<int>(frames.size());
  const int learn = cfg.scene.learn_frames;
  if (n < learn) {
    throw Error(ErrorKind::too_few_frames,
                std::to_string(n) + " frames, but " + std::to_string(learn) + " are needed to learn the scene");
  }
  const bool use_depth = cfg.use_depth && !input.depth.empty();
  if (use_depth && input.depth.size() != frames.size()) {
    throw Error(ErrorKind::dimension_mismatch, "depth raster count differs from frame count");
  }

  RunResult res;
  Metrics& m = res.metrics;
  const auto t0 = Clock::now();

  scene::SceneModel scene;
  {
    StageTimer t(m, "learn");
    scene = scene::learn_scene(std::span<const Frame>(frames.data(), learn), cfg.scene.var_floor);
  }

  DepthRaster learned_depth;
  if (use_depth && cfg.depth_gate_mm > 0) {
    StageTimer t(m, "learn");
    learned_depth = scene::learn_depth(std::span<const DepthRaster>(input.depth.data(), learn));
  }

  std::optional<tracker::PersonBlob> person;
  tracker::ParticleSet particles;
  std::optional<parts::BodyPartModel> prev_model;
  std::optional<activity::BoxRegion> box;
  std::optional<activity::ObjectTrack> object;
  activity::ActivityState state;
  const int box_ref = cfg.box_reference_index();
  const Mask empty(frames.empty() ? 0 : frames[0].width, frames.empty() ? 0 : frames[0].height);

  for (int f = 0; f < n; ++f) {
    const Frame& frame = frames[f];
    FrameRecord rec;
    rec.frame = frame.index;
    rec.learning = f < learn;
    Mask silhouette = empty;
    std::vector<activity::ActivityEvent> fresh;

    if (!rec.learning) {
      Mask mask;
      {
        StageTimer t(m, "foreground");
        mask = scene::detect_foreground(scene, frame, cfg.scene.tau);
        if (!learned_depth.z.empty()) scene::gate_revealed(mask, learned_depth, input.depth[f], cfg.depth_gate_mm);
      }
      {
        StageTimer t(m, "refine");
        mask = maskops::refine_mask(mask, cfg.min_area);
        // Again after refinement, whose closing and hole filling re-cover revealed pixels.
        if (!learned_depth.z.empty()) scene::gate_revealed(mask, learned_depth, input.depth[f], cfg.depth_gate_mm);
      }
      std::optional<int> label;
      maskops::LabeledComponents cc;
      {
        StageTimer t(m, "track");
        if (!person) {
          cc = maskops::connected_components(mask);
          person = tracker::detect_person(cc, frame, cfg.min_area);
          if (person) {
            particles = tracker::init_particles(*person, cfg.tracker.n_particles, cfg.seed);
            label = cc.stats[*cc.largest()].label;
          }
        } else {
          auto r = tracker::mspf_track(*person, std::move(particles), frame, mask, cfg.tracker);
          particles = std::move(r.particles);
          cc = std::move(r.components);
          label = r.component;
          if (r.person.confidence < cfg.tracker.drop_confidence) {
            person.reset();
          } else {
            person = r.person;
          }
        }
      }
      rec.person = person;
      {
        StageTimer t(m, "parts");
        if (person && label) {
          silhouette = cc.component_mask(*label);
          rec.torso = tracker::torso_from_person(*person);
          if (cfg.baseline_mode) {
            rec.baseline = run_baseline(silhouette, cfg.baseline);
          } else {
            const auto partition = parts::partition_regions(silhouette, *rec.torso, person->bbox);
            rec.model = parts::build_part_model(partition, frame, prev_model ? &*prev_model : nullptr,
                                                cfg.min_part_area);
          }
        }
        prev_model = rec.model;
      }
      {
        StageTimer t(m, "scene_update");
        scene::update_scene(scene, frame, silhouette, cfg.scene.alpha);
      }
    }

    {
      StageTimer t(m, "activity");
      if (cfg.box_rect && f == box_ref) box = activity::make_box_region(frame, *cfg.box_rect);
      if (box && f > box_ref) box = activity::track_box_region(*box, frame, cfg.tracker.ms_max_iter, cfg.tracker.ms_eps);
      if (box && !rec.learning && !cfg.baseline_mode) {
        const DepthRaster* depth = use_depth ? &input.depth[f] : nullptr;
        const bool was_approached = state.approached();
        // Eroded so the dilation ring added by refinement does not read wall depth.
        const Mask core = maskops::erode(silhouette);
        if (rec.model) {
          if (auto ev = activity::detect_approach(*rec.model, *box, depth, &core, state, cfg.activity)) {
            fresh.push_back(*ev);
          }
        }
        if (!was_approached && state.approached()) {
          object = activity::seed_object_track(frame, box->tracked_rect, cfg.lk_spacing, cfg.lk);
        }
        if (auto ev = activity::detect_open(*box, frame, state, cfg.activity)) fresh.push_back(*ev);
        if (object && was_approached) {
          object = activity::advance_track(*object, frames[f - 1], frame, cfg.lk);
          parts::BodyPartModel none;
          none.frame_index = frame.index;
          const auto& model = rec.model ? *rec.model : none;
          if (auto ev = activity::detect_carry(model, *object, depth, &core, state, cfg.activity)) {
            fresh.push_back(*ev);
          }
        }
      }
      if (box) rec.box = box->tracked_rect;
      rec.phase = state.phase;
    }

    res.events.insert(res.events.end(), fresh.begin(), fresh.end());
    if (hook) {
      StageTimer t(m, "output");
      hook(frame, rec, silhouette, fresh);
    }
    res.records.push_back(std::move(rec));
  }

  m.frames = n;
  m.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  m.fps = m.wall_ms > 0 ? n / (m.wall_ms / 1000.0) : 0.0;
  return res;
}

std::string record_to_json(const FrameRecord& r) {
  json j;
  j["frame"] = r.frame;
  j["learning"] = r.learning;
  if (r.person) {
    const auto& p = *r.person;
    j["person"] = {{"bbox", rect(p.bbox)},
                   {"centroid", point(p.centroid)},
                   {"area", p.area},
                   {"confidence", p.confidence},
                   {"body_width", p.body_width}};
  } else {
    j["person"] = nullptr;
  }
  if (r.torso) {
    j["torso_disc"] = {{"center", point(r.torso->center)}, {"radius", r.torso->radius}};
  } else {
    j["torso_disc"] = nullptr;
  }
  if (r.model) {
    json parts = json::object();
    for (const auto label : blob::kAllParts) {
      if (!r.model->has(label)) continue;
      const auto& b = r.model->get(label);
      parts[blob::to_string(label)] = {{"mu", point(b.mu)},
                                       {"K", json::array({b.K.xx, b.K.xy, b.K.yy})},
                                       {"area", b.area},
                                       {"color", json::array({b.color_mean[0], b.color_mean[1], b.color_mean[2]})},
                                       {"born", r.model->born[parts::index_of(label)]}};
    }
    j["parts"] = parts;
    json hands = json::array();
    for (const auto& h : r.model->hands) hands.push_back(h ? point(*h) : json(nullptr));
    j["hands"] = hands;
  } else {
    j["parts"] = nullptr;
    j["hands"] = nullptr;
  }
  if (r.baseline) {
    const auto& l = r.baseline->labels;
    json b;
    b["head"] = l.head ? point(*l.head) : json(nullptr);
    b["torso"] = point(l.torso);
    b["feet"] = json::array();
    for (const auto& p : l.feet) b["feet"].push_back(point(p));
    b["hands"] = json::array();
    for (const auto& p : l.hands) b["hands"].push_back(point(p));
    j["baseline"] = b;
  }
  j["box"] = r.box ? rect(*r.box) : json(nullptr);
  j["phase"] = activity::to_string(r.phase);
  return j.dump();
}

std::string events_to_json(const std::vector<activity::ActivityEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(event_json(e));
  return arr.dump(2);
}

std::string metrics_to_json(const Metrics& m) {
  json j;
  j["frames"] = m.frames;
  j["wall_ms"] = m.wall_ms;
  j["fps"] = m.fps;
  j["target_fps"] = 10.0;
  j["meets_target"] = m.fps >= 10.0;
  json stages = json::object(), per_frame = json::object();
  for (const auto& [k, v] : m.stage_ms) {
    stages[k] = v;
    per_frame[k] = m.frames > 0 ? v / m.frames : 0.0;
  }
  j["stage_ms"] = stages;
  j["stage_ms_per_frame"] = per_frame;
  return j.dump(2);
}

namespace {

std::vector<imageio::OverlayItem> overlays_for(const FrameRecord& r,
                                               const std::vector<activity::ActivityEvent>& fresh) {
  using imageio::Color;
  using imageio::OverlayItem;
  std::vector<OverlayItem> items;
  if (r.box) items.push_back(OverlayItem::rectangle(*r.box, Color::yellow, "box"));
  if (r.person) items.push_back(OverlayItem::rectangle(r.person->bbox, Color::green));
  if (r.torso) items.push_back(OverlayItem::ellipse(r.torso->center, r.torso->radius, r.torso->radius, 0, Color::cyan));
  if (r.model) {
    static constexpr Color colors[] = {Color::white, Color::cyan,    Color::red,    Color::red,
                                       Color::blue,  Color::magenta, Color::orange, Color::green};
    for (const auto label : blob::kAllParts) {
      if (!r.model->has(label)) continue;
      const auto e = blob::blob_ellipse(r.model->get(label));
      items.push_back(OverlayItem::ellipse(e.center, e.a, e.b, e.angle, colors[parts::index_of(label)]));
    }
  }
  if (r.baseline) {
    auto mark = [&](PointI p, Color c) { items.push_back(OverlayItem::rectangle({p.x - 2, p.y - 2, 5, 5}, c)); };
    if (r.baseline->labels.head) mark(*r.baseline->labels.head, Color::white);
    for (const auto& p : r.baseline->labels.hands) mark(p, Color::red);
    for (const auto& p : r.baseline->labels.feet) mark(p, Color::blue);
  }
  int y = 2;
  for (const auto& e : fresh) {
    items.push_back(OverlayItem::text({2, y}, activity::to_string(e.kind), Color::orange));
    y += 10;
  }
  return items;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
}

}  // namespace

RunResult run_pipeline(const config::PipelineConfig& cfg) {
  if (cfg.output.empty()) throw Error(ErrorKind::bad_config, "no output directory given");
  config::validate(cfg);
  const auto t0 = Clock::now();
  const Input input = load_input(cfg);
  const double decode_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  fs::create_directories(cfg.output);
  if (cfg.emit_overlays) fs::create_directories(cfg.output / "overlays");
  FrameHook hook;
  if (cfg.emit_overlays) {
    hook = [&](const Frame& frame, const FrameRecord& rec, const Mask&, const std::vector<activity::ActivityEvent>& fresh) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%06d.ppm", rec.frame);
      imageio::write_annotated_frame(frame, overlays_for(rec, fresh), cfg.output / "overlays" / name);
    };
  }
  RunResult res = run(cfg, input, hook);
  res.metrics.stage_ms["decode"] = decode_ms;
  res.metrics.wall_ms += decode_ms;
  res.metrics.fps = res.metrics.wall_ms > 0 ? res.metrics.frames / (res.metrics.wall_ms / 1000.0) : 0.0;

  std::string lines;
  for (const auto& r : res.records) lines += record_to_json(r) + "\n";
  write_text(cfg.output / "blobs.jsonl", lines);
  write_text(cfg.output / "events.json", events_to_json(res.events) + "\n");
  write_text(cfg.output / "metrics.json", metrics_to_json(res.metrics) + "\n");
  return res;
}

}  // namespace hbpt::pipeline
