#include "hbpt/evaluate.hpp"

#include <cmath>

#include <json.hpp>

namespace hbpt::eval {

using json = nlohmann::ordered_json;

namespace {

PointD point_of(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

ScoredFrame scored(const pipeline::FrameRecord& r) {
  ScoredFrame s;
  s.frame = r.frame;
  if (r.person) s.centroid = r.person->centroid;
  if (r.torso) s.disc_center = r.torso->center;
  if (r.model) {
    for (const auto label : blob::kAllParts) {
      if (r.model->has(label)) s.parts[parts::index_of(label)] = r.model->get(label).mu;
    }
  }
  return s;
}

ScoredFrame scored_from_json(const std::string& line) {
  ScoredFrame s;
  try {
    const json j = json::parse(line);
    s.frame = j.at("frame").get<int>();
    if (j.contains("person") && !j["person"].is_null()) s.centroid = point_of(j["person"].at("centroid"));
    if (j.contains("torso_disc") && !j["torso_disc"].is_null()) s.disc_center = point_of(j["torso_disc"].at("center"));
    if (j.contains("parts") && j["parts"].is_object()) {
      for (const auto& [name, b] : j["parts"].items()) {
        const auto label = blob::part_from_string(name);
        if (!label) throw Error(ErrorKind::decode_failure, "unknown part '" + name + "'");
        s.parts[parts::index_of(*label)] = point_of(b.at("mu"));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::decode_failure, std::string("blobs record: ") + e.what());
  }
  return s;
}

std::vector<ScoredEvent> scored(const std::vector<activity::ActivityEvent>& events) {
  std::vector<ScoredEvent> out;
  for (const auto& e : events) out.push_back({activity::to_string(e.kind), e.frame_index});
  return out;
}

std::vector<ScoredEvent> events_from_json(const std::string& text) {
  std::vector<ScoredEvent> out;
  try {
    for (const auto& e : json::parse(text)) out.push_back({e.at("kind").get<std::string>(), e.at("frame").get<int>()});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::decode_failure, std::string("events: ") + e.what());
  }
  return out;
}

Summary evaluate(const std::vector<ScoredFrame>& frames, const std::vector<ScoredEvent>& events,
                 const synth::GroundTruth& truth, const Tolerances& tol) {
  std::map<int, const ScoredFrame*> by_frame;
  for (const auto& f : frames) by_frame[f.frame] = &f;
  auto estimate = [&](int index) -> const ScoredFrame* {
    const auto it = by_frame.find(index);
    return it == by_frame.end() ? nullptr : it->second;
  };

  Summary s;
  double sq = 0.0;
  int disc_hits = 0;
  const int arm_r = parts::index_of(blob::PartLabel::armR);
  for (const auto label : blob::kAllParts) s.parts[blob::to_string(label)] = {};

  for (const auto& t : truth.frames) {
    if (!t.person) continue;
    ++s.person_frames;
    const ScoredFrame* e = estimate(t.index);
    if (e && e->centroid) {
      ++s.tracked_frames;
      const double d = distance(*e->centroid, t.centroid);
      sq += d * d;
    }
    if (e && e->disc_center) {
      const PointD c = *e->disc_center;
      const Rect& r = t.torso_rect;
      if (c.x >= r.x && c.x <= r.right() - 1 && c.y >= r.y && c.y <= r.bottom() - 1) ++disc_hits;
    }
    const double radius = tol.part_fraction * t.body_width;
    for (const auto label : blob::kAllParts) {
      const int i = parts::index_of(label);
      if (!t.parts[i].visible) continue;
      auto& ps = s.parts[blob::to_string(label)];
      ++ps.visible;
      if (e && e->parts[i] && distance(*e->parts[i], t.parts[i].centroid) <= radius) ++ps.hits;
    }
    // Arm presence is scored on frames where the truth model exists.
    ++s.arm_right.frames;
    const bool est_arm = e && e->parts[arm_r].has_value();
    if (est_arm == t.parts[arm_r].visible) ++s.arm_right.agree;
  }
  s.centroid_rms = s.tracked_frames ? std::sqrt(sq / s.tracked_frames) : 0.0;
  s.disc_in_torso = s.person_frames ? static_cast<double>(disc_hits) / s.person_frames : 0.0;

  // Visibility transitions of the right arm.
  for (std::size_t k = 1; k < truth.frames.size(); ++k) {
    const auto& a = truth.frames[k - 1];
    const auto& b = truth.frames[k];
    if (!a.person || !b.person || a.parts[arm_r].visible == b.parts[arm_r].visible) continue;
    const bool target = b.parts[arm_r].visible;
    std::optional<int> lag;
    for (int d = -tol.transition_window; d <= tol.transition_window && !lag; ++d) {
      const ScoredFrame* cur = estimate(b.index + d);
      const ScoredFrame* prev = estimate(b.index + d - 1);
      if (!cur || !prev) continue;
      if (cur->parts[arm_r].has_value() == target && prev->parts[arm_r].has_value() != target) lag = d;
    }
    s.arm_right.transitions.push_back({b.index, lag});
  }

  std::vector<bool> used(events.size(), false);
  for (const auto& te : truth.events) {
    EventMatch m;
    m.kind = te.kind;
    m.truth_frame = te.frame;
    const int expect = te.kind == "Open" ? te.frame + tol.open_frames : te.frame;
    const int slack = te.kind == "Open" ? tol.open_slack : tol.event_frames;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (used[i] || events[i].kind != te.kind) continue;
      used[i] = true;
      m.found_frame = events[i].frame;
      m.within_tolerance = std::abs(events[i].frame - expect) <= slack;
      break;
    }
    s.events.push_back(m);
  }
  for (bool u : used) s.unmatched_events += u ? 0 : 1;
  return s;
}

std::string summary_to_json(const Summary& s) {
  json j;
  j["person_frames"] = s.person_frames;
  j["tracked_frames"] = s.tracked_frames;
  j["centroid_rms_px"] = s.centroid_rms;
  j["disc_in_torso"] = s.disc_in_torso;
  json parts = json::object();
  for (const auto& [name, p] : s.parts) {
    parts[name] = {{"visible", p.visible}, {"hits", p.hits}, {"rate", p.rate()}};
  }
  j["parts"] = parts;
  json tr = json::array();
  for (const auto& [frame, lag] : s.arm_right.transitions) {
    tr.push_back({{"frame", frame}, {"lag", lag ? json(*lag) : json(nullptr)}});
  }
  j["arm_right"] = {{"frames", s.arm_right.frames}, {"agree", s.arm_right.agree}, {"rate", s.arm_right.rate()},
                    {"transitions", tr}};
  json ev = json::array();
  for (const auto& m : s.events) {
    ev.push_back({{"kind", m.kind},
                  {"truth_frame", m.truth_frame},
                  {"found_frame", m.found_frame ? json(*m.found_frame) : json(nullptr)},
                  {"within_tolerance", m.within_tolerance}});
  }
  j["events"] = ev;
  j["unmatched_events"] = s.unmatched_events;
  return j.dump(2);
}

}  // namespace hbpt::eval
