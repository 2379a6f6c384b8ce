#pragma once

// Minimal per-frame chain used by the module tests: learned background,
// refined foreground, person tracking, torso disc, regions and part model.

#include <optional>
#include <span>
#include <vector>

#include "hbpt/bodyparts.hpp"
#include "hbpt/maskops.hpp"
#include "hbpt/scene_model.hpp"
#include "hbpt/synthgen.hpp"
#include "hbpt/tracker.hpp"

namespace support {

using namespace hbpt;

struct FrameOut {
  std::optional<tracker::PersonBlob> person;
  Mask silhouette;  // the person component of the refined mask
  std::optional<tracker::TorsoDisc> disc;
  std::optional<parts::RegionPartition> partition;
  std::optional<parts::BodyPartModel> model;
};

inline std::vector<FrameOut> run_parts(const synth::Sequence& seq, int learn, std::uint64_t seed = 1) {
  const auto scene = scene::learn_scene(std::span<const Frame>(seq.frames.data(), learn));
  std::vector<FrameOut> out;
  std::optional<tracker::PersonBlob> person;
  tracker::ParticleSet ps;
  std::optional<parts::BodyPartModel> prev;
  for (std::size_t f = learn; f < seq.frames.size(); ++f) {
    const Frame& frame = seq.frames[f];
    const Mask mask = maskops::refine_mask(scene::detect_foreground(scene, frame), 200);
    FrameOut fo;
    std::optional<int> label;
    maskops::LabeledComponents cc;
    if (!person) {
      cc = maskops::connected_components(mask);
      person = tracker::detect_person(cc, frame, 200);
      if (person) {
        ps = tracker::init_particles(*person, 100, seed);
        label = cc.stats[*cc.largest()].label;
      }
    } else {
      auto r = tracker::mspf_track(*person, std::move(ps), frame, mask);
      person = r.person;
      ps = std::move(r.particles);
      cc = std::move(r.components);
      label = r.component;
    }
    fo.person = person;
    if (person && label) {
      fo.silhouette = cc.component_mask(*label);
      fo.disc = tracker::torso_from_person(*person);
      fo.partition = parts::partition_regions(fo.silhouette, *fo.disc, person->bbox);
      fo.model = parts::build_part_model(*fo.partition, frame, prev ? &*prev : nullptr);
      prev = fo.model;
    } else {
      prev.reset();
    }
    out.push_back(std::move(fo));
  }
  return out;
}

}  // namespace support
