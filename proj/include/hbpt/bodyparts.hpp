#pragma once

#include <array>
#include <optional>

#include "hbpt/blobmodel.hpp"
#include "hbpt/tracker.hpp"
#include "hbpt/types.hpp"

namespace hbpt::parts {

using blob::PartLabel;

inline constexpr int kParts = 8;
inline int index_of(PartLabel p) { return static_cast<int>(p); }

/// Silhouette split around the torso disc. masks are indexed by PartLabel;
/// the torso slot holds the central region (silhouette inside the disc).
/// armL is the image-left side.
struct RegionPartition {
  std::array<Mask, kParts> masks;
  Rect bbox;
  tracker::TorsoDisc torso;

  const Mask& operator[](PartLabel p) const { return masks[index_of(p)]; }
};

RegionPartition partition_regions(const Mask& silhouette, const tracker::TorsoDisc& torso, const Rect& bbox);

struct BodyPartModel {
  int frame_index = 0;
  std::array<std::optional<blob::GaussianBlob>, kParts> blobs;
  std::array<int, kParts> born{};  // frame at which each present blob was (re)created
  // Arm pixel farthest from the torso center, per arm (armL, armR).
  std::array<std::optional<PointI>, 2> hands;
  tracker::TorsoDisc torso_disc;

  bool has(PartLabel p) const { return blobs[index_of(p)].has_value(); }
  const blob::GaussianBlob& get(PartLabel p) const { return *blobs[index_of(p)]; }
  int count() const;
};

BodyPartModel build_part_model(const RegionPartition& partition, const Frame& frame, const BodyPartModel* prev,
                               long long min_part_area = 15);

/// Head and both arms present, arms beyond the disc by at least half a radius,
/// head above the disc top.
bool detect_starfish(const BodyPartModel& model, const tracker::TorsoDisc& torso);

}  // namespace hbpt::parts
