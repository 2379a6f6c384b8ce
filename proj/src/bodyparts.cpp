#include "hbpt/bodyparts.hpp"

#include "hbpt/maskops.hpp"

namespace hbpt::parts {

RegionPartition partition_regions(const Mask& silhouette, const tracker::TorsoDisc& torso, const Rect& bbox) {
  if (!silhouette.any()) throw Error(ErrorKind::empty_silhouette, "partition of an empty silhouette");
  RegionPartition out;
  out.bbox = bbox;
  out.torso = torso;
  for (auto& m : out.masks) m = Mask(silhouette.width, silhouette.height);

  const double cx = torso.center.x, cy = torso.center.y, r = torso.radius;
  const double disc_top = cy - r, disc_bottom = cy + r;
  const double leg_mid = 0.5 * (disc_bottom + (bbox.bottom() - 1));
  const Rect area = intersect(bbox, Rect{0, 0, silhouette.width, silhouette.height});
  for (int y = area.y; y < area.bottom(); ++y) {
    for (int x = area.x; x < area.right(); ++x) {
      if (!silhouette.get(x, y)) continue;
      const double dx = x - cx, dy = y - cy;
      PartLabel label;
      if (dx * dx + dy * dy <= r * r) {
        label = PartLabel::torso;
      } else if (y < disc_top) {
        if (std::abs(dx) > r) continue;
        label = PartLabel::head;
      } else if (y <= disc_bottom) {
        if (dx < -r) {
          label = PartLabel::armL;
        } else if (dx > r) {
          label = PartLabel::armR;
        } else {
          continue;
        }
      } else {
        if (std::abs(dx) > r) continue;
        const bool left = x < cx, upper = y < leg_mid;
        label = upper ? (left ? PartLabel::leg1 : PartLabel::leg2) : (left ? PartLabel::leg3 : PartLabel::leg4);
      }
      out.masks[index_of(label)].set(x, y);
    }
  }
  return out;
}

int BodyPartModel::count() const {
  int n = 0;
  for (const auto& b : blobs) n += b.has_value() ? 1 : 0;
  return n;
}

BodyPartModel build_part_model(const RegionPartition& partition, const Frame& frame, const BodyPartModel* prev,
                               long long min_part_area) {
  BodyPartModel model;
  model.frame_index = frame.index;
  model.torso_disc = partition.torso;
  for (PartLabel label : blob::kAllParts) {
    const int i = index_of(label);
    const Mask& region = partition.masks[i];
    if (static_cast<long long>(region.count()) < min_part_area) continue;
    std::vector<PointI> pixels;
    if (label == PartLabel::torso) {
      for (int y = 0; y < region.height; ++y) {
        for (int x = 0; x < region.width; ++x) {
          if (region.get(x, y)) pixels.push_back({x, y});
        }
      }
    } else {
      // Regions never leave the silhouette bbox, so label the crop only.
      const Rect& b = partition.bbox;
      Mask crop(b.w, b.h);
      for (int y = 0; y < b.h; ++y)
        for (int x = 0; x < b.w; ++x) crop.set(x, y, region.get(b.x + x, b.y + y));
      const auto cc = maskops::connected_components(crop);
      const auto& best = cc.stats[*cc.largest()];
      if (best.area < min_part_area) continue;
      pixels = cc.component_pixels(best.label);
      for (PointI& p : pixels) p = {p.x + b.x, p.y + b.y};
    }
    model.blobs[i] = blob::fit_blob(pixels, frame, label);
    model.born[i] = (prev && prev->blobs[i]) ? prev->born[i] : frame.index;

    if (label == PartLabel::armL || label == PartLabel::armR) {
      const PointD c = partition.torso.center;
      double best_d = -1.0;
      PointI hand{};
      for (const PointI& p : pixels) {
        const double d = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
        if (d > best_d) {
          best_d = d;
          hand = p;
        }
      }
      model.hands[label == PartLabel::armL ? 0 : 1] = hand;
    }
  }
  return model;
}

bool detect_starfish(const BodyPartModel& model, const tracker::TorsoDisc& torso) {
  if (!model.has(PartLabel::head) || !model.has(PartLabel::armL) || !model.has(PartLabel::armR)) return false;
  const double cx = torso.center.x, r = torso.radius;
  const bool left_out = model.get(PartLabel::armL).mu.x <= cx - 1.5 * r;
  const bool right_out = model.get(PartLabel::armR).mu.x >= cx + 1.5 * r;
  const bool head_up = model.get(PartLabel::head).mu.y < torso.center.y - r;
  return left_out && right_out && head_up;
}

}  // namespace hbpt::parts
