#include "hbpt/blobmodel.hpp"

#include <cmath>
#include <numbers>

namespace hbpt::blob {

namespace {
constexpr const char* kNames[] = {"head", "torso", "armL", "armR", "leg1", "leg2", "leg3", "leg4"};
}

const char* to_string(PartLabel label) { return kNames[static_cast<int>(label)]; }

std::optional<PartLabel> part_from_string(std::string_view name) {
  for (PartLabel p : kAllParts) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

Eigen2 eigen(const Sym2& k) {
  const double half_tr = 0.5 * (k.xx + k.yy);
  const double half_diff = 0.5 * (k.xx - k.yy);
  const double s = std::hypot(half_diff, k.xy);
  Eigen2 e;
  e.major = half_tr + s;
  // det / major avoids cancellation for strongly anisotropic matrices.
  e.minor = e.major > 0.0 ? k.det() / e.major : half_tr - s;
  e.angle = 0.5 * std::atan2(2.0 * k.xy, k.xx - k.yy);
  if (e.angle <= -std::numbers::pi / 2) e.angle += std::numbers::pi;
  return e;
}

GaussianBlob fit_blob(std::span<const PointI> pixels, const Frame& frame, PartLabel label, double eps_reg) {
  if (pixels.empty()) throw Error(ErrorKind::empty_cluster, std::string("no pixels for ") + to_string(label));
  std::int64_t sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::int64_t cy = 0, cu = 0, cv = 0;
  for (const PointI& p : pixels) {
    sx += p.x;
    sy += p.y;
    sxx += static_cast<std::int64_t>(p.x) * p.x;
    syy += static_cast<std::int64_t>(p.y) * p.y;
    sxy += static_cast<std::int64_t>(p.x) * p.y;
    const Yuv& c = frame.at(p.x, p.y);
    cy += c.y;
    cu += c.u;
    cv += c.v;
  }
  const auto n = static_cast<std::int64_t>(pixels.size());
  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;

  GaussianBlob b;
  b.label = label;
  b.area = n;
  b.mu = {static_cast<double>(sx) / nd, static_cast<double>(sy) / nd};
  // Central moments from exact integer numerators: (n*Sxx - Sx^2) / n^2.
  b.K = {static_cast<double>(n * sxx - sx * sx) / n2, static_cast<double>(n * sxy - sx * sy) / n2,
         static_cast<double>(n * syy - sy * sy) / n2};
  b.color_mean = {static_cast<double>(cy) / nd, static_cast<double>(cu) / nd, static_cast<double>(cv) / nd};

  if (b.K.xy == 0.0) {
    b.K.xx = std::max(b.K.xx, eps_reg);
    b.K.yy = std::max(b.K.yy, eps_reg);
  } else {
    const Eigen2 e = eigen(b.K);
    if (e.minor < eps_reg) {
      const double l1 = std::max(e.major, eps_reg), l2 = std::max(e.minor, eps_reg);
      const double c = std::cos(e.angle), s = std::sin(e.angle);
      b.K = {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
    }
  }
  return b;
}

double blob_density(const GaussianBlob& blob, PointD o) {
  const double det = blob.K.det();
  const double dx = o.x - blob.mu.x, dy = o.y - blob.mu.y;
  const double q = (blob.K.yy * dx * dx - 2.0 * blob.K.xy * dx * dy + blob.K.xx * dy * dy) / det;
  return std::exp(-0.5 * q) / (std::pow(2.0 * std::numbers::pi, blob.m / 2.0) * std::sqrt(det));
}

Ellipse blob_ellipse(const GaussianBlob& blob, double k) {
  const Eigen2 e = eigen(blob.K);
  return {blob.mu, k * std::sqrt(std::max(e.major, 0.0)), k * std::sqrt(std::max(e.minor, 0.0)), e.angle};
}

}  // namespace hbpt::blob
