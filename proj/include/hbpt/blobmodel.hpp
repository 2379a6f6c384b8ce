#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "hbpt/types.hpp"

namespace hbpt::blob {

enum class PartLabel { head, torso, armL, armR, leg1, leg2, leg3, leg4 };

inline constexpr std::array<PartLabel, 8> kAllParts = {PartLabel::head, PartLabel::torso, PartLabel::armL,
                                                       PartLabel::armR, PartLabel::leg1,  PartLabel::leg2,
                                                       PartLabel::leg3, PartLabel::leg4};

const char* to_string(PartLabel label);
std::optional<PartLabel> part_from_string(std::string_view name);

inline constexpr double kEpsReg = 0.25;

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  friend bool operator==(const Sym2&, const Sym2&) = default;

  double det() const { return xx * yy - xy * xy; }
};

struct Eigen2 {
  double major = 0.0;  // larger eigenvalue
  double minor = 0.0;
  double angle = 0.0;  // direction of the major eigenvector, in (-pi/2, pi/2]
};

/// Closed-form eigen-decomposition; the angle is 0 for isotropic matrices.
Eigen2 eigen(const Sym2& k);

struct GaussianBlob {
  PointD mu;
  Sym2 K;
  int m = 2;
  std::array<double, 3> color_mean{};  // Y, U, V
  long long area = 0;
  PartLabel label = PartLabel::torso;
};

/// Centroid, second central moments (eigenvalues floored at eps_reg) and mean
/// color of a pixel cluster.
GaussianBlob fit_blob(std::span<const PointI> pixels, const Frame& frame, PartLabel label, double eps_reg = kEpsReg);

/// exp(-(o-mu)^T K^-1 (o-mu) / 2) / ((2 pi)^(m/2) |K|^(1/2)) with m = 2.
double blob_density(const GaussianBlob& blob, PointD o);

struct Ellipse {
  PointD center;
  double a = 0.0;  // semi-major
  double b = 0.0;  // semi-minor
  double angle = 0.0;
};

/// Semi-axes k*sqrt(lambda) along K's eigenvectors.
Ellipse blob_ellipse(const GaussianBlob& blob, double k = 2.0);

}  // namespace hbpt::blob
