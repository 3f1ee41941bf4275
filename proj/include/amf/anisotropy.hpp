#ifndef AMF_ANISOTROPY_HPP
#define AMF_ANISOTROPY_HPP

#include <cmath>
#include <limits>
#include <optional>

#include "amf/amf_field.hpp"
#include "amf/kernels.hpp"

namespace amf {

inline constexpr double kDefaultFaCutoff = 0.03;
inline constexpr double kFaTieTolerance = 1e-12;

template <typename Scalar>
using Octet = Eigen::Matrix<Scalar, 2, 8>;

/// Each directional magnitude m_t becomes the point m_t (cos t, sin t) and its
/// reflection through the origin, so the octet is centred by construction.
template <typename Scalar>
Octet<Scalar> mirror_points(const Eigen::Matrix<Scalar, 4, 1>& magnitudes) {
  Octet<Scalar> p;
  for (int d = 0; d < 4; ++d) {
    const auto [c, s] = direction_vector<Scalar>(kDirections[static_cast<std::size_t>(d)]);
    p.col(d) << magnitudes(d) * c, magnitudes(d) * s;
    p.col(d + 4) = -p.col(d);
  }
  return p;
}

template <typename Scalar>
struct EigenPair {
  Scalar lambda1 = 0;
  Scalar lambda2 = 0;
  Scalar principal_angle = 0;  // degrees in [0, 180)
  bool degenerate = false;     // second-moment matrix is zero
};

/// Reduce an axial angle in degrees to [0, 180).
template <typename Scalar>
Scalar axial_degrees(Scalar deg) {
  Scalar a = std::fmod(deg, Scalar(180));
  if (a < 0) a += 180;
  if (a >= 180) a -= 180;
  return a;
}

/// Closed-form eigen-decomposition of S = (1/8) sum p p^T for a centred octet.
template <typename Scalar>
EigenPair<Scalar> pca2(const Octet<Scalar>& points) {
  const Eigen::Matrix<Scalar, 2, 2> s = points * points.transpose() / Scalar(8);
  const Scalar a = s(0, 0), b = s(0, 1), c = s(1, 1);

  EigenPair<Scalar> e;
  if (a == 0 && b == 0 && c == 0) {
    e.degenerate = true;
    return e;
  }
  const Scalar mean = (a + c) / 2;
  const Scalar radius = std::hypot((a - c) / 2, b);
  e.lambda1 = mean + radius;
  e.lambda2 = std::max(Scalar(0), mean - radius);
  e.principal_angle =
      axial_degrees(Scalar(0.5) * std::atan2(2 * b, a - c) * Scalar(180) / Scalar(M_PI));
  return e;
}

/// |l1 - l2| / sqrt(l1^2 + l2^2); 0 when both eigenvalues vanish.
template <typename Scalar>
Scalar fractional_anisotropy(const EigenPair<Scalar>& e) {
  const Scalar norm = std::hypot(e.lambda1, e.lambda2);
  if (norm == 0) return 0;
  return std::min(Scalar(1), std::abs(e.lambda1 - e.lambda2) / norm);
}

struct AnisotropyResult {
  double fa = 0;
  double angle = 0;  // degrees in [0, 180), meaningful only when oriented
  bool oriented = false;
};

/// FA and principal direction of four directional magnitudes (0, 45, 90, 135).
AnisotropyResult anisotropy(const Eigen::Vector4d& magnitudes,
                            double fa_cutoff = kDefaultFaCutoff);

struct AnisotropyMaps {
  Grid<double> fa;             // 0 on background
  Grid<double> angle;          // NaN where not oriented
  Grid<int> source_threshold;  // index of the max-FA plane, -1 if never white
  double fa_cutoff = kDefaultFaCutoff;

  Eigen::Index width() const { return fa.cols(); }
  Eigen::Index height() const { return fa.rows(); }
  bool oriented(Eigen::Index x, Eigen::Index y) const { return !std::isnan(angle(y, x)); }
  std::optional<double> angle_at(Eigen::Index x, Eigen::Index y) const {
    if (!oriented(x, y)) return std::nullopt;
    return angle(y, x);
  }
};

/// Per pixel, the largest FA over all thresholds at which the pixel is white
/// (lowest threshold index on ties) and the direction from that threshold.
/// Only pixels whose FA exceeds the cutoff get a direction.
AnisotropyMaps anisotropy_for_functional(const AmfField& field, Functional functional,
                                         double fa_cutoff = kDefaultFaCutoff);

}  // namespace amf

#endif  // AMF_ANISOTROPY_HPP
