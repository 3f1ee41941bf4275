#include "amf/anisotropy.hpp"

namespace amf {

AnisotropyResult anisotropy(const Eigen::Vector4d& magnitudes, double fa_cutoff) {
  const EigenPair<double> e = pca2<double>(mirror_points<double>(magnitudes));
  AnisotropyResult r;
  r.fa = fractional_anisotropy(e);
  r.angle = e.principal_angle;
  r.oriented = !e.degenerate && r.fa > fa_cutoff;
  return r;
}

AnisotropyMaps anisotropy_for_functional(const AmfField& field, Functional functional,
                                         double fa_cutoff) {
  if (!(fa_cutoff >= 0) || !(fa_cutoff < 1)) throw Error("FA cutoff must lie in [0, 1)");
  const Eigen::Index h = field.height, w = field.width;
  const int row = static_cast<int>(functional);

  AnisotropyMaps maps;
  maps.fa_cutoff = fa_cutoff;
  maps.fa = Grid<double>::Zero(h, w);
  maps.angle = Grid<double>::Constant(h, w, std::numeric_limits<double>::quiet_NaN());
  maps.source_threshold = Grid<int>::Constant(h, w, -1);

  Grid<double> best_angle = Grid<double>::Zero(h, w);
  for (std::size_t t = 0; t < field.planes.size(); ++t) {
    const AmfPlane& plane = field.planes[t];
    for (Eigen::Index y = 0; y < h; ++y)
      for (Eigen::Index x = 0; x < w; ++x) {
        if (!plane.white(y, x)) continue;
        const auto& m = plane.values[static_cast<std::size_t>(y * w + x)];
        const AnisotropyResult r = anisotropy(m.row(row).transpose(), fa_cutoff);
        // Lowest threshold index wins ties, including ties blurred by rounding.
        if (maps.source_threshold(y, x) < 0 || r.fa > maps.fa(y, x) + kFaTieTolerance) {
          maps.fa(y, x) = r.fa;
          best_angle(y, x) = r.angle;
          maps.source_threshold(y, x) = static_cast<int>(t);
        }
      }
  }
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      if (maps.source_threshold(y, x) >= 0 && maps.fa(y, x) > fa_cutoff)
        maps.angle(y, x) = best_angle(y, x);
  return maps;
}

}  // namespace amf
