#ifndef AMF_KERNELS_HPP
#define AMF_KERNELS_HPP

#include <array>
#include <cmath>

#include "amf/grid.hpp"

namespace amf {

/// The four kernel directions, in degrees.
inline constexpr std::array<double, 4> kDirections = {0.0, 45.0, 90.0, 135.0};

/// Unit vector (cos t, sin t) for an angle in degrees, measured from +x
/// toward +y (downward). Multiples of 45 degrees are returned exactly so
/// that kernels at 0/90 and 45/135 are exact quarter turns of each other.
template <typename Scalar = double>
std::array<Scalar, 2> direction_vector(double degrees) {
  const double turns = degrees / 45.0;
  if (turns == std::round(turns)) {
    const Scalar h = std::sqrt(Scalar(0.5));
    static const std::array<std::array<Scalar, 2>, 8> table = {{{1, 0},
                                                                {h, h},
                                                                {0, 1},
                                                                {-h, h},
                                                                {-1, 0},
                                                                {-h, -h},
                                                                {0, -1},
                                                                {h, -h}}};
    const long k = ((static_cast<long>(turns) % 8) + 8) % 8;
    return table[static_cast<std::size_t>(k)];
  }
  const double r = degrees * M_PI / 180.0;
  return {Scalar(std::cos(r)), Scalar(std::sin(r))};
}

template <typename Scalar = double>
struct OrientedKernel {
  double angle = 0;
  Grid<Scalar> weights;  // size x size, peak 1 at the centre

  int size() const { return static_cast<int>(weights.rows()); }
  int radius() const { return size() / 2; }
};

/// Peak-normalised elongated Gaussian. The weight at offset (dx, dy) from the
/// centre is exp(-(u^2 / 2 sM^2 + v^2 / 2 sm^2)) where u is the offset along
/// the kernel direction and v across it.
template <typename Scalar = double>
OrientedKernel<Scalar> make_skewed_gaussian(int size, double angle, Scalar sigma_major,
                                            Scalar sigma_minor) {
  if (size < 3 || size % 2 == 0) throw Error("kernel size must be odd and >= 3");
  if (!(sigma_major > 0) || !(sigma_minor > 0)) throw Error("kernel sigmas must be positive");

  const auto [c, s] = direction_vector<Scalar>(angle);
  const Scalar a = Scalar(1) / (2 * sigma_major * sigma_major);
  const Scalar b = Scalar(1) / (2 * sigma_minor * sigma_minor);
  const int r = size / 2;

  OrientedKernel<Scalar> k{angle, Grid<Scalar>(size, size)};
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const Scalar u = dx * c + dy * s;
      const Scalar v = -dx * s + dy * c;
      k.weights(dy + r, dx + r) = std::exp(-(a * u * u + b * v * v));
    }
  return k;
}

/// Weights attached to every cell of a kernel-sized window.
///
/// Cells are indexed on the window's (size+1) x (size+1) lattice of grid
/// lines: horizontal_edge(j, i) is the edge on line j above pixel row j in
/// column i, vertical_edge(i, j) the edge on line j left of pixel column j in
/// row i, and vertex(j, i) the lattice point at line j, column line i.
struct CellWeights {
  Grid<double> pixel;            // size x size
  Grid<double> horizontal_edge;  // (size+1) x size
  Grid<double> vertical_edge;    // size x (size+1)
  Grid<double> vertex;           // (size+1) x (size+1)

  int size() const { return static_cast<int>(pixel.rows()); }

  /// Edge weight is the mean of the two flanking kernel values, vertex weight
  /// the mean of the four surrounding ones. Kernel values beyond the grid
  /// count as 0 while the divisors stay 2 and 4.
  static CellWeights from_kernel(const Grid<double>& kernel);

  /// Every pixel, edge and vertex weighted 1: the plain square window.
  static CellWeights uniform(int size);
};

using CellWeightBank = std::array<CellWeights, 4>;

struct KernelConfig {
  int size = 5;
  double sigma_major = 2.0;
  double sigma_minor = 0.5;
};

/// The 0, 45, 90 and 135 degree kernels sharing one size and sigma pair.
class KernelBank {
public:
  explicit KernelBank(const KernelConfig& cfg = {});

  const KernelConfig& config() const { return cfg_; }
  int size() const { return cfg_.size; }
  const OrientedKernel<double>& kernel(int direction) const { return kernels_[direction]; }
  const std::array<OrientedKernel<double>, 4>& kernels() const { return kernels_; }
  const CellWeightBank& cell_weights() const { return cells_; }

private:
  KernelConfig cfg_;
  std::array<OrientedKernel<double>, 4> kernels_;
  CellWeightBank cells_;
};

/// Four identical uniform tables; every direction then reports the
/// unweighted window functionals.
CellWeightBank uniform_bank(int size);

}  // namespace amf

#endif  // AMF_KERNELS_HPP
