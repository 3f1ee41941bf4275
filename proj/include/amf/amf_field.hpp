#ifndef AMF_AMF_FIELD_HPP
#define AMF_AMF_FIELD_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "amf/grid.hpp"
#include "amf/kernels.hpp"
#include "amf/morphometry.hpp"

namespace amf {

enum class Functional { area = 0, perimeter = 1, euler = 2 };

inline constexpr std::array<Functional, 3> kFunctionals = {Functional::area, Functional::perimeter,
                                                          Functional::euler};

const char* to_string(Functional f);
Functional parse_functional(const std::string& name);

/// Rows are functionals (area, perimeter, euler); columns are the kernel
/// directions 0, 45, 90, 135 degrees.
using DirectionalAmf = Eigen::Matrix<double, 3, 4>;

struct WeightedCounts {
  double squares = 0;
  double edges = 0;
  double vertices = 0;
};

/// Strictly increasing, non-empty list of gray-level cut points.
class ThresholdSet {
public:
  explicit ThresholdSet(std::vector<double> values);
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

private:
  std::vector<double> values_;
};

/// White where gray >= t.
BinaryImage threshold_image(const GrayImage& g, double t);

/// n thresholds evenly spaced strictly inside [min, max].
ThresholdSet default_thresholds(const GrayImage& g, int n);

/// Presence flags for every cell of one window, shared by all directions.
struct WindowCells {
  Grid<double> pixel, horizontal_edge, vertical_edge, vertex;

  explicit WindowCells(int size = 5);
  int size() const { return static_cast<int>(pixel.rows()); }

  /// Fill from the size x size crop of `b` centred at (x, y); pixels outside
  /// the image are black.
  void load(const BinaryImage& b, Eigen::Index x, Eigen::Index y);
  /// Fill from a window-sized binary crop.
  void load(const BinaryImage& window);

  WeightedCounts weigh(const CellWeights& w) const;
};

/// Weighted cell sums of a window-sized binary crop.
WeightedCounts weighted_counts(const BinaryImage& window, const CellWeights& w);

/// Area, perimeter and Euler values from weighted cell sums.
/// Sums that cancel to within rounding are returned as exactly 0, otherwise
/// FA would see direction in the noise.
inline Eigen::Vector3d functionals_from_counts(const WeightedCounts& c) {
  constexpr double eps = 16 * std::numeric_limits<double>::epsilon();
  auto snap = [](double v, double scale) { return std::abs(v) <= eps * scale ? 0.0 : v; };
  return {c.squares, snap(-4 * c.squares + 2 * c.edges, 4 * c.squares + 2 * c.edges),
          snap(c.squares - c.edges + c.vertices, c.squares + c.edges + c.vertices)};
}

/// Directional functionals of the window centred on white pixel (x, y).
DirectionalAmf amf_at_pixel(const BinaryImage& b, Eigen::Index x, Eigen::Index y,
                            const CellWeightBank& bank);
inline DirectionalAmf amf_at_pixel(const BinaryImage& b, Eigen::Index x, Eigen::Index y,
                                   const KernelBank& bank) {
  return amf_at_pixel(b, x, y, bank.cell_weights());
}

/// Unweighted Minkowski functionals of the size x size crop centred at (x, y).
MfTriple window_mf(const BinaryImage& b, Eigen::Index x, Eigen::Index y, int size);

/// One binarisation and the directional values at each of its white pixels.
struct AmfPlane {
  double threshold = 0;
  BinaryImage white;
  std::vector<DirectionalAmf> values;  // row-major, meaningful where white

  std::optional<DirectionalAmf> at(Eigen::Index x, Eigen::Index y) const {
    if (!white(y, x)) return std::nullopt;
    return values[static_cast<std::size_t>(y * white.cols() + x)];
  }
};

struct AmfField {
  Eigen::Index width = 0, height = 0;
  std::vector<AmfPlane> planes;  // one per threshold, increasing
};

/// Per-threshold, per-white-pixel directional functionals. `threads` = 0
/// uses every hardware thread; the result is identical for any value.
AmfField compute_amf_field(const GrayImage& g, const ThresholdSet& ts, const CellWeightBank& bank,
                           unsigned threads = 0);
inline AmfField compute_amf_field(const GrayImage& g, const ThresholdSet& ts,
                                  const KernelBank& bank, unsigned threads = 0) {
  return compute_amf_field(g, ts, bank.cell_weights(), threads);
}

}  // namespace amf

#endif  // AMF_AMF_FIELD_HPP
