#ifndef AMF_GRID_HPP
#define AMF_GRID_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace amf {

/// Row-major 2D raster. Indexed as grid(y, x): rows are image lines, y grows
/// downward, x grows to the right.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Grid<double>;
using BinaryImage = Grid<bool>;
using RoiMask = Grid<bool>;

/// Raised for invalid inputs and degenerate data. The message is the one the
/// CLI reports before exiting with status 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Quarter turn (counter-clockwise as displayed). Pixel (x, y) of a W x H
/// input lands at (y, W - 1 - x), so an axial direction t becomes t + 90
/// degrees (mod 180).
template <typename Derived>
Grid<typename Derived::Scalar> rot90(const Eigen::DenseBase<Derived>& g) {
  return g.transpose().colwise().reverse();
}

template <typename Derived>
Grid<typename Derived::Scalar> flip_horizontal(const Eigen::DenseBase<Derived>& g) {
  return g.rowwise().reverse();
}

template <typename Derived>
Grid<typename Derived::Scalar> flip_vertical(const Eigen::DenseBase<Derived>& g) {
  return g.colwise().reverse();
}

/// Pixel lookup with everything outside the raster reading as `outside`.
template <typename Derived>
typename Derived::Scalar at_or(const Eigen::DenseBase<Derived>& g, Eigen::Index y,
                               Eigen::Index x, typename Derived::Scalar outside) {
  if (y < 0 || x < 0 || y >= g.rows() || x >= g.cols()) return outside;
  return g(y, x);
}

inline void require_same_shape(Eigen::Index rows_a, Eigen::Index cols_a, Eigen::Index rows_b,
                               Eigen::Index cols_b, const char* what) {
  if (rows_a != rows_b || cols_a != cols_b)
    throw Error(std::string(what) + ": dimension mismatch (" + std::to_string(cols_a) + "x" +
                std::to_string(rows_a) + " vs " + std::to_string(cols_b) + "x" +
                std::to_string(rows_b) + ")");
}

}  // namespace amf

#endif  // AMF_GRID_HPP
