#ifndef AMF_MORPHOMETRY_HPP
#define AMF_MORPHOMETRY_HPP

#include <cstdint>

#include "amf/grid.hpp"

namespace amf {

/// Distinct cells of the union of closed unit squares placed at the white
/// pixels. Shared edges and vertices are counted once.
struct CellCounts {
  std::int64_t squares = 0;
  std::int64_t edges = 0;
  std::int64_t vertices = 0;

  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

/// The three 2D Minkowski functionals of a binary pattern.
struct MfTriple {
  std::int64_t area = 0;
  std::int64_t perimeter = 0;
  std::int64_t euler = 0;

  friend bool operator==(const MfTriple&, const MfTriple&) = default;
  MfTriple& operator+=(const MfTriple& o) {
    area += o.area;
    perimeter += o.perimeter;
    euler += o.euler;
    return *this;
  }
};

/// Pixels outside the raster are black; edges and vertices lying on the image
/// border are counted like any other.
CellCounts count_cells(const BinaryImage& img);

/// area = n_s, perimeter = 2 n_e - 4 n_s, euler = n_s - n_e + n_v.
constexpr MfTriple minkowski_functionals(const CellCounts& c) {
  return {c.squares, -4 * c.squares + 2 * c.edges, c.squares - c.edges + c.vertices};
}

inline MfTriple minkowski_functionals(const BinaryImage& img) {
  return minkowski_functionals(count_cells(img));
}

// Independent reference implementations. They share no code with
// count_cells and are used to cross-check it.

/// Foreground components (8-connected) minus enclosed background components
/// (4-connected, not touching the outside).
std::int64_t euler_oracle(const BinaryImage& img);

/// Number of white/black 4-neighbour adjacencies, the outside being black.
std::int64_t perimeter_oracle(const BinaryImage& img);

}  // namespace amf

#endif  // AMF_MORPHOMETRY_HPP
