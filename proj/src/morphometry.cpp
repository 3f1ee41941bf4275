#include "amf/morphometry.hpp"

#include <array>
#include <utility>
#include <vector>

namespace amf {

CellCounts count_cells(const BinaryImage& img) {
  const Eigen::Index h = img.rows(), w = img.cols();
  auto white = [&](Eigen::Index y, Eigen::Index x) { return at_or(img, y, x, false); };

  CellCounts c;
  c.squares = img.count();
  // Horizontal edges sit on grid line y between rows y-1 and y.
  for (Eigen::Index y = 0; y <= h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      if (white(y - 1, x) || white(y, x)) ++c.edges;
  // Vertical edges sit on grid line x between columns x-1 and x.
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x <= w; ++x)
      if (white(y, x - 1) || white(y, x)) ++c.edges;
  for (Eigen::Index y = 0; y <= h; ++y)
    for (Eigen::Index x = 0; x <= w; ++x)
      if (white(y - 1, x - 1) || white(y - 1, x) || white(y, x - 1) || white(y, x)) ++c.vertices;
  return c;
}

namespace {

using Offsets = std::vector<std::pair<int, int>>;

const Offsets kFour = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
const Offsets kEight = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

// Flood fills every pixel of `target` value reachable from (y0, x0) and
// marks it in `seen`.
void flood(const Grid<bool>& img, bool target, const Offsets& nbrs, Grid<bool>& seen,
           Eigen::Index y0, Eigen::Index x0) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack{{y0, x0}};
  seen(y0, x0) = true;
  while (!stack.empty()) {
    auto [y, x] = stack.back();
    stack.pop_back();
    for (auto [dy, dx] : nbrs) {
      const Eigen::Index ny = y + dy, nx = x + dx;
      if (ny < 0 || nx < 0 || ny >= img.rows() || nx >= img.cols()) continue;
      if (seen(ny, nx) || img(ny, nx) != target) continue;
      seen(ny, nx) = true;
      stack.emplace_back(ny, nx);
    }
  }
}

std::int64_t count_components(const Grid<bool>& img, bool target, const Offsets& nbrs,
                              Grid<bool>& seen) {
  std::int64_t n = 0;
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x)
      if (img(y, x) == target && !seen(y, x)) {
        flood(img, target, nbrs, seen, y, x);
        ++n;
      }
  return n;
}

}  // namespace

std::int64_t euler_oracle(const BinaryImage& img) {
  // One-pixel black frame so that all outside background is one component.
  Grid<bool> padded = Grid<bool>::Constant(img.rows() + 2, img.cols() + 2, false);
  padded.block(1, 1, img.rows(), img.cols()) = img;

  Grid<bool> seen = Grid<bool>::Constant(padded.rows(), padded.cols(), false);
  const std::int64_t components = count_components(padded, true, kEight, seen);

  seen.setConstant(false);
  flood(padded, false, kFour, seen, 0, 0);
  const std::int64_t holes = count_components(padded, false, kFour, seen);
  return components - holes;
}

std::int64_t perimeter_oracle(const BinaryImage& img) {
  std::int64_t n = 0;
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      if (!img(y, x)) continue;
      for (auto [dy, dx] : kFour)
        if (!at_or(img, y + dy, x + dx, false)) ++n;
    }
  return n;
}

}  // namespace amf
