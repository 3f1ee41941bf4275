#include "amf/amf_field.hpp"

#include <cmath>
#include <string>

#include "amf/parallel.hpp"

namespace amf {

const char* to_string(Functional f) {
  switch (f) {
    case Functional::area: return "area";
    case Functional::perimeter: return "perimeter";
    case Functional::euler: return "euler";
  }
  return "?";
}

Functional parse_functional(const std::string& name) {
  for (Functional f : kFunctionals)
    if (name == to_string(f)) return f;
  throw Error("unknown functional '" + name + "' (expected area, perimeter or euler)");
}

ThresholdSet::ThresholdSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("threshold set is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw Error("threshold is not finite");
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw Error("thresholds must be strictly increasing");
  }
}

BinaryImage threshold_image(const GrayImage& g, double t) {
  if (!std::isfinite(t)) throw Error("threshold is not finite");
  return g >= t;
}

ThresholdSet default_thresholds(const GrayImage& g, int n) {
  if (n < 1) throw Error("threshold count must be positive");
  if (g.size() == 0) throw Error("degenerate gray range");
  const double lo = g.minCoeff(), hi = g.maxCoeff();
  if (!(hi > lo)) throw Error("degenerate gray range");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) t[static_cast<std::size_t>(i - 1)] = lo + i * (hi - lo) / (n + 1);
  return ThresholdSet(std::move(t));
}

WindowCells::WindowCells(int size)
    : pixel(size, size), horizontal_edge(size + 1, size), vertical_edge(size, size + 1),
      vertex(size + 1, size + 1) {}

void WindowCells::load(const BinaryImage& b, Eigen::Index x, Eigen::Index y) {
  const int n = size(), r = n / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pixel(i, j) = at_or(b, y - r + i, x - r + j, false) ? 1.0 : 0.0;

  auto on = [&](int i, int j) { return i >= 0 && j >= 0 && i < n && j < n && pixel(i, j) > 0; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i) {
      horizontal_edge(j, i) = (on(j - 1, i) || on(j, i)) ? 1.0 : 0.0;
      vertical_edge(i, j) = (on(i, j - 1) || on(i, j)) ? 1.0 : 0.0;
    }
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertex(j, i) = (on(j - 1, i - 1) || on(j - 1, i) || on(j, i - 1) || on(j, i)) ? 1.0 : 0.0;
}

void WindowCells::load(const BinaryImage& window) {
  if (window.rows() != size() || window.cols() != size())
    throw Error("window size does not match kernel size");
  const int r = size() / 2;
  load(window, r, r);
}

WeightedCounts WindowCells::weigh(const CellWeights& w) const {
  return {(pixel * w.pixel).sum(),
          (horizontal_edge * w.horizontal_edge).sum() + (vertical_edge * w.vertical_edge).sum(),
          (vertex * w.vertex).sum()};
}

WeightedCounts weighted_counts(const BinaryImage& window, const CellWeights& w) {
  WindowCells cells(w.size());
  cells.load(window);
  return cells.weigh(w);
}

namespace {

DirectionalAmf directional(const WindowCells& cells, const CellWeightBank& bank) {
  DirectionalAmf m;
  for (int d = 0; d < 4; ++d) m.col(d) = functionals_from_counts(cells.weigh(bank[d]));
  return m;
}

void check_bank(const CellWeightBank& bank) {
  for (const auto& w : bank)
    if (w.size() != bank[0].size()) throw Error("kernel bank mixes window sizes");
}

}  // namespace

DirectionalAmf amf_at_pixel(const BinaryImage& b, Eigen::Index x, Eigen::Index y,
                            const CellWeightBank& bank) {
  if (x < 0 || y < 0 || x >= b.cols() || y >= b.rows()) throw Error("pixel outside image");
  if (!b(y, x)) throw Error("centre pixel is black");
  check_bank(bank);
  WindowCells cells(bank[0].size());
  cells.load(b, x, y);
  return directional(cells, bank);
}

MfTriple window_mf(const BinaryImage& b, Eigen::Index x, Eigen::Index y, int size) {
  const int r = size / 2;
  BinaryImage crop(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) crop(i, j) = at_or(b, y - r + i, x - r + j, false);
  return minkowski_functionals(crop);
}

AmfField compute_amf_field(const GrayImage& g, const ThresholdSet& ts, const CellWeightBank& bank,
                           unsigned threads) {
  if (g.size() == 0) throw Error("empty image");
  if (!g.allFinite()) throw Error("image contains non-finite gray values");
  check_bank(bank);

  AmfField field;
  field.width = g.cols();
  field.height = g.rows();
  field.planes.resize(ts.size());
  for (std::size_t t = 0; t < ts.size(); ++t) {
    field.planes[t].threshold = ts[t];
    field.planes[t].white = threshold_image(g, ts[t]);
    field.planes[t].values.assign(static_cast<std::size_t>(g.size()), DirectionalAmf::Zero());
  }

  // One work item per (threshold, row); each writes only its own row.
  const auto rows = static_cast<std::size_t>(g.rows());
  parallel_for(ts.size() * rows, threads, [&](std::size_t item) {
    AmfPlane& plane = field.planes[item / rows];
    const auto y = static_cast<Eigen::Index>(item % rows);
    WindowCells cells(bank[0].size());
    for (Eigen::Index x = 0; x < g.cols(); ++x) {
      if (!plane.white(y, x)) continue;
      cells.load(plane.white, x, y);
      plane.values[static_cast<std::size_t>(y * g.cols() + x)] = directional(cells, bank);
    }
  });
  return field;
}

}  // namespace amf
