#include "amf/kernels.hpp"

namespace amf {

CellWeights CellWeights::from_kernel(const Grid<double>& kernel) {
  const Eigen::Index n = kernel.rows();
  auto k = [&](Eigen::Index y, Eigen::Index x) { return at_or(kernel, y, x, 0.0); };

  CellWeights w;
  w.pixel = kernel;
  w.horizontal_edge.resize(n + 1, n);
  w.vertical_edge.resize(n, n + 1);
  w.vertex.resize(n + 1, n + 1);
  for (Eigen::Index j = 0; j <= n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      w.horizontal_edge(j, i) = (k(j - 1, i) + k(j, i)) / 2;
      w.vertical_edge(i, j) = (k(i, j - 1) + k(i, j)) / 2;
    }
  for (Eigen::Index j = 0; j <= n; ++j)
    for (Eigen::Index i = 0; i <= n; ++i)
      w.vertex(j, i) = (k(j - 1, i - 1) + k(j - 1, i) + k(j, i - 1) + k(j, i)) / 4;
  return w;
}

CellWeights CellWeights::uniform(int size) {
  return {Grid<double>::Ones(size, size), Grid<double>::Ones(size + 1, size),
          Grid<double>::Ones(size, size + 1), Grid<double>::Ones(size + 1, size + 1)};
}

KernelBank::KernelBank(const KernelConfig& cfg) : cfg_(cfg) {
  for (std::size_t d = 0; d < 4; ++d) {
    kernels_[d] = make_skewed_gaussian<double>(cfg.size, kDirections[d], cfg.sigma_major,
                                               cfg.sigma_minor);
    cells_[d] = CellWeights::from_kernel(kernels_[d].weights);
  }
}

CellWeightBank uniform_bank(int size) {
  if (size < 1 || size % 2 == 0) throw Error("kernel size must be odd");
  const CellWeights u = CellWeights::uniform(size);
  return {u, u, u, u};
}

}  // namespace amf
