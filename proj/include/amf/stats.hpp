#ifndef AMF_STATS_HPP
#define AMF_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "amf/anisotropy.hpp"
#include "amf/grid.hpp"

namespace amf {

/// Fixed-range histogram; the last bin is closed on the right.
struct Histogram {
  std::vector<double> edges;          // bins + 1 increasing edges
  std::vector<std::int64_t> counts;   // one per bin

  static Histogram uniform(int bins, double lo, double hi);

  std::size_t bins() const { return counts.size(); }
  std::int64_t total() const;
  bool empty() const { return total() == 0; }
  /// counts / total, all zero for an empty histogram.
  std::vector<double> frequencies() const;
  /// Values outside [lo, hi] are ignored; returns whether v was binned.
  bool add(double v);
  std::size_t bin_of(double v) const;
  std::size_t mode() const;
};

struct FaHistogram {
  Histogram histogram;
  double near_isotropic_fraction = 0;  // share of masked pixels with fa <= cutoff
  std::int64_t pixels = 0;
};

/// FA values of the masked pixels over [0, 1].
FaHistogram fa_histogram(const AnisotropyMaps& maps, const RoiMask& mask, int bins = 50);

/// Directions over [0, 180) of the masked pixels with fa > fa_cutoff. An ROI
/// with no such pixel yields an empty histogram rather than an error.
Histogram direction_histogram(const AnisotropyMaps& maps, const RoiMask& mask, int bins = 18,
                              double fa_cutoff = kDefaultFaCutoff);

/// Values of `g` where `mask` is set, in row-major order.
std::vector<double> masked_values(const Grid<double>& g, const RoiMask& mask);
/// Directions of the oriented masked pixels, in row-major order.
std::vector<double> masked_angles(const AnisotropyMaps& maps, const RoiMask& mask);

double mean(std::span<const double> v);
/// Sample (n - 1) standard deviation.
double sample_sd(std::span<const double> v);
/// Linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> v, double q);

/// Shift and scale to zero mean and unit sample standard deviation.
std::vector<double> standardize(std::span<const double> v);

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  double df = 0;  // Welch degrees of freedom; 0 for rank tests
  std::size_t n_a = 0, n_b = 0;
};

/// Two-sided Welch t-test. When both variances vanish, equal means give
/// t = 0, p = 1 and different means give t = +-inf, p = 0.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Two-sided paired Wilcoxon signed-rank test on b - a with the normal
/// approximation and tie correction. statistic is min(W+, W-).
TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Regularised incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);
/// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided(double t, double df);
double normal_cdf(double z);

}  // namespace amf

#endif  // AMF_STATS_HPP
