#include "amf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace amf {

Histogram Histogram::uniform(int bins, double lo, double hi) {
  if (bins < 2) throw Error("histogram needs at least 2 bins");
  if (!(hi > lo)) throw Error("histogram range is empty");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  return h;
}

std::int64_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::vector<double> Histogram::frequencies() const {
  std::vector<double> f(counts.size(), 0.0);
  const auto n = total();
  if (n == 0) return f;
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / n;
  return f;
}

std::size_t Histogram::bin_of(double v) const {
  const double lo = edges.front(), hi = edges.back();
  const auto b = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * bins()));
  return std::min(b, bins() - 1);
}

bool Histogram::add(double v) {
  if (!(v >= edges.front() && v <= edges.back())) return false;
  ++counts[bin_of(v)];
  return true;
}

std::size_t Histogram::mode() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::vector<double> masked_values(const Grid<double>& g, const RoiMask& mask) {
  require_same_shape(g.rows(), g.cols(), mask.rows(), mask.cols(), "mask");
  std::vector<double> v;
  for (Eigen::Index y = 0; y < g.rows(); ++y)
    for (Eigen::Index x = 0; x < g.cols(); ++x)
      if (mask(y, x)) v.push_back(g(y, x));
  return v;
}

std::vector<double> masked_angles(const AnisotropyMaps& maps, const RoiMask& mask) {
  require_same_shape(maps.height(), maps.width(), mask.rows(), mask.cols(), "mask");
  std::vector<double> v;
  for (Eigen::Index y = 0; y < maps.height(); ++y)
    for (Eigen::Index x = 0; x < maps.width(); ++x)
      if (mask(y, x) && maps.oriented(x, y)) v.push_back(maps.angle(y, x));
  return v;
}

FaHistogram fa_histogram(const AnisotropyMaps& maps, const RoiMask& mask, int bins) {
  const std::vector<double> fa = masked_values(maps.fa, mask);
  if (fa.empty()) throw Error("ROI mask is empty");
  FaHistogram out{Histogram::uniform(bins, 0.0, 1.0), 0.0, static_cast<std::int64_t>(fa.size())};
  std::int64_t iso = 0;
  for (double v : fa) {
    out.histogram.add(v);
    if (v <= maps.fa_cutoff) ++iso;
  }
  out.near_isotropic_fraction = static_cast<double>(iso) / static_cast<double>(fa.size());
  return out;
}

Histogram direction_histogram(const AnisotropyMaps& maps, const RoiMask& mask, int bins,
                              double fa_cutoff) {
  require_same_shape(maps.height(), maps.width(), mask.rows(), mask.cols(), "mask");
  Histogram h = Histogram::uniform(bins, 0.0, 180.0);
  for (Eigen::Index y = 0; y < maps.height(); ++y)
    for (Eigen::Index x = 0; x < maps.width(); ++x)
      if (mask(y, x) && maps.oriented(x, y) && maps.fa(y, x) > fa_cutoff)
        h.add(maps.angle(y, x));
  return h;
}

double mean(std::span<const double> v) {
  if (v.empty()) throw Error("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) throw Error("standard deviation needs at least 2 values");
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw Error("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> standardize(std::span<const double> v) {
  if (v.size() < 2) throw Error("standardize needs at least 2 values");
  const double m = mean(v), sd = sample_sd(v);
  if (!(sd > 0)) throw Error("degenerate distribution");
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return (x - m) / sd; });
  return out;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw Error("incomplete beta needs positive shape parameters");
  if (x <= 0) return 0;
  if (x >= 1) return 1;

  // Modified Lentz evaluation of the continued fraction, which converges
  // quickly for x < (a + 1) / (a + b + 2); the other side uses symmetry.
  if (x > (a + 1) / (a + b + 2)) return 1 - incomplete_beta(b, a, 1 - x);

  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);

  double f = 1, c = 1, d = 1 - (a + b) * x / (a + 1);
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  f = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1) * (a + m2));
    d = 1 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    f *= d * c;

    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1));
    d = 1 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1) < eps) break;
  }
  return std::exp(log_front) * f / a;
}

double student_t_two_sided(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0;
  if (t == 0) return 1;
  return std::clamp(incomplete_beta(df / 2, 0.5, df / (df + t * t)), 0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

struct Moments {
  double mean, var;
};

Moments moments(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, ss / static_cast<double>(v.size() - 1)};
}

}  // namespace

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error("t-test needs at least 2 values per sample");
  const Moments ma = moments(a), mb = moments(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double qa = ma.var / na, qb = mb.var / nb;
  const double se2 = qa + qb;

  TestResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  if (se2 == 0) {
    r.df = na + nb - 2;
    if (ma.mean == mb.mean) {
      r.statistic = 0;
      r.p_value = 1;
    } else {
      r.statistic = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
      r.p_value = 0;
    }
    return r;
  }
  r.statistic = (ma.mean - mb.mean) / std::sqrt(se2);
  r.df = se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1));
  r.p_value = student_t_two_sided(r.statistic, r.df);
  return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired samples differ in length");
  if (a.size() < 6) throw Error("sample too small for approximation");

  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] - a[i] != 0) d.push_back(b[i] - a[i]);
  if (d.empty()) throw Error("no signal");
  if (d.size() < 6) throw Error("sample too small for approximation");

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });

  double w_plus = 0, w_minus = 0, tie_term = 0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && std::abs(d[order[hi + 1]]) == std::abs(d[order[lo]])) ++hi;
    const double rank = (static_cast<double>(lo + hi) + 2) / 2;  // midrank, 1-based
    const double t = static_cast<double>(hi - lo + 1);
    tie_term += t * t * t - t;
    for (std::size_t k = lo; k <= hi; ++k) (d[order[k]] > 0 ? w_plus : w_minus) += rank;
    lo = hi + 1;
  }

  const double n = static_cast<double>(d.size());
  const double expected = n * (n + 1) / 4;
  const double variance = n * (n + 1) * (2 * n + 1) / 24 - tie_term / 48;

  TestResult r;
  r.n_a = r.n_b = d.size();
  r.statistic = std::min(w_plus, w_minus);
  const double z = (r.statistic - expected) / std::sqrt(variance);
  r.p_value = std::min(1.0, 2 * normal_cdf(z));
  return r;
}

}  // namespace amf
