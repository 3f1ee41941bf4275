#include "amf/features.hpp"

#include <cmath>

#include "amf/parallel.hpp"
#include "amf/stats.hpp"

namespace amf {

ThresholdSet AnalysisConfig::thresholds_for(const GrayImage& g) const {
  if (!thresholds.empty()) return ThresholdSet(thresholds);
  return default_thresholds(g, threshold_count);
}

Analysis analyze(const GrayImage& g, const AnalysisConfig& cfg) {
  const KernelBank bank(cfg.kernel);
  Analysis a{cfg.thresholds_for(g), {}};
  const AmfField field = compute_amf_field(g, a.thresholds, bank, cfg.threads);
  for (Functional f : kFunctionals)
    a.maps[static_cast<std::size_t>(f)] = anisotropy_for_functional(field, f, cfg.fa_cutoff);
  return a;
}

std::vector<std::string> feature_columns(const FeatureConfig& cfg) {
  std::vector<std::string> names{"bmd"};
  for (const char* kind : {"fa", "angle"})
    for (Functional f : kFunctionals) {
      const int bins = std::string(kind) == "fa" ? cfg.fa_bins : cfg.angle_bins;
      for (int b = 0; b < bins; ++b)
        names.push_back(std::string(kind) + ":" + to_string(f) + ":" + std::to_string(b));
    }
  for (Functional f : kFunctionals) {
    names.push_back(std::string("iso-mf:") + to_string(f) + ":mean");
    names.push_back(std::string("iso-mf:") + to_string(f) + ":sd");
  }
  return names;
}

namespace {

// Mean and sample sd of the unweighted window functionals at every white
// masked pixel of every threshold plane.
std::array<std::pair<double, double>, 3> isotropic_window_stats(const GrayImage& g,
                                                                const RoiMask& mask,
                                                                const ThresholdSet& ts, int size) {
  const CellWeights unit = CellWeights::uniform(size);
  WindowCells cells(size);
  std::array<std::vector<double>, 3> samples;
  for (double t : ts.values()) {
    const BinaryImage white = threshold_image(g, t);
    for (Eigen::Index y = 0; y < g.rows(); ++y)
      for (Eigen::Index x = 0; x < g.cols(); ++x) {
        if (!mask(y, x) || !white(y, x)) continue;
        cells.load(white, x, y);
        const Eigen::Vector3d mf = functionals_from_counts(cells.weigh(unit));
        for (int k = 0; k < 3; ++k) samples[static_cast<std::size_t>(k)].push_back(mf(k));
      }
  }
  std::array<std::pair<double, double>, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& s = samples[k];
    if (s.empty()) continue;
    out[k] = {mean(s), s.size() > 1 ? sample_sd(s) : 0.0};
  }
  return out;
}

}  // namespace

Eigen::VectorXd specimen_features(const GrayImage& g, const RoiMask& mask,
                                  const FeatureConfig& cfg) {
  require_same_shape(g.rows(), g.cols(), mask.rows(), mask.cols(), "mask");
  const double roi_pixels = static_cast<double>(mask.count());
  if (roi_pixels == 0) throw Error("ROI mask is empty");

  const Analysis a = analyze(g, cfg.analysis);
  std::vector<double> v{mean_bmd(g, mask, cfg.calibration)};
  for (Functional f : kFunctionals) {
    const FaHistogram h = fa_histogram(a[f], mask, cfg.fa_bins);
    for (double freq : h.histogram.frequencies()) v.push_back(freq);
  }
  for (Functional f : kFunctionals) {
    const Histogram h = direction_histogram(a[f], mask, cfg.angle_bins, cfg.analysis.fa_cutoff);
    for (auto c : h.counts) v.push_back(static_cast<double>(c) / roi_pixels);
  }
  for (auto [m, sd] : isotropic_window_stats(g, mask, a.thresholds, cfg.analysis.kernel.size)) {
    v.push_back(m);
    v.push_back(sd);
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

FeatureTable cohort_table(const std::vector<Specimen>& cohort, const FeatureConfig& cfg) {
  FeatureTable table;
  table.columns = feature_columns(cfg);
  std::vector<Eigen::VectorXd> rows(cohort.size());
  // Parallel over specimens; each analysis then runs single-threaded.
  FeatureConfig inner = cfg;
  inner.analysis.threads = 1;
  parallel_for(cohort.size(), cfg.analysis.threads, [&](std::size_t i) {
    const RoiMask full = RoiMask::Constant(cohort[i].image.rows(), cohort[i].image.cols(), true);
    rows[i] = specimen_features(cohort[i].image, full, inner);
  });
  for (std::size_t i = 0; i < cohort.size(); ++i)
    table.append({cohort[i].id, rows[i], cohort[i].failure_load});
  return table;
}

}  // namespace amf
