#ifndef AMF_FEATURES_HPP
#define AMF_FEATURES_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "amf/anisotropy.hpp"
#include "amf/kernels.hpp"
#include "amf/phantoms.hpp"
#include "amf/regression.hpp"

namespace amf {

struct AnalysisConfig {
  KernelConfig kernel;
  int threshold_count = 10;
  std::vector<double> thresholds;  // overrides threshold_count when non-empty
  double fa_cutoff = kDefaultFaCutoff;
  unsigned threads = 0;

  ThresholdSet thresholds_for(const GrayImage& g) const;
};

/// FA and direction maps of one image for each functional.
struct Analysis {
  ThresholdSet thresholds;
  std::array<AnisotropyMaps, 3> maps;  // indexed by Functional

  const AnisotropyMaps& operator[](Functional f) const {
    return maps[static_cast<std::size_t>(f)];
  }
};

Analysis analyze(const GrayImage& g, const AnalysisConfig& cfg);

/// Layout of the per-specimen feature vector used for strength regression.
struct FeatureConfig {
  AnalysisConfig analysis;
  int fa_bins = 10;     // over [0, 1]
  int angle_bins = 6;   // over [0, 180)
  BmdCalibration calibration;
};

/// Column names in the order specimen_features fills them:
///   bmd
///   fa:<functional>:<bin>     fraction of ROI pixels per FA bin
///   angle:<functional>:<bin>  fraction of ROI pixels oriented into each bin
///   iso-mf:<functional>:mean, iso-mf:<functional>:sd
///                             unweighted 5x5-window functionals over all
///                             white (threshold, pixel) entries in the ROI
std::vector<std::string> feature_columns(const FeatureConfig& cfg);

Eigen::VectorXd specimen_features(const GrayImage& g, const RoiMask& mask,
                                  const FeatureConfig& cfg);

/// Feature table of a synthetic cohort, every image analysed over its full
/// extent.
FeatureTable cohort_table(const std::vector<Specimen>& cohort, const FeatureConfig& cfg);

}  // namespace amf

#endif  // AMF_FEATURES_HPP
