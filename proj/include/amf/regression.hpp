#ifndef AMF_REGRESSION_HPP
#define AMF_REGRESSION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "amf/grid.hpp"
#include "amf/stats.hpp"

namespace amf {

/// Two-point phantom calibration from Hounsfield units to hydroxyapatite
/// density (mg/cm^3).
struct BmdCalibration {
  double ha_water = 0;    // mg/cm^3
  double ha_bone = 200;   // mg/cm^3
  double hu_water = 0;
  double hu_bone = 200;
};

/// Linear map through (hu_water, ha_water) and (hu_bone, ha_bone).
double hu_to_bmd(double hu, const BmdCalibration& cal);
double mean_bmd(const GrayImage& hu, const RoiMask& mask, const BmdCalibration& cal);

struct RegressionModel {
  double intercept = 0;
  Eigen::VectorXd coefficients;

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Least squares with intercept. Columns that are constant to working
/// precision are dropped, the rest are centred and scaled to unit norm, and
/// the minimum-norm solution is taken from a complete orthogonal
/// decomposition, so rank-deficient designs are handled without forming
/// normal equations.
RegressionModel fit_multiregression(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

double rmse(const RegressionModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct SpecimenRecord {
  std::string id;
  Eigen::VectorXd features;
  double failure_load = 0;  // N
};

/// Specimens sharing one named feature layout.
struct FeatureTable {
  std::vector<std::string> columns;
  std::vector<std::string> ids;
  Eigen::MatrixXd features;     // one row per specimen
  Eigen::VectorXd failure_load;

  Eigen::Index size() const { return features.rows(); }
  SpecimenRecord record(Eigen::Index i) const {
    return {ids[static_cast<std::size_t>(i)], features.row(i).transpose(), failure_load(i)};
  }
  void append(const SpecimenRecord& r);
};

/// A named subset of table columns.
struct FeatureSelector {
  std::string name;
  std::vector<Eigen::Index> columns;
};

/// Columns named `bundle` or starting with `bundle:`. Throws when none match.
FeatureSelector select_bundle(const FeatureTable& table, const std::string& bundle);

/// Bundles that the feature extractor produces, in report order.
const std::vector<std::string>& standard_bundles();
/// The standard bundles present in `table`.
std::vector<std::string> available_bundles(const FeatureTable& table);

struct CvConfig {
  double train_fraction = 2.0 / 3.0;
  int repetitions = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Repeated random sub-sampling: fit on a seeded train split, RMSE on the
/// rest. Repetition r draws its split from (seed, r) alone, so the result is
/// the same for any thread count and two selectors see identical splits.
std::vector<double> cross_validate(const FeatureTable& table, const FeatureSelector& selector,
                                   const CvConfig& cfg);

struct RmseSummary {
  double median = 0, q25 = 0, q75 = 0;
};
RmseSummary summarize(const std::vector<double>& rmse);

struct Comparison {
  std::vector<double> rmse_a, rmse_b;
  TestResult wilcoxon;
};

/// Cross-validates both selectors on the same splits and runs a paired
/// Wilcoxon signed-rank test on the RMSE sequences.
Comparison compare_feature_sets(const FeatureTable& table, const FeatureSelector& a,
                                const FeatureSelector& b, const CvConfig& cfg);

}  // namespace amf

#endif  // AMF_REGRESSION_HPP
