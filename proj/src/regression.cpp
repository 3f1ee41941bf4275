#include "amf/regression.hpp"

#include <algorithm>
#include <cmath>

#include "amf/parallel.hpp"
#include "amf/random.hpp"

namespace amf {

double hu_to_bmd(double hu, const BmdCalibration& cal) {
  if (cal.hu_bone == cal.hu_water) throw Error("calibration needs distinct water and bone HU");
  return (cal.ha_bone - cal.ha_water) / (cal.hu_bone - cal.hu_water) * (hu - cal.hu_water);
}

double mean_bmd(const GrayImage& hu, const RoiMask& mask, const BmdCalibration& cal) {
  const std::vector<double> v = masked_values(hu, mask);
  if (v.empty()) throw Error("ROI mask is empty");
  double sum = 0;
  for (double h : v) sum += hu_to_bmd(h, cal);
  return sum / static_cast<double>(v.size());
}

Eigen::VectorXd RegressionModel::predict(const Eigen::MatrixXd& x) const {
  if (x.cols() != coefficients.size()) throw Error("feature count does not match the model");
  return (x * coefficients).array() + intercept;
}

RegressionModel fit_multiregression(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw Error("feature rows and targets differ in length");
  if (x.rows() < 2) throw Error("regression needs at least 2 specimens");

  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd centred = x.rowwise() - x_mean;

  // Scale to unit column norm; columns whose spread is at rounding level
  // relative to their magnitude carry no information and are dropped.
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double spread = centred.col(j).norm();
    const double magnitude = x.col(j).norm();
    if (spread > 1e-10 * magnitude && spread > 0) scale(j) = 1 / spread;
  }

  RegressionModel m;
  m.coefficients = Eigen::VectorXd::Zero(x.cols());
  if ((scale.array() > 0).any()) {
    const Eigen::MatrixXd design = centred * scale.asDiagonal();
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    m.coefficients = scale.asDiagonal() * cod.solve((y.array() - y_mean).matrix());
  }
  m.intercept = y_mean - x_mean.dot(m.coefficients);
  return m;
}

double rmse(const RegressionModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw Error("feature rows and targets differ in length");
  if (y.size() == 0) throw Error("RMSE of an empty sample");
  return std::sqrt((model.predict(x) - y).squaredNorm() / static_cast<double>(y.size()));
}

void FeatureTable::append(const SpecimenRecord& r) {
  if (features.rows() > 0 && r.features.size() != features.cols())
    throw Error("specimen '" + r.id + "' has a different feature count");
  if (columns.size() != static_cast<std::size_t>(r.features.size()))
    throw Error("specimen '" + r.id + "' does not match the column names");
  if (!r.features.allFinite() || !std::isfinite(r.failure_load))
    throw Error("specimen '" + r.id + "' has non-finite values");
  features.conservativeResize(features.rows() + 1, r.features.size());
  features.row(features.rows() - 1) = r.features.transpose();
  failure_load.conservativeResize(failure_load.size() + 1);
  failure_load(failure_load.size() - 1) = r.failure_load;
  ids.push_back(r.id);
}

FeatureSelector select_bundle(const FeatureTable& table, const std::string& bundle) {
  FeatureSelector s{bundle, {}};
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    const std::string& c = table.columns[j];
    if (c == bundle || c.starts_with(bundle + ":")) s.columns.push_back(static_cast<Eigen::Index>(j));
  }
  if (s.columns.empty()) throw Error("no feature columns for bundle '" + bundle + "'");
  return s;
}

const std::vector<std::string>& standard_bundles() {
  static const std::vector<std::string> names = {
      "bmd",          "fa:area",         "fa:perimeter", "fa:euler", "angle:area",
      "angle:perimeter", "angle:euler", "iso-mf"};
  return names;
}

std::vector<std::string> available_bundles(const FeatureTable& table) {
  std::vector<std::string> out;
  for (const auto& b : standard_bundles()) {
    const bool present = std::any_of(table.columns.begin(), table.columns.end(), [&](const auto& c) {
      return c == b || c.starts_with(b + ":");
    });
    if (present) out.push_back(b);
  }
  return out;
}

std::vector<double> cross_validate(const FeatureTable& table, const FeatureSelector& selector,
                                   const CvConfig& cfg) {
  const Eigen::Index n = table.size();
  if (n < 4) throw Error("cross-validation needs at least 4 specimens");
  if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1))
    throw Error("train fraction must lie in (0, 1)");
  if (cfg.repetitions < 1) throw Error("repetitions must be positive");
  const auto n_train = static_cast<Eigen::Index>(std::lround(cfg.train_fraction * n));
  if (n_train < 2 || n - n_train < 1) throw Error("degenerate train/test split");

  const Eigen::MatrixXd x = table.features(Eigen::all, selector.columns);
  std::vector<double> out(static_cast<std::size_t>(cfg.repetitions));
  parallel_for(out.size(), cfg.threads, [&](std::size_t rep) {
    Rng rng = Rng::derived(cfg.seed, rep);
    const std::vector<std::size_t> perm = rng.permutation(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> train(perm.begin(), perm.begin() + n_train);
    std::vector<Eigen::Index> test(perm.begin() + n_train, perm.end());
    const RegressionModel m = fit_multiregression(x(train, Eigen::all), table.failure_load(train));
    out[rep] = rmse(m, x(test, Eigen::all), table.failure_load(test));
  });
  return out;
}

RmseSummary summarize(const std::vector<double>& rmse) {
  return {quantile(rmse, 0.5), quantile(rmse, 0.25), quantile(rmse, 0.75)};
}

Comparison compare_feature_sets(const FeatureTable& table, const FeatureSelector& a,
                                const FeatureSelector& b, const CvConfig& cfg) {
  Comparison c;
  c.rmse_a = cross_validate(table, a, cfg);
  c.rmse_b = cross_validate(table, b, cfg);
  c.wilcoxon = wilcoxon_signed_rank(c.rmse_a, c.rmse_b);
  return c;
}

}  // namespace amf
