// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "amf/amf_field.hpp"
#include "amf/anisotropy.hpp"
#include "amf/features.hpp"
#include "amf/io.hpp"
#include "amf/morphometry.hpp"
#include "amf/phantoms.hpp"
#include "amf/regression.hpp"
#include "amf/stats.hpp"
#include "cli.hpp"
#include "test_support.hpp"

using namespace amf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > limit_s) {
    o.pass = false;
    o.detail += "; over the " + format_double(limit_s) + " s limit";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

PhantomSpec phantom(PhantomKind kind, double angle, std::uint64_t seed, int size) {
  PhantomSpec s;
  s.kind = kind;
  s.width = s.height = size;
  s.angle = angle;
  s.seed = seed;
  s.noise_sigma = 0.1 * s.contrast;
  return s;
}

RoiMask whole(const GrayImage& g) { return RoiMask::Constant(g.rows(), g.cols(), true); }

// 1
Outcome mf_oracle() {
  Rng rng(1);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 4 + static_cast<int>(rng.below(13)), h = 4 + static_cast<int>(rng.below(13));
    const BinaryImage b = testing::random_binary(rng, w, h, rng.uniform(0.1, 0.9));
    const MfTriple mf = minkowski_functionals(b);
    if (mf.euler != euler_oracle(b) || mf.perimeter != perimeter_oracle(b)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 images"};
}

// 2
Outcome unit_kernel() {
  Rng rng(2);
  const CellWeightBank unit = uniform_bank(5);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    BinaryImage b = testing::random_binary(rng, 9, 9, rng.uniform(0.1, 0.9));
    const auto x = static_cast<Eigen::Index>(rng.below(9)), y = static_cast<Eigen::Index>(rng.below(9));
    b(y, x) = true;
    const DirectionalAmf v = amf_at_pixel(b, x, y, unit);
    const MfTriple mf = window_mf(b, x, y, 5);
    const Eigen::Vector3d want(static_cast<double>(mf.area), static_cast<double>(mf.perimeter),
                               static_cast<double>(mf.euler));
    for (int d = 0; d < 4; ++d)
      if (v.col(d) != want) {
        ++mismatches;
        break;
      }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 10000 windows"};
}

// 3
Outcome fa_closed_forms() {
  bool ok = true;
  double worst_iso = 0;
  for (double c : {0.3, 1.0, 2.0, 17.5, 1e6}) {
    const AnisotropyResult r = anisotropy(Eigen::Vector4d::Constant(c));
    worst_iso = std::max(worst_iso, r.fa);
  }
  ok &= worst_iso <= 1e-12;
  double worst_single = 0;
  for (int d = 0; d < 4; ++d) {
    Eigen::Vector4d m = Eigen::Vector4d::Zero();
    m(d) = 3.0;
    const AnisotropyResult r = anisotropy(m);
    worst_single = std::max({worst_single, std::abs(r.fa - 1),
                             testing::axial_distance(r.angle, kDirections[static_cast<std::size_t>(d)])});
    ok &= r.oriented;
  }
  ok &= worst_single <= 1e-12;
  const AnisotropyResult r = anisotropy(Eigen::Vector4d(2, 0, 1, 0));
  ok &= std::abs(r.fa - 0.727607) <= 1e-6 && testing::axial_distance(r.angle, 0) <= 1e-9;
  return {ok, "iso fa " + fmt(worst_iso) + ", single-direction error " + fmt(worst_single) +
                  ", (2,0,1,0) fa " + format_double(r.fa) + " angle " + fmt(r.angle)};
}

// 4
Outcome equivariance() {
  const AnalysisConfig cfg;
  double worst_fa = 0, worst_angle = 0, worst_scale_fa = 0, worst_scale_angle = 0;
  long orientation_mismatches = 0;
  for (PhantomKind kind : {PhantomKind::stripes, PhantomKind::blobs}) {
    const GrayImage g = make_phantom(phantom(kind, 30, 4, 128));
    const Analysis a = analyze(g, cfg), r = analyze(rot90(g), cfg);
    const Eigen::Index w = g.cols();
    for (Functional f : kFunctionals)
      for (Eigen::Index y = 0; y < g.rows(); ++y)
        for (Eigen::Index x = 0; x < w; ++x) {
          // rot90 sends pixel (x, y) to (y, w - 1 - x)
          const Eigen::Index rx = y, ry = w - 1 - x;
          worst_fa = std::max(worst_fa, std::abs(a[f].fa(y, x) - r[f].fa(ry, rx)));
          if (a[f].oriented(x, y) != r[f].oriented(rx, ry)) {
            ++orientation_mismatches;
            continue;
          }
          if (a[f].oriented(x, y))
            worst_angle = std::max(worst_angle,
                                   testing::axial_distance(a[f].angle(y, x) + 90, r[f].angle(ry, rx)));
        }

    const AmfField field = compute_amf_field(g, a.thresholds, KernelBank(cfg.kernel));
    for (const AmfPlane& plane : field.planes)
      for (std::size_t i = 0; i < plane.values.size(); ++i) {
        if (!plane.white.data()[i]) continue;
        for (int f = 0; f < 3; ++f) {
          const Eigen::Vector4d m = plane.values[i].row(f).transpose();
          const AnisotropyResult p = anisotropy(m), q = anisotropy(7.3 * m);
          worst_scale_fa = std::max(worst_scale_fa, std::abs(p.fa - q.fa));
          if (p.oriented || q.oriented) {
            if (p.oriented != q.oriented) ++orientation_mismatches;
            else worst_scale_angle = std::max(worst_scale_angle, testing::axial_distance(p.angle, q.angle));
          }
        }
      }
  }
  const bool ok = worst_fa <= 1e-12 && worst_angle <= 1e-9 && worst_scale_fa <= 1e-12 &&
                  worst_scale_angle <= 1e-12 && orientation_mismatches == 0;
  return {ok, "rotation fa " + fmt(worst_fa) + " angle " + fmt(worst_angle) + " deg; scale fa " +
                  fmt(worst_scale_fa) + " angle " + fmt(worst_scale_angle) + " deg; " +
                  std::to_string(orientation_mismatches) + " orientation flips"};
}

// 5
Outcome direction_recovery() {
  const AnalysisConfig cfg;
  double worst = 0;
  std::string modes;
  for (double angle : {0.0, 30.0, 60.0, 90.0, 120.0, 150.0})
    for (std::uint64_t seed : {1, 2, 3}) {
      const GrayImage g = stripe_phantom(phantom(PhantomKind::stripes, angle, seed, 256));
      const Analysis a = analyze(g, cfg);
      const Histogram h = direction_histogram(a[Functional::area], whole(g));
      const std::size_t m = h.mode();
      const double centre = (h.edges[m] + h.edges[m + 1]) / 2;
      worst = std::max(worst, testing::axial_distance(centre, angle));
      if (seed == 1) modes += (modes.empty() ? "" : " ") + fmt(angle) + "->" + fmt(centre);
    }
  return {worst <= 15, "worst modal-bin centre error " + fmt(worst) + " deg (" + modes + ")"};
}

// 6
Outcome discrimination() {
  const AnalysisConfig cfg;
  bool ok = true;
  double worst_p = 0, min_gap = 1;
  for (std::uint64_t pair = 0; pair < 5; ++pair) {
    const GrayImage s = stripe_phantom(phantom(PhantomKind::stripes, 30.0 * pair, 100 + pair, 256));
    const GrayImage b = blob_phantom(phantom(PhantomKind::blobs, 0, 200 + pair, 256));
    const Analysis as = analyze(s, cfg), ab = analyze(b, cfg);
    for (Functional f : kFunctionals) {
      const double iso_s = fa_histogram(as[f], whole(s)).near_isotropic_fraction;
      const double iso_b = fa_histogram(ab[f], whole(b)).near_isotropic_fraction;
      const double p = welch_t_test(masked_values(ab[f].fa, whole(b)), masked_values(as[f].fa, whole(s))).p_value;
      ok &= iso_b > iso_s && p < 1e-4;
      worst_p = std::max(worst_p, p);
      min_gap = std::min(min_gap, iso_b - iso_s);
    }
  }
  return {ok, "5 seed pairs x 3 functionals; smallest near-isotropic gap " + fmt(min_gap) +
                  ", largest Welch p " + fmt(worst_p)};
}

// 7
Outcome strength_prediction() {
  CohortSpec spec;
  spec.n_specimens = 60;
  spec.seed = 2024;
  const FeatureTable table = cohort_table(synthetic_cohort(spec), FeatureConfig{});
  const CvConfig cv;
  const auto baseline = cross_validate(table, select_bundle(table, "bmd"), cv);
  const double base_median = summarize(baseline).median;

  bool all_better = true;
  double best_median = INFINITY;
  std::string best, detail;
  for (const std::string& name : standard_bundles()) {
    if (name == "bmd") continue;
    const auto r = cross_validate(table, select_bundle(table, name), cv);
    const double m = summarize(r).median;
    const bool amf_histogram = name.starts_with("fa:") || name.starts_with("angle:");
    if (amf_histogram) {
      all_better &= m < base_median;
      if (m < best_median) {
        best_median = m;
        best = name;
      }
    }
    detail += " " + name + "=" + fmt(m);
  }
  const TestResult t = wilcoxon_signed_rank(baseline, cross_validate(table, select_bundle(table, best), cv));
  const bool ok = all_better && t.p_value < 0.01 && best_median < base_median;
  return {ok, "median RMSE bmd=" + fmt(base_median) + detail + "; best " + best + " p=" + fmt(t.p_value)};
}

// 8
Outcome calibration() {
  const BmdCalibration cal;
  const BmdCalibration other{0, 200, -37.25, 1412.5};
  const bool ok = hu_to_bmd(cal.hu_water, cal) == 0 && hu_to_bmd(cal.hu_bone, cal) == 200 &&
                  hu_to_bmd(other.hu_water, other) == 0 && hu_to_bmd(other.hu_bone, other) == 200;
  return {ok, "default and offset scanner calibrations hit 0 and 200 mg/cm^3"};
}

// 9
Outcome determinism() {
  const fs::path dir = fs::path(AMF_TEST_TMPDIR) / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const unsigned many = std::max(4u, std::thread::hardware_concurrency());
  auto cli = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    if (code != 0) throw Error("cli failed: " + err.str());
    return out.str();
  };
  const std::string image = (dir / "blobs.csv").string();
  cli({"phantom", "--kind", "blobs", "--width", "160", "--height", "160", "--noise", "5", "--seed", "5",
       "--out", image});

  std::vector<std::string> runs = {"serial", "serial_again", "parallel"};
  for (const auto& r : runs) {
    const std::string threads = r == "parallel" ? std::to_string(many) : "1";
    cli({"analyze", image, "--out", (dir / ("an_" + r)).string(), "--threads", threads});
    cli({"regress", "--cohort", "24", "--repetitions", "40", "--seed", "11", "--threads", threads, "--out-dir",
         (dir / ("re_" + r)).string()});
  }

  int compared = 0, differing = 0;
  auto compare = [&](const fs::path& a, const fs::path& b) {
    ++compared;
    if (!fs::exists(a) || !fs::exists(b) || read_file(a) != read_file(b)) ++differing;
  };
  for (const char* f : {"area", "perimeter", "euler"})
    for (const char* s : {"_fa.csv", "_fa.pgm", "_direction.ppm", "_fa_hist.csv", "_direction_hist.csv"}) {
      const std::string name = std::string("_") + f + s;
      for (const auto& r : {runs[1], runs[2]})
        compare(dir / ("an_serial" + name), dir / ("an_" + r + name));
    }
  for (const char* f : {"features.csv", "rmse.csv", "report.csv"})
    for (const auto& r : {runs[1], runs[2]}) compare(dir / "re_serial" / f, dir / ("re_" + r) / f);
  return {differing == 0, std::to_string(compared) + " file pairs compared (1 vs " + std::to_string(many) +
                              " threads and reruns), " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  criterion(1, "MF oracle equivalence", 5, mf_oracle);
  criterion(2, "unit-kernel reduction", 5, unit_kernel);
  criterion(3, "FA closed forms", 1, fa_closed_forms);
  criterion(4, "equivariance", 10, equivariance);
  criterion(5, "direction recovery", 60, direction_recovery);
  criterion(6, "anisotropy discrimination", 60, discrimination);
  criterion(7, "strength-prediction ordering", 300, strength_prediction);
  criterion(8, "BMD calibration endpoints", 1, calibration);
  criterion(9, "determinism", 120, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
