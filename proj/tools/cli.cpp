#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "amf/features.hpp"
#include "amf/io.hpp"
#include "amf/morphometry.hpp"
#include "amf/phantoms.hpp"
#include "amf/regression.hpp"
#include "amf/stats.hpp"

namespace amf {

namespace fs = std::filesystem;

namespace {

struct KernelFlags {
  KernelConfig kernel;
  std::vector<double> thresholds;
  int threshold_count = 10;
  double fa_cutoff = kDefaultFaCutoff;
  unsigned threads = 0;

  void attach(CLI::App& app) {
    app.add_option("--kernel-size", kernel.size, "Odd window/kernel size")->capture_default_str();
    app.add_option("--sigma-major", kernel.sigma_major, "Gaussian sigma along the kernel direction")
        ->capture_default_str();
    app.add_option("--sigma-minor", kernel.sigma_minor, "Gaussian sigma across the kernel direction")
        ->capture_default_str();
    app.add_option("--thresholds", thresholds, "Explicit increasing gray thresholds")
        ->delimiter(',');
    app.add_option("--threshold-count", threshold_count,
                   "Evenly spaced thresholds when --thresholds is not given")
        ->capture_default_str();
    app.add_option("--fa-cutoff", fa_cutoff, "FA at or below which a pixel is near-isotropic")
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  }

  AnalysisConfig analysis() const {
    AnalysisConfig c;
    c.kernel = kernel;
    c.thresholds = thresholds;
    c.threshold_count = threshold_count;
    c.fa_cutoff = fa_cutoff;
    c.threads = threads;
    KernelBank check(kernel);  // validates size and sigmas up front
    (void)check;
    return c;
  }
};

std::vector<Functional> functionals_from(const std::string& name) {
  if (name == "all") return {kFunctionals.begin(), kFunctionals.end()};
  return {parse_functional(name)};
}

std::string kv(const std::string& key, double v) { return key + "=" + format_double(v) + "\n"; }

// --- mf ------------------------------------------------------------------------

struct MfCommand {
  std::string image;
  double threshold = 0.5;

  void attach(CLI::App& app) {
    app.add_option("image", image, "Graymap or CSV matrix")->required();
    app.add_option("--threshold", threshold, "Pixels >= threshold are white")->capture_default_str();
  }

  int run(std::ostream& out) const {
    const BinaryImage b = threshold_image(read_gray(image), threshold);
    const CellCounts c = count_cells(b);
    const MfTriple mf = minkowski_functionals(c);
    const auto euler_ref = euler_oracle(b);
    const auto perimeter_ref = perimeter_oracle(b);
    const bool match = euler_ref == mf.euler && perimeter_ref == mf.perimeter;
    out << "width=" << b.cols() << "\nheight=" << b.rows() << "\nn_s=" << c.squares
        << "\nn_e=" << c.edges << "\nn_v=" << c.vertices << "\narea=" << mf.area
        << "\nperimeter=" << mf.perimeter << "\neuler=" << mf.euler
        << "\neuler_oracle=" << euler_ref << "\nperimeter_oracle=" << perimeter_ref
        << "\noracle_match=" << (match ? "true" : "false") << "\n";
    return match ? 0 : 1;
  }
};

// --- analyze -------------------------------------------------------------------

struct AnalyzeCommand {
  std::string image, mask, out_stem, functional = "all";
  KernelFlags flags;
  int fa_bins = 50, angle_bins = 18;
  double fa_display_max = 0.1;

  void attach(CLI::App& app) {
    app.add_option("image", image, "Graymap or CSV matrix")->required();
    app.add_option("--mask", mask, "ROI graymap, nonzero = inside (default: whole image)");
    app.add_option("--out", out_stem, "Output path prefix")->required();
    app.add_option("--functional", functional, "area, perimeter, euler or all")
        ->capture_default_str();
    app.add_option("--fa-bins", fa_bins, "FA histogram bins over [0, 1]")->capture_default_str();
    app.add_option("--angle-bins", angle_bins, "Direction histogram bins over [0, 180)")
        ->capture_default_str();
    app.add_option("--fa-display-max", fa_display_max, "FA mapped to white in the preview")
        ->capture_default_str();
    flags.attach(app);
  }

  int run(std::ostream& out) const {
    const GrayImage g = read_gray(image);
    const RoiMask roi = mask.empty() ? RoiMask::Constant(g.rows(), g.cols(), true) : read_mask(mask);
    require_same_shape(g.rows(), g.cols(), roi.rows(), roi.cols(), "mask");
    const auto which = functionals_from(functional);
    if (fa_bins < 2 || angle_bins < 2) throw Error("histograms need at least 2 bins");
    const Analysis a = analyze(g, flags.analysis());

    out << "width=" << g.cols() << "\nheight=" << g.rows() << "\nthresholds=" << a.thresholds.size()
        << "\nroi_pixels=" << roi.count() << "\n";
    for (Functional f : which) {
      const AnisotropyMaps& maps = a[f];
      const std::string stem = out_stem + "_" + to_string(f);
      const FaHistogram fh = fa_histogram(maps, roi, fa_bins);
      const Histogram dh = direction_histogram(maps, roi, angle_bins, flags.fa_cutoff);
      write_fa_map(maps, stem, fa_display_max);
      write_direction_map(maps, stem);
      write_file_atomic(stem + "_fa_hist.csv", encode_histogram(fh.histogram));
      write_file_atomic(stem + "_direction_hist.csv", encode_histogram(dh));

      const std::string p = std::string(to_string(f)) + ".";
      out << kv(p + "near_isotropic_fraction", fh.near_isotropic_fraction)
          << kv(p + "mean_fa", mean(masked_values(maps.fa, roi)))
          << p << "oriented_pixels=" << dh.total() << "\n";
      if (!dh.empty()) {
        const std::size_t m = dh.mode();
        out << p << "modal_direction_bin=[" << format_double(dh.edges[m]) << ","
            << format_double(dh.edges[m + 1]) << ")\n";
      } else {
        out << p << "modal_direction_bin=none\n";
      }
    }
    return 0;
  }
};

// --- phantom -------------------------------------------------------------------

void write_image(const fs::path& path, const GrayImage& g) {
  if (path.extension() == ".csv") {
    write_file_atomic(path, encode_csv_matrix(g));
  } else {
    // Graymaps store integers; shift and clamp into the 16-bit range.
    write_gray(path, g.max(0.0).min(65535.0).round(), 65535);
  }
}

struct PhantomCommand {
  std::string kind = "stripes", out, manifest;
  PhantomSpec spec;
  int cohort = 0;
  CohortSpec cohort_spec;
  std::string out_dir;
  unsigned threads = 0;

  void attach(CLI::App& app) {
    app.add_option("--kind", kind, "stripes or blobs")->capture_default_str();
    app.add_option("--width", spec.width)->capture_default_str();
    app.add_option("--height", spec.height)->capture_default_str();
    app.add_option("--angle", spec.angle, "Stripe direction in degrees")->capture_default_str();
    app.add_option("--period", spec.period, "Stripe period / blob scale in pixels")
        ->capture_default_str();
    app.add_option("--contrast", spec.contrast)->capture_default_str();
    app.add_option("--noise", spec.noise_sigma, "Gaussian noise sigma in gray units")
        ->capture_default_str();
    app.add_option("--seed", spec.seed)->capture_default_str();
    app.add_option("--out", out, "Output image (.pgm or .csv)");
    app.add_option("--manifest", manifest, "Manifest CSV (default: <out>.manifest.csv)");
    app.add_option("--cohort", cohort, "Generate a synthetic cohort of this many specimens");
    app.add_option("--out-dir", out_dir, "Cohort output directory");
    app.add_option("--load-noise", cohort_spec.noise_sigma_load, "Cohort failure-load noise (N)")
        ->capture_default_str();
    app.add_option("--threads", threads)->capture_default_str();
  }

  int run(std::ostream& os) {
    if (cohort > 0) return run_cohort(os);
    if (out.empty()) throw Error("--out is required");
    if (kind == "stripes") spec.kind = PhantomKind::stripes;
    else if (kind == "blobs") spec.kind = PhantomKind::blobs;
    else throw Error("unknown phantom kind '" + kind + "'");

    const GrayImage g = make_phantom(spec);
    write_image(out, g);
    const std::string manifest_path = manifest.empty() ? out + ".manifest.csv" : manifest;
    std::string m = "file,kind,width,height,angle,period,contrast,noise_sigma,seed\n";
    m += fs::path(out).filename().string() + "," + kind + "," + std::to_string(spec.width) + "," +
         std::to_string(spec.height) + "," + format_double(spec.angle) + "," +
         format_double(spec.period) + "," + format_double(spec.contrast) + "," +
         format_double(spec.noise_sigma) + "," + std::to_string(spec.seed) + "\n";
    write_file_atomic(manifest_path, m);
    os << "wrote=" << out << "\nmanifest=" << manifest_path << "\n";
    return 0;
  }

  int run_cohort(std::ostream& os) {
    if (out_dir.empty()) throw Error("--out-dir is required with --cohort");
    cohort_spec.n_specimens = cohort;
    cohort_spec.seed = spec.seed;
    cohort_spec.width = spec.width;
    cohort_spec.height = spec.height;
    const auto specimens = synthetic_cohort(cohort_spec, threads);
    fs::create_directories(out_dir);
    std::string m = "id,image,failure_load,coherence\n";
    for (const auto& s : specimens) {
      const std::string file = s.id + ".csv";
      write_image(fs::path(out_dir) / file, s.image);
      m += s.id + "," + file + "," + format_double(s.failure_load) + "," +
           format_double(s.coherence) + "\n";
    }
    const fs::path manifest_path = manifest.empty() ? fs::path(out_dir) / "manifest.csv"
                                                    : fs::path(manifest);
    write_file_atomic(manifest_path, m);
    os << "specimens=" << specimens.size() << "\nmanifest=" << manifest_path.string() << "\n";
    return 0;
  }
};

// --- regress -------------------------------------------------------------------

struct RegressCommand {
  std::string records, manifest, out_dir, baseline = "bmd";
  int cohort = 0;
  std::vector<std::string> bundles;
  CvConfig cv;
  KernelFlags flags;
  FeatureConfig features;
  std::uint64_t cohort_seed = 1;

  void attach(CLI::App& app) {
    app.add_option("--records", records, "Specimen CSV: id,failure_load,<feature columns>");
    app.add_option("--manifest", manifest,
                   "Manifest CSV: id,image,failure_load[,mask]; features computed from images");
    app.add_option("--cohort", cohort, "Use a synthetic cohort of this many specimens");
    app.add_option("--cohort-seed", cohort_seed, "Seed of the synthetic cohort")
        ->capture_default_str();
    app.add_option("--out-dir", out_dir, "Directory for rmse.csv, report.csv, features.csv")
        ->required();
    app.add_option("--baseline", baseline, "Bundle the others are compared against")
        ->capture_default_str();
    app.add_option("--bundles", bundles, "Bundles to evaluate (default: all present)")
        ->delimiter(',');
    app.add_option("--train-fraction", cv.train_fraction)->capture_default_str();
    app.add_option("--repetitions", cv.repetitions)->capture_default_str();
    app.add_option("--seed", cv.seed, "Cross-validation seed")->capture_default_str();
    app.add_option("--fa-feature-bins", features.fa_bins)->capture_default_str();
    app.add_option("--angle-feature-bins", features.angle_bins)->capture_default_str();
    app.add_option("--hu-water", features.calibration.hu_water)->capture_default_str();
    app.add_option("--hu-bone", features.calibration.hu_bone)->capture_default_str();
    flags.attach(app);
  }

  FeatureTable load_table() {
    const int sources = !records.empty() + !manifest.empty() + (cohort > 0);
    if (sources != 1) throw Error("give exactly one of --records, --manifest, --cohort");
    features.analysis = flags.analysis();
    if (!records.empty()) return read_feature_table(records);
    if (cohort > 0) {
      CohortSpec cs;
      cs.n_specimens = cohort;
      cs.seed = cohort_seed;
      return cohort_table(synthetic_cohort(cs, flags.threads), features);
    }
    const CsvTable csv = parse_csv(read_file(manifest));
    const fs::path base = fs::path(manifest).parent_path();
    const std::size_t id = csv.column("id"), image = csv.column("image"),
                      load = csv.column("failure_load");
    const auto has_mask = std::find(csv.header.begin(), csv.header.end(), "mask") != csv.header.end();
    FeatureTable t;
    t.columns = feature_columns(features);
    for (const auto& row : csv.rows) {
      const GrayImage g = read_gray(base / row[image]);
      const RoiMask roi = has_mask && !row[csv.column("mask")].empty()
                              ? read_mask(base / row[csv.column("mask")])
                              : RoiMask::Constant(g.rows(), g.cols(), true);
      double y;
      std::istringstream(row[load]) >> y;
      t.append({row[id], specimen_features(g, roi, features), y});
    }
    return t;
  }

  int run(std::ostream& os) {
    cv.threads = flags.threads;
    const FeatureTable table = load_table();
    std::vector<std::string> names = bundles.empty() ? available_bundles(table) : bundles;
    if (std::find(names.begin(), names.end(), baseline) == names.end())
      names.insert(names.begin(), baseline);

    std::vector<std::vector<double>> rmse;
    for (const auto& n : names) rmse.push_back(cross_validate(table, select_bundle(table, n), cv));
    const std::size_t base_idx =
        static_cast<std::size_t>(std::find(names.begin(), names.end(), baseline) - names.begin());

    fs::create_directories(out_dir);
    if (records.empty()) write_file_atomic(fs::path(out_dir) / "features.csv", encode_feature_table(table));

    std::string r = "repetition";
    for (const auto& n : names) r += "," + n;
    r += "\n";
    for (std::size_t k = 0; k < static_cast<std::size_t>(cv.repetitions); ++k) {
      r += std::to_string(k);
      for (const auto& v : rmse) r += "," + format_double(v[k]);
      r += "\n";
    }
    write_file_atomic(fs::path(out_dir) / "rmse.csv", r);

    std::string rep = "bundle,median,q25,q75,wilcoxon_w,p_vs_baseline\n";
    os << "specimens=" << table.size() << "\nbaseline=" << baseline << "\n";
    std::vector<std::pair<double, std::string>> ranking;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const RmseSummary s = summarize(rmse[i]);
      std::string w = "", p = "";
      if (i != base_idx) {
        try {
          const TestResult t = wilcoxon_signed_rank(rmse[base_idx], rmse[i]);
          w = format_double(t.statistic);
          p = format_double(t.p_value);
        } catch (const Error&) {
          // Identical RMSE sequences: no test.
        }
      }
      rep += names[i] + "," + format_double(s.median) + "," + format_double(s.q25) + "," +
             format_double(s.q75) + "," + w + "," + p + "\n";
      ranking.emplace_back(s.median, names[i]);
      os << names[i] << ".median_rmse=" << format_double(s.median)
         << (p.empty() ? "" : "\n" + names[i] + ".p_vs_baseline=" + p) << "\n";
    }
    write_file_atomic(fs::path(out_dir) / "report.csv", rep);
    std::stable_sort(ranking.begin(), ranking.end());
    os << "ranking=";
    for (std::size_t i = 0; i < ranking.size(); ++i) os << (i ? "," : "") << ranking[i].second;
    os << "\n";
    return 0;
  }
};

// --- compare-regions -------------------------------------------------------------

struct CompareRegionsCommand {
  std::string image, mask_a, mask_b, functional = "euler";
  KernelFlags flags;

  void attach(CLI::App& app) {
    app.add_option("image", image, "Graymap or CSV matrix")->required();
    app.add_option("--mask-a", mask_a, "First ROI mask")->required();
    app.add_option("--mask-b", mask_b, "Second ROI mask")->required();
    app.add_option("--functional", functional, "area, perimeter or euler")->capture_default_str();
    flags.attach(app);
  }

  static void report(std::ostream& os, const std::string& key, std::span<const double> a,
                     std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
      os << key << ".t=nan\n" << key << ".p=nan\n";
      return;
    }
    const TestResult t = welch_t_test(a, b);
    os << kv(key + ".t", t.statistic) << kv(key + ".df", t.df) << kv(key + ".p", t.p_value);
  }

  static std::vector<double> standardized_or_empty(const std::vector<double>& v) {
    try {
      return standardize(v);
    } catch (const Error&) {
      return {};
    }
  }

  int run(std::ostream& os) const {
    const GrayImage g = read_gray(image);
    const RoiMask a = read_mask(mask_a), b = read_mask(mask_b);
    require_same_shape(g.rows(), g.cols(), a.rows(), a.cols(), "mask-a");
    require_same_shape(g.rows(), g.cols(), b.rows(), b.cols(), "mask-b");
    const Functional f = parse_functional(functional);
    const Analysis an = analyze(g, flags.analysis());
    const AnisotropyMaps& maps = an[f];

    const FaHistogram ha = fa_histogram(maps, a), hb = fa_histogram(maps, b);
    const auto fa_a = masked_values(maps.fa, a), fa_b = masked_values(maps.fa, b);
    const auto ang_a = masked_angles(maps, a), ang_b = masked_angles(maps, b);

    os << "functional=" << to_string(f) << "\n"
       << kv("a.near_isotropic_fraction", ha.near_isotropic_fraction)
       << kv("b.near_isotropic_fraction", hb.near_isotropic_fraction)
       << kv("a.mean_fa", mean(fa_a)) << kv("b.mean_fa", mean(fa_b))
       << "a.oriented_pixels=" << ang_a.size() << "\nb.oriented_pixels=" << ang_b.size() << "\n";
    report(os, "fa.raw", fa_a, fa_b);
    report(os, "fa.standardized", standardized_or_empty(fa_a), standardized_or_empty(fa_b));
    report(os, "angle.raw", ang_a, ang_b);
    report(os, "angle.standardized", standardized_or_empty(ang_a), standardized_or_empty(ang_b));
    return 0;
  }
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anisotropic Minkowski functionals and fractional anisotropy maps", "amf"};
  app.require_subcommand(1);

  MfCommand mf;
  AnalyzeCommand analyze_cmd;
  PhantomCommand phantom;
  RegressCommand regress;
  CompareRegionsCommand compare;
  auto* mf_app = app.add_subcommand("mf", "Minkowski functionals of a binary image with oracle check");
  auto* an_app = app.add_subcommand("analyze", "FA map, direction map and histograms of an image");
  auto* ph_app = app.add_subcommand("phantom", "Generate stripe/blob phantoms or a synthetic cohort");
  auto* re_app = app.add_subcommand("regress", "Cross-validated strength regression per feature bundle");
  auto* cr_app = app.add_subcommand("compare-regions", "Compare FA and direction samples of two ROIs");
  mf.attach(*mf_app);
  analyze_cmd.attach(*an_app);
  phantom.attach(*ph_app);
  regress.attach(*re_app);
  compare.attach(*cr_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (mf_app->parsed()) return mf.run(out);
    if (an_app->parsed()) return analyze_cmd.run(out);
    if (ph_app->parsed()) return phantom.run(out);
    if (re_app->parsed()) return regress.run(out);
    if (cr_app->parsed()) return compare.run(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace amf
