#include "amf/phantoms.hpp"

#include <cmath>
#include <cstdio>

#include "amf/kernels.hpp"
#include "amf/parallel.hpp"
#include "amf/random.hpp"

namespace amf {

namespace {

void validate(const PhantomSpec& s) {
  if (s.width < 1 || s.height < 1) throw Error("phantom dimensions must be positive");
  if (!(s.period >= 2)) throw Error("phantom period must be >= 2");
  if (!(s.noise_sigma >= 0)) throw Error("phantom noise sigma must be >= 0");
  if (!std::isfinite(s.contrast) || !std::isfinite(s.angle)) throw Error("phantom spec not finite");
}

// Periodic separable Gaussian blur.
GrayImage smooth(const GrayImage& g, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  Eigen::VectorXd taps(2 * r + 1);
  for (int i = -r; i <= r; ++i) taps(i + r) = std::exp(-0.5 * i * i / (sigma * sigma));
  taps /= taps.sum();

  const Eigen::Index h = g.rows(), w = g.cols();
  auto wrap = [](Eigen::Index i, Eigen::Index n) { return ((i % n) + n) % n; };
  GrayImage tmp = GrayImage::Zero(h, w), out = GrayImage::Zero(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      for (int i = -r; i <= r; ++i) tmp(y, x) += taps(i + r) * g(y, wrap(x + i, w));
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      for (int i = -r; i <= r; ++i) out(y, x) += taps(i + r) * tmp(wrap(y + i, h), x);
  return out;
}

GrayImage zscore(const GrayImage& g) {
  const double m = g.mean();
  const double sd = std::sqrt((g - m).square().sum() / static_cast<double>(g.size()));
  if (!(sd > 0)) return GrayImage::Zero(g.rows(), g.cols());
  return (g - m) / sd;
}

// Zero-mean cosine bands along `angle`, unit amplitude.
GrayImage stripe_profile(int width, int height, double angle, double period) {
  const auto [c, s] = direction_vector(angle);
  GrayImage g(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) g(y, x) = std::cos(2 * M_PI * (x * s - y * c) / period);
  return g;
}

GrayImage smoothed_noise(int width, int height, double period, Rng& rng) {
  GrayImage n(height, width);
  for (Eigen::Index i = 0; i < n.size(); ++i) n.data()[i] = rng.normal();
  return smooth(n, period / 4);
}

void add_noise(GrayImage& g, double sigma, Rng& rng) {
  if (sigma == 0) return;
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] += sigma * rng.normal();
}

// Standard deviation of 0.5 + 0.5 cos(.) over a full period.
const double kProfileSd = 0.5 / std::sqrt(2.0);

}  // namespace

GrayImage stripe_phantom(const PhantomSpec& spec) {
  validate(spec);
  if (spec.kind != PhantomKind::stripes) throw Error("stripe phantom needs kind = stripes");
  GrayImage g =
      spec.contrast * (0.5 + 0.5 * stripe_profile(spec.width, spec.height, spec.angle, spec.period));
  Rng rng(spec.seed);
  add_noise(g, spec.noise_sigma, rng);
  return g;
}

GrayImage blob_phantom(const PhantomSpec& spec) {
  validate(spec);
  if (spec.kind != PhantomKind::blobs) throw Error("blob phantom needs kind = blobs");
  Rng rng(spec.seed);
  GrayImage g = spec.contrast * (0.5 + kProfileSd * zscore(smoothed_noise(spec.width, spec.height,
                                                                          spec.period, rng)));
  add_noise(g, spec.noise_sigma, rng);
  return g;
}

GrayImage make_phantom(const PhantomSpec& spec) {
  return spec.kind == PhantomKind::stripes ? stripe_phantom(spec) : blob_phantom(spec);
}

Specimen cohort_member(const CohortSpec& spec, int index) {
  Rng rng = Rng::derived(spec.seed, static_cast<std::uint64_t>(index));
  Specimen s;
  char id[32];
  std::snprintf(id, sizeof id, "specimen_%03d", index);
  s.id = id;
  s.coherence = rng.uniform(spec.coherence_min, spec.coherence_max);
  const double angle = spec.stripe_angle + rng.uniform(-spec.angle_jitter, spec.angle_jitter);

  const GrayImage stripes = zscore(stripe_profile(spec.width, spec.height, angle, spec.period));
  const GrayImage blobs = zscore(smoothed_noise(spec.width, spec.height, spec.period, rng));
  GrayImage g = spec.contrast * kProfileSd *
                zscore(s.coherence * stripes + (1 - s.coherence) * blobs);
  add_noise(g, spec.pixel_noise, rng);
  s.image = (g - g.mean()) + spec.contrast / 2;

  s.failure_load = kCohortBaseLoad + kCohortCoherenceGain * s.coherence +
                   spec.noise_sigma_load * rng.normal();
  return s;
}

std::vector<Specimen> synthetic_cohort(const CohortSpec& spec, unsigned threads) {
  if (spec.n_specimens < 10) throw Error("cohort needs at least 10 specimens");
  if (!(spec.coherence_min >= 0 && spec.coherence_max <= 1 &&
        spec.coherence_min <= spec.coherence_max))
    throw Error("coherence range must lie within [0, 1]");
  if (!(spec.noise_sigma_load >= 0) || !(spec.pixel_noise >= 0))
    throw Error("noise sigma must be >= 0");
  if (spec.width < 1 || spec.height < 1 || !(spec.period >= 2))
    throw Error("invalid cohort image geometry");

  std::vector<Specimen> out(static_cast<std::size_t>(spec.n_specimens));
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = cohort_member(spec, static_cast<int>(i)); });
  return out;
}

}  // namespace amf
