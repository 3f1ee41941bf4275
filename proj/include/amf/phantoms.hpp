#ifndef AMF_PHANTOMS_HPP
#define AMF_PHANTOMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "amf/grid.hpp"

namespace amf {

enum class PhantomKind { stripes, blobs };

struct PhantomSpec {
  int width = 256;
  int height = 256;
  PhantomKind kind = PhantomKind::stripes;
  double angle = 0;        // degrees, stripes only
  double period = 8;       // pixels
  double contrast = 100;   // gray units
  double noise_sigma = 0;  // gray units
  std::uint64_t seed = 1;
};

/// contrast (0.5 + 0.5 cos(2 pi (x sin t - y cos t) / period)) plus Gaussian
/// noise: bright bands running along direction t.
GrayImage stripe_phantom(const PhantomSpec& spec);

/// Seeded white noise smoothed by a periodic Gaussian of sigma period / 4,
/// rescaled to mean contrast / 2 and the standard deviation of the stripe
/// profile, plus Gaussian noise.
GrayImage blob_phantom(const PhantomSpec& spec);

GrayImage make_phantom(const PhantomSpec& spec);

/// Constants of the synthetic load model failure_load = a + b c + noise.
inline constexpr double kCohortBaseLoad = 2000;      // N
inline constexpr double kCohortCoherenceGain = 1500; // N per unit coherence

struct CohortSpec {
  int n_specimens = 60;
  double coherence_min = 0;
  double coherence_max = 1;
  double noise_sigma_load = 100;  // N
  std::uint64_t seed = 1;

  int width = 96;
  int height = 96;
  double period = 8;
  double stripe_angle = 60;   // degrees, the shared preferred direction
  double angle_jitter = 10;   // degrees, uniform +- per specimen
  double contrast = 100;
  double pixel_noise = 5;     // gray units
};

struct Specimen {
  std::string id;
  GrayImage image;
  double coherence = 0;
  double failure_load = 0;
};

/// Specimens mixing oriented stripes (weight c) with isotropic blobs
/// (weight 1 - c). Every image has mean gray level exactly contrast / 2, so
/// mean intensity carries no information about the load.
std::vector<Specimen> synthetic_cohort(const CohortSpec& spec, unsigned threads = 0);

/// Specimen `index` alone; synthetic_cohort(spec)[i] == cohort_member(spec, i).
Specimen cohort_member(const CohortSpec& spec, int index);

}  // namespace amf

#endif  // AMF_PHANTOMS_HPP
