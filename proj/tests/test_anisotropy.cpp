#include <doctest.h>

#include <cmath>

#include "amf/anisotropy.hpp"
#include "test_support.hpp"

using namespace amf;
using amf::testing::axial_distance;
using doctest::Approx;

namespace {

Octet<double> octet(double m0, double m45, double m90, double m135) {
  return mirror_points<double>(Eigen::Vector4d(m0, m45, m90, m135));
}

// Magnitudes (sqrt(a), 0, 1, 0) have fa = |a - 1| / hypot(a, 1); solve for a given fa.
double magnitude_for_fa(double fa) {
  const double k = 1 - fa * fa;
  return std::sqrt((1 + std::sqrt(1 - k * k)) / k);
}

AmfPlane single_pixel_plane(double threshold, const Eigen::Vector4d& m) {
  AmfPlane p{threshold, BinaryImage::Constant(1, 1, true), {DirectionalAmf::Zero()}};
  for (int f = 0; f < 3; ++f) p.values[0].row(f) = m.transpose();
  return p;
}

}  // namespace

TEST_CASE("mirrored octets") {
  const Octet<double> p = octet(1, 0, 0, 0);
  CHECK(p(0, 0) == 1);
  CHECK(p(1, 0) == 0);
  CHECK(p(0, 4) == -1);
  CHECK(p.rightCols(3).isZero());
  CHECK(p.block(0, 1, 2, 3).isZero());

  const double c = 1.7;
  const Octet<double> q = octet(c, c, c, c);
  for (int i = 0; i < 8; ++i) {
    CHECK(q.col(i).norm() == Approx(c).epsilon(1e-15));
    CHECK(axial_distance(std::atan2(q(1, i), q(0, i)) * 180 / M_PI, 45.0 * (i % 4)) < 1e-12);
  }

  // Sign is absorbed: the same point set, in a different column order.
  const Octet<double> a = octet(-2, 0, 1, 0), b = octet(2, 0, 1, 0);
  CHECK(a.col(0) == b.col(4));
  CHECK(a.col(4) == b.col(0));
  CHECK(a.col(2) == b.col(2));
}

TEST_CASE("pca2 closed forms") {
  const auto e1 = pca2(octet(1, 0, 0, 0));
  CHECK(e1.lambda1 == Approx(0.25).epsilon(1e-15));
  CHECK(e1.lambda2 == Approx(0.0));
  CHECK(e1.principal_angle == Approx(0.0));

  const auto e2 = pca2(octet(0, 1, 0, 0));
  CHECK(e2.lambda1 == Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(e2.lambda2) < 1e-16);
  CHECK(e2.principal_angle == Approx(45.0).epsilon(1e-12));

  const double c = 3;
  const auto e3 = pca2(octet(c, c, c, c));
  CHECK(e3.lambda1 == Approx(c * c / 2).epsilon(1e-15));
  CHECK(e3.lambda2 == Approx(c * c / 2).epsilon(1e-15));

  CHECK(pca2(octet(0, 0, 0, 0)).degenerate);
}

TEST_CASE("fractional anisotropy closed forms") {
  CHECK(fractional_anisotropy(EigenPair<double>{2, 2, 0, false}) == 0);
  CHECK(fractional_anisotropy(EigenPair<double>{2, 0, 0, false}) == 1);

  const auto e = pca2(octet(2, 0, 1, 0));
  CHECK(e.lambda1 == Approx(1.0).epsilon(1e-15));
  CHECK(e.lambda2 == Approx(0.25).epsilon(1e-15));
  const double fa = fractional_anisotropy(e);
  CHECK(fa == Approx(0.75 / std::sqrt(1.0625)).epsilon(1e-15));
  CHECK(std::abs(fa - 0.727607) <= 1e-6);
  CHECK(std::abs(e.principal_angle) <= 1e-9);

  for (int d = 0; d < 4; ++d) {
    Eigen::Vector4d m = Eigen::Vector4d::Zero();
    m(d) = 0.8;
    const AnisotropyResult r = anisotropy(m);
    CHECK(r.fa == Approx(1.0).epsilon(1e-15));
    CHECK(r.oriented);
    CHECK(axial_distance(r.angle, kDirections[static_cast<std::size_t>(d)]) < 1e-9);
  }
}

TEST_CASE("cutoff and degenerate magnitudes") {
  const AnisotropyResult zero = anisotropy(Eigen::Vector4d::Zero());
  CHECK(zero.fa == 0);
  CHECK(!zero.oriented);

  const AnisotropyResult iso = anisotropy(Eigen::Vector4d::Constant(2.5));
  CHECK(iso.fa < 1e-15);
  CHECK(!iso.oriented);

  const double m = magnitude_for_fa(0.02);
  CHECK(anisotropy(Eigen::Vector4d(m, 0, 1, 0)).fa == Approx(0.02).epsilon(1e-12));
  CHECK(!anisotropy(Eigen::Vector4d(m, 0, 1, 0)).oriented);
  CHECK(anisotropy(Eigen::Vector4d(m, 0, 1, 0), 0.01).oriented);
}

TEST_CASE("scale, sign and label-rotation invariances") {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Vector4d m(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                            rng.uniform(-2, 2));
    const AnisotropyResult base = anisotropy(m, 0);

    const double c = trial % 2 ? 7.3 : -0.37;
    const AnisotropyResult scaled = anisotropy(c * m, 0);
    CHECK(std::abs(scaled.fa - base.fa) <= 1e-12);
    CHECK(axial_distance(scaled.angle, base.angle) <= 1e-9);

    Eigen::Vector4d flipped = m;
    flipped(static_cast<Eigen::Index>(rng.below(4))) *= -1;
    const AnisotropyResult f = anisotropy(flipped, 0);
    CHECK(std::abs(f.fa - base.fa) <= 1e-12);
    CHECK(axial_distance(f.angle, base.angle) <= 1e-9);

    const AnisotropyResult shifted = anisotropy(Eigen::Vector4d(m(3), m(0), m(1), m(2)), 0);
    CHECK(std::abs(shifted.fa - base.fa) <= 1e-12);
    if (base.fa > 1e-6) CHECK(axial_distance(shifted.angle, base.angle + 45) <= 1e-8);

    CHECK(base.fa >= 0);
    CHECK(base.fa <= 1);
  }
}

TEST_CASE("pca2 agrees with the characteristic polynomial") {
  Rng rng(123);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    Octet<double> p;
    for (int i = 0; i < 16; ++i) p.data()[i] = rng.uniform(-1, 1);
    const Eigen::Matrix2d s = p * p.transpose() / 8.0;
    const double tr = s.trace(), det = s.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
    const double l1 = (tr + disc) / 2, l2 = (tr - disc) / 2;
    const auto e = pca2(p);
    worst = std::max({worst, std::abs(e.lambda1 - l1), std::abs(e.lambda2 - l2)});
    CHECK(e.lambda1 >= e.lambda2);
    // The principal axis is an eigenvector of the largest eigenvalue.
    const Eigen::Vector2d v(std::cos(e.principal_angle * M_PI / 180), std::sin(e.principal_angle * M_PI / 180));
    CHECK((s * v - e.lambda1 * v).norm() <= 1e-12);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("max rule over thresholds") {
  AmfField field{1, 1, {}};
  const double a = magnitude_for_fa(0.01), b = magnitude_for_fa(0.05), c = magnitude_for_fa(0.02);
  field.planes.push_back(single_pixel_plane(10, {a, 0, 1, 0}));
  field.planes.push_back(single_pixel_plane(20, {0, b, 0, 1}));
  field.planes.push_back(single_pixel_plane(30, {1, 0, c, 0}));
  for (Functional f : kFunctionals) {
    const AnisotropyMaps maps = anisotropy_for_functional(field, f);
    CHECK(maps.fa(0, 0) == Approx(0.05).epsilon(1e-12));
    CHECK(maps.source_threshold(0, 0) == 1);
    REQUIRE(maps.oriented(0, 0));
    CHECK(axial_distance(*maps.angle_at(0, 0), 45) < 1e-9);
  }
}

TEST_CASE("ties go to the lowest threshold") {
  AmfField field{1, 1, {}};
  const double m = magnitude_for_fa(0.2);
  field.planes.push_back(single_pixel_plane(10, {1, 0, m, 0}));
  field.planes.push_back(single_pixel_plane(20, {m, 0, 1, 0}));
  const AnisotropyMaps maps = anisotropy_for_functional(field, Functional::area);
  CHECK(maps.source_threshold(0, 0) == 0);
  CHECK(axial_distance(*maps.angle_at(0, 0), 90) < 1e-9);
}

TEST_CASE("rounding-level FA differences count as ties") {
  const double m = magnitude_for_fa(0.2);
  AmfField field{1, 1, {}};
  field.planes.push_back(single_pixel_plane(10, {1, 0, m, 0}));
  field.planes.push_back(single_pixel_plane(20, {m * (1 + 4e-16), 0, 1, 0}));
  REQUIRE(anisotropy(Eigen::Vector4d(m * (1 + 4e-16), 0, 1, 0)).fa != anisotropy(Eigen::Vector4d(1, 0, m, 0)).fa);
  CHECK(anisotropy_for_functional(field, Functional::area).source_threshold(0, 0) == 0);

  field.planes[1] = single_pixel_plane(20, {magnitude_for_fa(0.2 + 1e-9), 0, 1, 0});
  CHECK(anisotropy_for_functional(field, Functional::area).source_threshold(0, 0) == 1);
}

TEST_CASE("background and partially white pixels") {
  AmfField field{2, 1, {}};
  AmfPlane p{10, BinaryImage::Constant(1, 2, false), {DirectionalAmf::Zero(), DirectionalAmf::Zero()}};
  p.white(0, 1) = true;
  p.values[1].row(0) << 1, 0, 0, 0;
  p.values[1].row(1) << 1, 1, 1, 1;
  field.planes.push_back(p);

  const AnisotropyMaps area = anisotropy_for_functional(field, Functional::area);
  CHECK(area.fa(0, 0) == 0);
  CHECK(!area.oriented(0, 0));
  CHECK(area.source_threshold(0, 0) == -1);
  CHECK(area.fa(0, 1) == Approx(1.0));
  CHECK(area.oriented(1, 0));

  const AnisotropyMaps perim = anisotropy_for_functional(field, Functional::perimeter);
  CHECK(perim.fa(0, 1) < 1e-15);
  CHECK(!perim.oriented(1, 0));
  CHECK(perim.source_threshold(0, 1) == 0);
}
