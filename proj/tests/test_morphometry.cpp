#include <doctest.h>

#include <set>
#include <tuple>

#include "amf/morphometry.hpp"
#include "test_support.hpp"

using namespace amf;
using amf::testing::from_rows;
using amf::testing::random_binary;

namespace {

// Cell enumeration by inserting each white square's boundary cells into sets.
CellCounts enumerate_cells(const BinaryImage& b) {
  std::set<std::tuple<Eigen::Index, Eigen::Index, int>> edges;  // (line y, line x, orientation)
  std::set<std::pair<Eigen::Index, Eigen::Index>> vertices;
  std::int64_t squares = 0;
  for (Eigen::Index y = 0; y < b.rows(); ++y)
    for (Eigen::Index x = 0; x < b.cols(); ++x) {
      if (!b(y, x)) continue;
      ++squares;
      edges.insert({y, x, 0});
      edges.insert({y + 1, x, 0});
      edges.insert({y, x, 1});
      edges.insert({y, x + 1, 1});
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) vertices.insert({y + dy, x + dx});
    }
  return {squares, static_cast<std::int64_t>(edges.size()),
          static_cast<std::int64_t>(vertices.size())};
}

}  // namespace

TEST_CASE("count_cells on small fixtures") {
  const BinaryImage single = from_rows({"#"});
  CHECK(count_cells(single) == CellCounts{1, 4, 4});

  const BinaryImage block = from_rows({"##", "##"});
  CHECK(enumerate_cells(block) == CellCounts{4, 12, 9});
  CHECK(count_cells(block) == CellCounts{4, 12, 9});

  const BinaryImage ring = from_rows({"###", "#.#", "###"});
  CHECK(enumerate_cells(ring) == CellCounts{8, 24, 16});
  CHECK(count_cells(ring) == CellCounts{8, 24, 16});

  const BinaryImage diagonal = from_rows({"#.", ".#"});
  CHECK(count_cells(diagonal) == CellCounts{2, 8, 7});

  CHECK(count_cells(BinaryImage::Constant(5, 7, false)) == CellCounts{0, 0, 0});
}

TEST_CASE("minkowski_functionals from counts") {
  CHECK(minkowski_functionals(CellCounts{1, 4, 4}) == MfTriple{1, 4, 1});
  CHECK(minkowski_functionals(CellCounts{8, 24, 16}) == MfTriple{8, 16, 0});
  CHECK(minkowski_functionals(CellCounts{2, 8, 7}) == MfTriple{2, 8, 1});
  CHECK(minkowski_functionals(CellCounts{}) == MfTriple{0, 0, 0});
}

TEST_CASE("oracles on fixtures") {
  CHECK(euler_oracle(from_rows({"###", "#.#", "###"})) == 0);
  CHECK(euler_oracle(from_rows({"#..#"})) == 2);
  CHECK(euler_oracle(BinaryImage::Constant(4, 4, false)) == 0);
  // Diagonal touches close the ring, so the centre is a hole.
  CHECK(euler_oracle(from_rows({".#.", "#.#", ".#."})) == 0);
  CHECK(minkowski_functionals(from_rows({".#.", "#.#", ".#."})).euler == 0);

  CHECK(perimeter_oracle(from_rows({"#"})) == 4);
  CHECK(perimeter_oracle(from_rows({"##"})) == 6);
  CHECK(perimeter_oracle(from_rows({"#.", ".#"})) == 8);
}

TEST_CASE("cell counts obey their bounds") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryImage b = random_binary(rng, 1 + static_cast<int>(rng.below(12)),
                                        1 + static_cast<int>(rng.below(12)), rng.uniform());
    const CellCounts c = count_cells(b);
    CHECK(c == enumerate_cells(b));
    CHECK(c.edges <= 4 * c.squares);
    CHECK(c.vertices <= 4 * c.squares);
    CHECK((c.squares == 0) == (c.edges == 0 && c.vertices == 0));
    const MfTriple mf = minkowski_functionals(c);
    CHECK(mf.perimeter % 2 == 0);
    CHECK(mf.perimeter >= 0);
  }
}

TEST_CASE("functionals match the oracles on random images") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = 4 + static_cast<int>(rng.below(13)), h = 4 + static_cast<int>(rng.below(13));
    const BinaryImage b = random_binary(rng, w, h, rng.uniform(0.1, 0.9));
    const MfTriple mf = minkowski_functionals(b);
    REQUIRE(mf.euler == euler_oracle(b));
    REQUIRE(mf.perimeter == perimeter_oracle(b));
  }
}

TEST_CASE("additivity under disjoint union") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryImage a = random_binary(rng, 6, 6, 0.5), b = random_binary(rng, 5, 6, 0.5);
    BinaryImage both = BinaryImage::Constant(6, 6 + 1 + 5, false);
    both.block(0, 0, 6, 6) = a;
    both.block(0, 7, 6, 5) = b;
    MfTriple sum = minkowski_functionals(a);
    sum += minkowski_functionals(b);
    CHECK(minkowski_functionals(both) == sum);
  }
}

TEST_CASE("invariance under rotations and flips") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryImage b = random_binary(rng, 7, 10, rng.uniform(0.2, 0.8));
    const MfTriple mf = minkowski_functionals(b);
    BinaryImage r = b;
    for (int k = 0; k < 3; ++k) {
      r = rot90(r);
      CHECK(minkowski_functionals(r) == mf);
    }
    CHECK(minkowski_functionals(flip_horizontal(b)) == mf);
    CHECK(minkowski_functionals(flip_vertical(b)) == mf);
  }
}

TEST_CASE("full white rectangle") {
  for (auto [w, h] : {std::pair{1, 1}, std::pair{3, 8}, std::pair{16, 5}}) {
    const MfTriple mf = minkowski_functionals(BinaryImage::Constant(h, w, true));
    CHECK(mf.area == w * h);
    CHECK(mf.perimeter == 2 * (w + h));
    CHECK(mf.euler == 1);
  }
}
