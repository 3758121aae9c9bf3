#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace {

using namespace citenv;
using citenv::testing::toy4;

EnvironmentMatrix toy4_b() {
  const auto ds = toy4();
  return build_matrix(ds, extract(ds, "B", Direction::cited));
}

double naive_cosine(const std::vector<double>& x, const std::vector<double>& y) {
  long double dot = 0, xx = 0, yy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += static_cast<long double>(x[i]) * y[i];
    xx += static_cast<long double>(x[i]) * x[i];
    yy += static_cast<long double>(y[i]) * y[i];
  }
  if (xx == 0 || yy == 0) return 0.0;
  return static_cast<double>(dot / std::sqrt(xx * yy));
}

TEST(Cosine, Basics) {
  const std::vector<double> a{1, 2, 3}, b{2, 4, 6}, c{0, 0, 5}, d{7, 0, 0}, z{0, 0, 0};
  EXPECT_NEAR(cosine(a, b), 1.0, 1e-15);
  EXPECT_LE(cosine(a, b), 1.0);
  EXPECT_EQ(cosine(c, d), 0.0);
  EXPECT_EQ(cosine(a, z), 0.0);
  EXPECT_THROW(cosine(a, std::vector<double>{1, 2}), Error);
}

TEST(CosineMap, Toy4CitedB) {
  const auto cm = cosine_map(toy4_b(), Axis::cited, {true, 0.0});
  ASSERT_EQ(cm.size(), 3u);
  EXPECT_NEAR(cm.values(0, 1), 130.0 / std::sqrt(116.0 * 434.0), 1e-12);
  EXPECT_NEAR(cm.values(0, 1), 0.5793880, 5e-8);
  EXPECT_NEAR(cm.values(1, 2), 0.2075460, 5e-8);
  EXPECT_NEAR(cm.values(0, 2), 0.0247045, 5e-8);
  // Published approximations, stated to five or six places.
  EXPECT_NEAR(cm.values(0, 1), 0.579386, 1e-5);
  EXPECT_NEAR(cm.values(1, 2), 0.207545, 1e-5);
  EXPECT_NEAR(cm.values(0, 2), 0.024704, 1e-5);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cm.values(i, i), 0.0);
}

TEST(CosineMap, CutoffZeroesWeakPairs) {
  const auto cm = cosine_map(toy4_b(), Axis::cited);
  EXPECT_GT(cm.values(0, 1), 0.0);
  EXPECT_GT(cm.values(1, 2), 0.0);
  EXPECT_EQ(cm.values(0, 2), 0.0);
  EXPECT_EQ(cm.edge_count(), 2u);
  const auto strict = cosine_map(toy4_b(), Axis::cited, {true, 0.3});
  EXPECT_EQ(strict.edge_count(), 1u);
  EXPECT_THROW(cosine_map(toy4_b(), Axis::cited, {true, 1.5}), Error);
}

TEST(CosineMap, ExcludingDiagonal) {
  // Without the diagonal, A's cited profile is (0,4,0) and B's is (5,0,3).
  const auto cm = cosine_map(toy4_b(), Axis::cited, {false, 0.0});
  EXPECT_EQ(cm.values(0, 1), 0.0);
  EXPECT_FALSE(cm.include_diagonal);
}

TEST(CosineMap, ZeroProfileRecorded) {
  EnvironmentMatrix m;
  m.members = m.labels = {"P", "Q", "R"};
  m.cells = Matrix<Count>(3, 3);
  m.cells(0, 0) = 4;
  m.cells(0, 1) = 3;
  m.grandsum = 7;
  const auto cm = cosine_map(m, Axis::cited, {true, 0.0});
  ASSERT_EQ(cm.zero_profiles.size(), 1u);
  EXPECT_EQ(cm.zero_profiles[0], 2u);
  EXPECT_EQ(cm.values(0, 2), 0.0);
  EXPECT_EQ(cm.values(1, 2), 0.0);
}

TEST(CosineMapProperty, MatchesNaiveOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = citenv::testing::random_environment(rng, 8, 50, 0.4);
    for (Axis axis : {Axis::cited, Axis::citing}) {
      const auto cm = cosine_map(m, axis, {true, 0.0});
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
          ASSERT_EQ(cm.values(i, j), cm.values(j, i));
          if (i == j) continue;
          std::vector<double> x(8), y(8);
          for (std::size_t k = 0; k < 8; ++k) {
            x[k] = static_cast<double>(axis == Axis::cited ? m.cells(k, i) : m.cells(i, k));
            y[k] = static_cast<double>(axis == Axis::cited ? m.cells(k, j) : m.cells(j, k));
          }
          const double c = cm.values(i, j);
          ASSERT_NEAR(c, naive_cosine(x, y), 1e-12);
          ASSERT_GE(c, 0.0);
          ASSERT_LE(c, 1.0);
        }
    }
  }
}

TEST(CosineMapProperty, ScaleInvariant) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = citenv::testing::random_environment(rng, 8, 30, 0.3);
    const auto before = cosine_map(m, Axis::cited, {true, 0.0});
    const Count factor = 1 + static_cast<Count>(rng() % 50);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) m.cells(i, j) *= factor;
    m.grandsum *= factor;
    const auto after = cosine_map(m, Axis::cited, {true, 0.0});
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        ASSERT_NEAR(before.values(i, j), after.values(i, j), 1e-12);
  }
}

}  // namespace
