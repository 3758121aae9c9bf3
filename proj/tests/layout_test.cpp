#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "test_support.hpp"

namespace {

using namespace citenv;

CosineMatrix cosines_from(std::size_t n, std::initializer_list<std::tuple<int, int, double>> pairs) {
  CosineMatrix cm;
  for (std::size_t i = 0; i < n; ++i) cm.members.push_back("N" + std::to_string(i));
  cm.values = Matrix<double>(n, n);
  for (auto [i, j, c] : pairs) {
    cm.values(i, j) = c;
    cm.values(j, i) = c;
  }
  return cm;
}

// Independent energy: loops over ordered pairs and halves.
double oracle_energy(const std::vector<Point>& p, const Matrix<double>& l) {
  double e = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j || std::isinf(l(i, j))) continue;
      const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      e += 0.5 * (d - l(i, j)) * (d - l(i, j)) / (l(i, j) * l(i, j));
    }
  return e;
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

CosineMatrix random_cosines(std::mt19937_64& rng, std::size_t n, double edge_probability) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CosineMatrix cm;
  for (std::size_t i = 0; i < n; ++i) cm.members.push_back("N" + std::to_string(i));
  cm.values = Matrix<double>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < edge_probability) {
        const double c = 0.2 + 0.8 * u(rng);
        cm.values(i, j) = cm.values(j, i) = c;
      }
  return cm;
}

TEST(TargetDistances, Examples) {
  const auto d = target_distances(cosines_from(4, {{0, 1, 0.6}, {1, 2, 0.8}, {2, 3, 1.0}}));
  EXPECT_NEAR(d(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(d(0, 2), 0.6, 1e-15);
  EXPECT_EQ(d(2, 3), 0.0);
  const auto path = target_distances(cosines_from(3, {{0, 1, 0.8}, {1, 2, 0.5}}));
  EXPECT_NEAR(path(0, 2), 0.7, 1e-15);
  const auto apart = target_distances(cosines_from(3, {{0, 1, 0.5}}));
  EXPECT_EQ(apart(0, 2), kUnreachable);
  const auto l = spring_lengths(d);
  EXPECT_EQ(l(2, 3), 0.01);
  EXPECT_EQ(l(2, 2), 0.0);
}

TEST(TargetDistances, ShortestPathBeatsDirectEdge) {
  // Direct 0-2 edge of length 0.9 against the path 0.1 + 0.1.
  const auto d = target_distances(cosines_from(3, {{0, 1, 0.9}, {1, 2, 0.9}, {0, 2, 0.1}}));
  EXPECT_NEAR(d(0, 2), 0.2, 1e-12);
}

TEST(SpringEnergy, MatchesOracleAndGradient) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cm = random_cosines(rng, 9, 0.5);
    const auto l = spring_lengths(target_distances(cm));
    std::vector<Point> p(9);
    for (auto& pt : p) pt = {u(rng), u(rng)};
    EXPECT_NEAR(spring_energy(p, l), oracle_energy(p, l), 1e-9);
    const auto g = spring_gradient(p, l);
    const double h = 1e-6;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        auto plus = p, minus = p;
        (axis ? plus[i].y : plus[i].x) += h;
        (axis ? minus[i].y : minus[i].x) -= h;
        const double numeric = (oracle_energy(plus, l) - oracle_energy(minus, l)) / (2 * h);
        const double analytic = axis ? g[i].y : g[i].x;
        EXPECT_NEAR(analytic, numeric, 1e-5 * std::max(1.0, std::abs(numeric)));
      }
    }
  }
}

TEST(Layout, TwoNodesSitAtTheirDistance) {
  const auto l = spring_lengths(target_distances(cosines_from(2, {{0, 1, 0.5}})));
  SplitMix64 rng(7);
  const auto r = relax_component(l, rng, {}, nullptr);
  EXPECT_NEAR(dist(r.positions[0], r.positions[1]), 0.5, 1e-3);
}

TEST(Layout, PathIsEvenlySpaced) {
  const auto l = spring_lengths(
      target_distances(cosines_from(5, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {3, 4, 0.5}})));
  SplitMix64 rng(3);
  const auto r = relax_component(l, rng, {}, nullptr);
  for (std::size_t i = 0; i + 1 < 5; ++i)
    EXPECT_NEAR(dist(r.positions[i], r.positions[i + 1]), 0.5, 0.025) << i;
}

TEST(Layout, SingleNodeCentred) {
  const auto res = kk_layout(target_distances(cosines_from(1, {})), 1);
  ASSERT_EQ(res.positions.size(), 1u);
  EXPECT_EQ(res.positions[0], (Point{0.5, 0.5}));
}

TEST(Layout, ScaledIntoUnitSquare) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const auto res = kk_layout(target_distances(random_cosines(rng, 12, 0.3)), trial);
    double lo = 1, hi = 0;
    for (const Point& p : res.positions) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1.0);
      lo = std::min({lo, p.x, p.y});
      hi = std::max({hi, p.x, p.y});
    }
    EXPECT_NEAR(hi - lo, 1.0, 1e-9);  // the longer side spans the square
  }
}

TEST(Layout, EnergyNeverRises) {
  std::mt19937_64 rng(53);
  LayoutOptions opt;
  opt.record_energy = true;
  for (int trial = 0; trial < 10; ++trial) {
    const auto res = kk_layout(target_distances(random_cosines(rng, 15, 0.4)), trial, opt);
    for (std::size_t k = 1; k < res.energy_trace.size(); ++k)
      ASSERT_LE(res.energy_trace[k], res.energy_trace[k - 1] + 1e-12) << k;
  }
}

TEST(Layout, DeterministicForASeed) {
  std::mt19937_64 rng(54);
  const auto d = target_distances(random_cosines(rng, 20, 0.3));
  const auto a = kk_layout(d, 42), b = kk_layout(d, 42), c = kk_layout(d, 43);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_EQ(a.rng_seed, 42u);
  EXPECT_NE(a.positions, c.positions);
}

TEST(Layout, DisconnectedComponentsDoNotOverlap) {
  // Triangle plus a separate pair plus an isolated node.
  const auto cm = cosines_from(6, {{0, 1, 0.9}, {1, 2, 0.9}, {0, 2, 0.9}, {3, 4, 0.9}});
  const auto res = kk_layout(target_distances(cm), 5);
  const auto& p = res.positions;
  for (int i : {0, 1, 2})
    for (int j : {3, 4, 5}) EXPECT_GT(dist(p[i], p[j]), 0.4 * dist(p[0], p[1]));
  EXPECT_NEAR(dist(p[0], p[1]), dist(p[1], p[2]), 0.05 * dist(p[0], p[1]));
}

TEST(Layout, FiftyNodesUnderOneSecond) {
  std::mt19937_64 rng(55);
  const auto d = target_distances(random_cosines(rng, 50, 0.2));
  const auto start = std::chrono::steady_clock::now();
  const auto res = kk_layout(d, 1);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_EQ(res.positions.size(), 50u);
}

TEST(Layout, RejectsEmptyInput) {
  EXPECT_THROW(kk_layout(Matrix<double>(0, 0), 1), Error);
}

}  // namespace
