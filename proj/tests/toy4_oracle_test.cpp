// Brute-force computations on the literal TOY4 matrix, independent of the
// library. The frozen constants used elsewhere in the suite come from here.

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace {

using citenv::testing::kToy4;

double col_sum(int j, const int* keep, int n) {
  double s = 0;
  for (int a = 0; a < n; ++a) s += static_cast<double>(kToy4[keep[a]][j]);
  return s;
}

TEST(Toy4Oracle, Totals) {
  std::int64_t sum = 0, diag = 0;
  int nonzero = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      sum += kToy4[i][j];
      nonzero += kToy4[i][j] > 0;
      if (i == j) diag += kToy4[i][j];
    }
  EXPECT_EQ(sum, 86);
  EXPECT_EQ(diag, 68);
  EXPECT_EQ(nonzero, 10);
  EXPECT_DOUBLE_EQ(100.0 * nonzero / 16.0, 62.5);
}

TEST(Toy4Oracle, CitedEnvironmentOfB) {
  // B receives 28 citations; 1% of 28 rounds up to 1, so every citer enters.
  const int keep[3] = {0, 1, 2};
  double n = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) n += static_cast<double>(kToy4[keep[a]][keep[b]]);
  EXPECT_EQ(n, 74);
  EXPECT_EQ(col_sum(0, keep, 3), 14);
  EXPECT_EQ(col_sum(1, keep, 3), 28);
  EXPECT_EQ(col_sum(2, keep, 3), 32);

  EXPECT_NEAR(100.0 * 14 / 74, 18.918919, 5e-7);
  EXPECT_NEAR(100.0 * 28 / 74, 37.837838, 5e-7);
  EXPECT_NEAR(100.0 * 32 / 74, 43.243243, 5e-7);
  EXPECT_NEAR(100.0 * 4 / 74, 5.405405, 5e-7);
  EXPECT_NEAR(100.0 * 8 / 74, 10.810811, 5e-7);
  EXPECT_NEAR(100.0 * 2 / 74, 2.702703, 5e-7);
}

TEST(Toy4Oracle, CitedCosines) {
  auto cos_cols = [](int x, int y) {
    double dot = 0, xx = 0, yy = 0;
    for (int i = 0; i < 3; ++i) {
      const double a = static_cast<double>(kToy4[i][x]);
      const double b = static_cast<double>(kToy4[i][y]);
      dot += a * b;
      xx += a * a;
      yy += b * b;
    }
    return dot / std::sqrt(xx * yy);
  };
  // Closed forms: 130/sqrt(116*434), 130/sqrt(434*904), 8/sqrt(116*904).
  EXPECT_NEAR(cos_cols(0, 1), 130.0 / std::sqrt(116.0 * 434.0), 1e-15);
  EXPECT_NEAR(cos_cols(0, 1), 0.5793880, 5e-8);
  EXPECT_NEAR(cos_cols(1, 2), 0.2075460, 5e-8);
  EXPECT_NEAR(cos_cols(0, 2), 0.0247045, 5e-8);
}

TEST(Toy4Oracle, PearsonOnRowsAndColumns) {
  auto pearson = [](auto get, int x, int y) {
    double mx = 0, my = 0;
    for (int k = 0; k < 3; ++k) {
      mx += get(x, k);
      my += get(y, k);
    }
    mx /= 3;
    my /= 3;
    double sxy = 0, sxx = 0, syy = 0;
    for (int k = 0; k < 3; ++k) {
      sxy += (get(x, k) - mx) * (get(y, k) - my);
      sxx += (get(x, k) - mx) * (get(x, k) - mx);
      syy += (get(y, k) - my) * (get(y, k) - my);
    }
    return sxy / std::sqrt(sxx * syy);
  };
  // Observations are the three environment members of B; variables are
  // the members' citing rows (restricted to A..C) or cited columns.
  auto row = [](int v, int k) { return static_cast<double>(kToy4[v][k]); };
  auto col = [](int v, int k) { return static_cast<double>(kToy4[k][v]); };
  EXPECT_NEAR(pearson(row, 0, 1), 0.10136061, 5e-9);
  EXPECT_NEAR(pearson(row, 0, 2), -0.9078413, 5e-8);
  EXPECT_NEAR(pearson(row, 1, 2), -0.50917371, 5e-9);
  EXPECT_NEAR(pearson(col, 0, 1), -0.0071276, 5e-8);
  EXPECT_NEAR(pearson(col, 0, 2), -0.83706241, 5e-9);
  EXPECT_NEAR(pearson(col, 1, 2), -0.54112726, 5e-9);
}

}  // namespace
