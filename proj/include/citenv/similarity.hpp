#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/log.hpp"
#include "citenv/matrix.hpp"

namespace citenv {

/// Cosine of the angle between two non-negative vectors. A zero vector has
/// no direction; it is reported as maximally dissimilar (0).
inline double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw Error(ErrorKind::invalid_input,
                "cosine needs two vectors of equal, non-zero length");
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) {
    log::debug("cosine of a zero vector taken as 0");
    return 0.0;
  }
  const double c = dot / std::sqrt(xx * yy);
  return std::min(c, 1.0);
}

struct CosineOptions {
  bool include_diagonal = true;
  double cutoff = 0.2;
};

struct CosineMatrix {
  std::vector<std::string> members;
  Matrix<double> values;  // symmetric, zero diagonal, sub-cutoff entries 0
  double cutoff = 0.2;
  Axis axis = Axis::cited;
  bool include_diagonal = true;
  std::vector<std::size_t> zero_profiles;  // members with an all-zero vector

  std::size_t size() const noexcept { return members.size(); }

  /// Number of retained (non-zero) off-diagonal pairs.
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < values.rows(); ++i)
      for (std::size_t j = i + 1; j < values.cols(); ++j)
        if (values(i, j) > 0.0) ++n;
    return n;
  }
};

/// Profile of member `j`: column j on the cited axis, row j on the citing
/// axis. Without the diagonal, the member's own entry is zeroed.
inline std::vector<double> profile(const EnvironmentMatrix& m, Axis axis,
                                   std::size_t j, bool include_diagonal) {
  const std::size_t n = m.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = static_cast<double>(axis == Axis::cited ? m.cells(i, j) : m.cells(j, i));
  if (!include_diagonal) v[j] = 0.0;
  return v;
}

/// Pairwise cosines between member profiles; values below the cutoff are
/// stored as exact zeros.
inline CosineMatrix cosine_map(const EnvironmentMatrix& m, Axis axis,
                               CosineOptions options = {}) {
  if (!(options.cutoff >= 0.0 && options.cutoff <= 1.0))
    throw Error(ErrorKind::invalid_input, "cosine cutoff must lie in [0, 1]");
  const std::size_t n = m.size();
  CosineMatrix out{m.members, Matrix<double>(n, n), options.cutoff, axis,
                   options.include_diagonal, {}};

  std::vector<std::vector<double>> profiles(n);
  for (std::size_t j = 0; j < n; ++j) {
    profiles[j] = profile(m, axis, j, options.include_diagonal);
    bool zero = true;
    for (double x : profiles[j]) zero = zero && x == 0.0;
    if (zero) out.zero_profiles.push_back(j);
  }
  if (!out.zero_profiles.empty())
    log::info(std::to_string(out.zero_profiles.size()) +
              " member(s) with an all-zero profile get zero cosines");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double c = cosine(profiles[i], profiles[j]);
      if (c < options.cutoff) c = 0.0;
      out.values(i, j) = c;
      out.values(j, i) = c;
    }
  return out;
}

}  // namespace citenv
