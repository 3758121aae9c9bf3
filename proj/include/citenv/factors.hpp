#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/log.hpp"
#include "citenv/matrix.hpp"
#include "citenv/numfmt.hpp"

namespace citenv {

struct CorrelationResult {
  std::vector<std::string> variables;  // retained, in input order
  std::vector<std::string> dropped;    // zero-variance variables
  Matrix<double> r;
};

/// Pearson correlations between the columns of `observations` (rows are
/// observations). Constant columns are dropped: they carry no factor
/// information and their r is undefined.
inline CorrelationResult pearson_correlation(const Matrix<double>& observations,
                                             const std::vector<std::string>& names) {
  const std::size_t rows = observations.rows(), cols = observations.cols();
  if (names.size() != cols)
    throw Error(ErrorKind::invalid_input, "one name per variable is required");
  if (rows < 2)
    throw Error(ErrorKind::invalid_input, "correlation needs at least two observations");

  CorrelationResult out;
  std::vector<std::vector<double>> centered;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> v = observations.column(c);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(rows);
    double ss = 0.0;
    for (double& x : v) {
      x -= mean;
      ss += x * x;
    }
    if (ss <= 1e-12 * std::max(1.0, mean * mean) * static_cast<double>(rows)) {
      out.dropped.push_back(names[c]);
      log::warning("variable '" + names[c] + "' has zero variance; dropped");
      continue;
    }
    const double norm = std::sqrt(ss);
    for (double& x : v) x /= norm;
    centered.push_back(std::move(v));
    out.variables.push_back(names[c]);
  }

  const std::size_t p = centered.size();
  out.r = Matrix<double>(p, p);
  for (std::size_t a = 0; a < p; ++a) {
    out.r(a, a) = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += centered[a][i] * centered[b][i];
      s = std::clamp(s, -1.0, 1.0);
      out.r(a, b) = s;
      out.r(b, a) = s;
    }
  }
  return out;
}

/// Correlations between members' profiles: citing rows on the citing axis,
/// cited columns on the cited axis.
inline CorrelationResult correlation_matrix(const EnvironmentMatrix& m, Axis axis) {
  if (m.size() < 2)
    throw Error(ErrorKind::invalid_input, "insufficient variables");
  Matrix<double> obs(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      obs(i, j) = static_cast<double>(axis == Axis::cited ? m.cells(i, j) : m.cells(j, i));
  return pearson_correlation(obs, m.labels);
}

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix<double> vectors;      // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix, iterated until
/// the off-diagonal mass falls below `tolerance`.
inline SymmetricEigen jacobi_eigen(const Matrix<double>& input, double tolerance = 1e-12) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw Error(ErrorKind::invalid_input, "matrix must be square");
  Matrix<double> a = input;
  Matrix<double> v = Matrix<double>::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweeps = 0;
  for (; sweeps < 100 && off_norm() > tolerance; ++sweeps) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  SymmetricEigen out{std::vector<double>(n), Matrix<double>(n, n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

struct LoadingsMatrix {
  std::vector<std::string> variables;
  Matrix<double> loadings;           // p x k
  std::vector<double> eigenvalues;   // the k retained, descending
  double variance_explained_percent = 0.0;
  int rotation_iterations = 0;
  bool rotated = false;
  double display_suppression = 0.1;
  std::vector<std::string> warnings;
};

namespace detail {

/// Makes the largest-magnitude entry of each column positive; `companion`
/// (if any) gets the same column flips.
inline void orient_columns(Matrix<double>& m, Matrix<double>* companion = nullptr) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c)) + 1e-12) best = r;
    if (m(best, c) >= 0.0) continue;
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
    if (companion)
      for (std::size_t r = 0; r < companion->rows(); ++r) (*companion)(r, c) = -(*companion)(r, c);
  }
}

}  // namespace detail

/// Principal components of a correlation matrix. Without `k` the Kaiser
/// rule keeps components with eigenvalue above 1; if none qualifies (all
/// eigenvalues equal 1) every component is kept and a warning recorded.
inline LoadingsMatrix pca(const Matrix<double>& correlation,
                          const std::vector<std::string>& variables,
                          std::optional<std::size_t> k = std::nullopt) {
  const std::size_t p = correlation.rows();
  if (p == 0 || correlation.cols() != p || variables.size() != p)
    throw Error(ErrorKind::invalid_input, "correlation matrix must be square with one name per variable");
  if (k && (*k > p || *k == 0))
    throw Error(ErrorKind::invalid_input,
                "cannot extract " + std::to_string(*k) + " components from " +
                    std::to_string(p) + " variables");

  const SymmetricEigen eig = jacobi_eigen(correlation);
  LoadingsMatrix out;
  out.variables = variables;
  std::size_t keep = 0;
  if (k) {
    keep = *k;
  } else {
    for (double ev : eig.values)
      if (ev > 1.0 + 1e-9) ++keep;
    if (keep == 0) {
      keep = p;
      out.warnings.push_back("no eigenvalue exceeds 1; all " + std::to_string(p) +
                             " components kept, no factor structure");
    }
  }

  out.loadings = Matrix<double>(p, keep);
  double explained = 0.0;
  for (std::size_t c = 0; c < keep; ++c) {
    const double ev = std::max(eig.values[c], 0.0);
    out.eigenvalues.push_back(eig.values[c]);
    explained += ev;
    const double scale = std::sqrt(ev);
    for (std::size_t r = 0; r < p; ++r) out.loadings(r, c) = eig.vectors(r, c) * scale;
  }
  out.variance_explained_percent = std::clamp(100.0 * explained / static_cast<double>(p), 0.0, 100.0);
  detail::orient_columns(out.loadings);
  return out;
}

inline LoadingsMatrix pca(const CorrelationResult& corr,
                          std::optional<std::size_t> k = std::nullopt) {
  return pca(corr.r, corr.variables, k);
}

/// Raw varimax criterion: sum over columns of the variance of squared
/// loadings.
inline double varimax_criterion(const Matrix<double>& l) {
  const double p = static_cast<double>(l.rows());
  double total = 0.0;
  for (std::size_t c = 0; c < l.cols(); ++c) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t r = 0; r < l.rows(); ++r) {
      const double sq = l(r, c) * l(r, c);
      s2 += sq;
      s4 += sq * sq;
    }
    total += (p * s4 - s2 * s2) / (p * p);
  }
  return total;
}

struct VarimaxResult {
  Matrix<double> loadings;  // input * rotation
  Matrix<double> rotation;  // k x k orthogonal
  int iterations = 0;       // completed sweeps
};

/// Orthogonal varimax rotation by repeated sweeps of planar rotations over
/// column pairs (0,1), (0,2), ..., (k-2,k-1). Rows are Kaiser-normalised to
/// unit communality first when asked. Stops when a sweep improves the
/// criterion by less than 1e-7.
inline VarimaxResult varimax(const Matrix<double>& loadings, bool kaiser_normalize = true,
                             int max_sweeps = 1000) {
  const std::size_t p = loadings.rows(), k = loadings.cols();
  VarimaxResult out{loadings, Matrix<double>::identity(k), 0};
  if (k < 2) return out;

  std::vector<double> h(p, 1.0);
  Matrix<double> w = loadings;
  if (kaiser_normalize) {
    for (std::size_t r = 0; r < p; ++r) {
      double comm = 0.0;
      for (std::size_t c = 0; c < k; ++c) comm += w(r, c) * w(r, c);
      h[r] = std::sqrt(comm);
      if (h[r] > 0.0)
        for (std::size_t c = 0; c < k; ++c) w(r, c) /= h[r];
    }
  }

  const double n = static_cast<double>(p);
  double criterion = varimax_criterion(w);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t a = 0; a + 1 < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        double sum_u = 0.0, sum_v = 0.0, sum_c = 0.0, sum_d = 0.0;
        for (std::size_t r = 0; r < p; ++r) {
          const double x = w(r, a), y = w(r, b);
          const double u = x * x - y * y, v = 2.0 * x * y;
          sum_u += u;
          sum_v += v;
          sum_c += u * u - v * v;
          sum_d += 2.0 * u * v;
        }
        const double num = sum_d - 2.0 * sum_u * sum_v / n;
        const double den = sum_c - (sum_u * sum_u - sum_v * sum_v) / n;
        if (std::abs(num) < 1e-15 && den >= 0.0) continue;
        const double phi = std::atan2(num, den) / 4.0;
        const double cs = std::cos(phi), sn = std::sin(phi);
        auto turn = [&](Matrix<double>& m) {
          for (std::size_t r = 0; r < m.rows(); ++r) {
            const double x = m(r, a), y = m(r, b);
            m(r, a) = x * cs + y * sn;
            m(r, b) = -x * sn + y * cs;
          }
        };
        turn(w);
        turn(out.rotation);
      }
    ++out.iterations;
    const double next = varimax_criterion(w);
    const double gain = next - criterion;
    criterion = next;
    if (gain < 1e-7) break;
  }

  out.loadings = multiply(loadings, out.rotation);
  detail::orient_columns(out.loadings, &out.rotation);
  return out;
}

inline LoadingsMatrix rotate(const LoadingsMatrix& unrotated, bool kaiser_normalize = true) {
  LoadingsMatrix out = unrotated;
  const VarimaxResult v = varimax(unrotated.loadings, kaiser_normalize);
  out.loadings = v.loadings;
  out.rotation_iterations = v.iterations;
  out.rotated = unrotated.loadings.cols() >= 2;
  return out;
}

inline std::vector<double> communalities(const Matrix<double>& l) {
  std::vector<double> h(l.rows(), 0.0);
  for (std::size_t r = 0; r < l.rows(); ++r)
    for (std::size_t c = 0; c < l.cols(); ++c) h[r] += l(r, c) * l(r, c);
  return h;
}

namespace detail {

/// ".964", "-.236": three decimals without the leading zero.
inline std::string loading_cell(double v) {
  std::string s = fixed(v, 3);
  if (s.starts_with("0.")) s.erase(0, 1);
  else if (s.starts_with("-0.")) s.erase(1, 1);
  return s;
}

}  // namespace detail

/// Plain-text component table: one row per variable, loadings with
/// |value| below the display suppression left blank, method footnotes.
inline std::string render_component_table(const LoadingsMatrix& m) {
  const std::size_t k = m.loadings.cols();
  std::size_t label_width = 8;
  for (const auto& v : m.variables) label_width = std::max(label_width, v.size());
  constexpr std::size_t cell = 8;

  auto right = [](std::string s, std::size_t w) {
    return s.size() < w ? s + std::string(w - s.size(), ' ') : s;
  };
  auto left = [](std::string s, std::size_t w) {
    return s.size() < w ? std::string(w - s.size(), ' ') + s : s;
  };
  std::ostringstream out;
  auto emit = [&](std::string line) {
    line.erase(line.find_last_not_of(' ') + 1);
    out << line << '\n';
  };

  emit(m.rotated ? "Rotated Component Matrix(a)" : "Component Matrix");
  emit(right("", label_width) + left("Component", cell * k));
  std::string header = right("", label_width);
  for (std::size_t c = 0; c < k; ++c) header += left(std::to_string(c + 1), cell);
  emit(header);
  for (std::size_t r = 0; r < m.variables.size(); ++r) {
    std::string line = right(m.variables[r], label_width);
    for (std::size_t c = 0; c < k; ++c) {
      const double v = m.loadings(r, c);
      line += left(std::abs(v) < m.display_suppression ? "" : detail::loading_cell(v), cell);
    }
    emit(line);
  }
  emit("");
  emit(m.rotated ? "Extraction Method: Principal Component Analysis. "
                   "Rotation Method: Varimax with Kaiser Normalization."
                 : "Extraction Method: Principal Component Analysis.");
  if (m.rotated)
    emit("a Rotation converged in " + std::to_string(m.rotation_iterations) + " iterations.");
  emit(std::to_string(k) + " component(s) explaining " +
       fixed(m.variance_explained_percent, 1) + "% of the variance.");
  for (const auto& w : m.warnings) emit("Warning: " + w);
  return out.str();
}

}  // namespace citenv
