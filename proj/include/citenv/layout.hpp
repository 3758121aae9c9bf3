#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "citenv/errors.hpp"
#include "citenv/matrix.hpp"
#include "citenv/similarity.hpp"

namespace citenv {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// SplitMix64: fully specified, so seeded layouts agree across standard
/// library implementations (std distributions do not).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Graph distances between members: an edge of cosine c has length 1 - c,
/// longer distances are shortest-path sums, and pairs in different
/// components are kUnreachable.
inline Matrix<double> target_distances(const CosineMatrix& cosines) {
  const std::size_t n = cosines.size();
  Matrix<double> d(n, n, kUnreachable);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && cosines.values(i, j) > 0.0)
        d(i, j) = 1.0 - cosines.values(i, j);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d(i, k) == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
    }
  return d;
}

/// Spring rest lengths: target distances floored at `min_length` so that
/// cosine-1 pairs do not produce zero-length springs.
inline Matrix<double> spring_lengths(const Matrix<double>& distances,
                                     double min_length = 0.01) {
  Matrix<double> l = distances;
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t j = 0; j < l.cols(); ++j)
      if (i != j && l(i, j) != kUnreachable) l(i, j) = std::max(l(i, j), min_length);
  return l;
}

/// E = sum over connected pairs i<j of (|p_i - p_j| - l_ij)^2 / l_ij^2.
inline double spring_energy(std::span<const Point> p, const Matrix<double>& lengths) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double l = lengths(i, j);
      if (l == kUnreachable) continue;
      const double dist = std::hypot(p[i].x - p[j].x, p[i].y - p[j].y);
      e += (dist - l) * (dist - l) / (l * l);
    }
  return e;
}

/// Analytic dE/dp for every node. Coincident pairs contribute nothing (their
/// direction is undefined).
inline std::vector<Point> spring_gradient(std::span<const Point> p,
                                          const Matrix<double>& lengths) {
  std::vector<Point> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double l = lengths(i, j);
      if (l == kUnreachable) continue;
      const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
      const double dist = std::hypot(dx, dy);
      if (dist < 1e-15) continue;
      const double f = 2.0 * (dist - l) / (l * l * dist);
      g[i].x += f * dx;
      g[i].y += f * dy;
      g[j].x -= f * dx;
      g[j].y -= f * dy;
    }
  return g;
}

struct LayoutOptions {
  double tolerance = 1e-4;         // stop once a move is shorter than this
  std::size_t max_iterations = 10000;
  double min_length = 0.01;
  bool record_energy = false;      // fill LayoutResult::energy_trace
};

struct LayoutResult {
  std::vector<Point> positions;  // rescaled into [0, 1]^2
  double energy = 0.0;           // of the unscaled configuration
  std::uint64_t rng_seed = 0;
  std::size_t iterations = 0;
  std::vector<double> energy_trace;  // total energy after each accepted move
};

namespace detail {

struct Relaxed {
  std::vector<Point> positions;
  double energy = 0.0;
  std::size_t iterations = 0;
};

inline double node_energy(std::span<const Point> p, const Matrix<double>& l,
                          std::size_t m, Point at) {
  double e = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == m || l(m, j) == kUnreachable) continue;
    const double dist = std::hypot(at.x - p[j].x, at.y - p[j].y);
    e += (dist - l(m, j)) * (dist - l(m, j)) / (l(m, j) * l(m, j));
  }
  return e;
}

}  // namespace detail

/// Kamada-Kawai relaxation of one connected node set: each iteration moves
/// the node with the largest gradient by a Newton-Raphson step on its own
/// coordinates, halving the step until the energy does not rise. Positions
/// are left unscaled.
inline detail::Relaxed relax_component(const Matrix<double>& lengths,
                                       SplitMix64& rng,
                                       const LayoutOptions& options,
                                       std::vector<double>* trace) {
  const std::size_t n = lengths.rows();
  detail::Relaxed out;
  out.positions.resize(n);
  if (n <= 1) return out;

  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (lengths(i, j) != kUnreachable) extent = std::max(extent, lengths(i, j));
  for (Point& pt : out.positions) {
    pt.x = rng.uniform() * extent;
    pt.y = rng.uniform() * extent;
  }

  auto& p = out.positions;
  out.energy = spring_energy(p, lengths);
  for (; out.iterations < options.max_iterations; ++out.iterations) {
    const auto grad = spring_gradient(p, lengths);
    std::size_t m = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double norm = std::hypot(grad[i].x, grad[i].y);
      if (norm > worst) {
        worst = norm;
        m = i;
      }
    }
    if (worst < 1e-12) break;

    double hxx = 0.0, hyy = 0.0, hxy = 0.0, kdiag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double l = lengths(m, j);
      if (j == m || l == kUnreachable) continue;
      const double dx = p[m].x - p[j].x, dy = p[m].y - p[j].y;
      const double dist = std::hypot(dx, dy);
      const double k = 2.0 / (l * l);
      kdiag += k;
      if (dist < 1e-15) continue;
      const double d3 = dist * dist * dist;
      hxx += k * (1.0 - l * dy * dy / d3);
      hyy += k * (1.0 - l * dx * dx / d3);
      hxy += k * l * dx * dy / d3;
    }
    const Point g = grad[m];
    const double det = hxx * hyy - hxy * hxy;
    Point newton{-g.x / kdiag, -g.y / kdiag};
    if (det > 1e-18 && hxx > 0.0)
      newton = {-(hyy * g.x - hxy * g.y) / det, -(hxx * g.y - hxy * g.x) / det};
    const Point steepest{-g.x / kdiag, -g.y / kdiag};

    const double before = detail::node_energy(p, lengths, m, p[m]);
    bool accepted = false;
    double moved = 0.0;
    for (const Point dir : {newton, steepest}) {
      double t = 1.0;
      for (int halving = 0; halving < 50 && !accepted; ++halving, t *= 0.5) {
        const Point trial{p[m].x + t * dir.x, p[m].y + t * dir.y};
        const double after = detail::node_energy(p, lengths, m, trial);
        if (after <= before) {
          accepted = true;
          moved = t * std::hypot(dir.x, dir.y);
          p[m] = trial;
          out.energy -= before - after;
        }
      }
      if (accepted) break;
    }
    if (!accepted) break;
    if (trace) trace->push_back(spring_energy(p, lengths));
    if (moved < options.tolerance) {
      ++out.iterations;
      break;
    }
  }
  out.energy = spring_energy(p, lengths);
  return out;
}

/// Lays out every connected component on its own. The largest component
/// sits in the middle; the others go on a surrounding ring at a seeded
/// starting angle. The drawing is then scaled uniformly into [0, 1]^2.
inline LayoutResult kk_layout(const Matrix<double>& distances,
                              std::uint64_t rng_seed,
                              const LayoutOptions& options = {}) {
  const std::size_t n = distances.rows();
  if (n == 0 || distances.cols() != n)
    throw Error(ErrorKind::invalid_input, "layout needs a square, non-empty distance matrix");
  const Matrix<double> lengths = spring_lengths(distances, options.min_length);

  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j)
      if (lengths(s, j) != kUnreachable) {
        comp[j] = components.size();
        members.push_back(j);
      }
    components.push_back(std::move(members));
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  LayoutResult result;
  result.rng_seed = rng_seed;
  std::vector<Point> raw(n);
  SplitMix64 rng(rng_seed);
  std::vector<double> radius(components.size(), 0.0);
  double longest = options.min_length;

  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    Matrix<double> sub(members.size(), members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b) {
        sub(a, b) = lengths(members[a], members[b]);
        if (a != b) longest = std::max(longest, sub(a, b));
      }
    auto relaxed = relax_component(sub, rng, options,
                                   options.record_energy ? &result.energy_trace : nullptr);
    result.energy += relaxed.energy;
    result.iterations += relaxed.iterations;

    Point centroid;
    for (const Point& pt : relaxed.positions) {
      centroid.x += pt.x / static_cast<double>(members.size());
      centroid.y += pt.y / static_cast<double>(members.size());
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      const Point pt{relaxed.positions[a].x - centroid.x,
                     relaxed.positions[a].y - centroid.y};
      raw[members[a]] = pt;
      radius[c] = std::max(radius[c], std::hypot(pt.x, pt.y));
    }
  }

  if (components.size() > 1) {
    double outer = 0.0;
    for (std::size_t c = 1; c < components.size(); ++c) outer = std::max(outer, radius[c]);
    const double ring = radius[0] + 0.5 * longest + outer;
    const double base = rng.uniform() * 2.0 * std::numbers::pi;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(components.size() - 1);
    for (std::size_t c = 1; c < components.size(); ++c) {
      const double angle = base + step * static_cast<double>(c - 1);
      const Point offset{ring * std::cos(angle), ring * std::sin(angle)};
      for (std::size_t j : components[c]) {
        raw[j].x += offset.x;
        raw[j].y += offset.y;
      }
    }
  }

  double lo_x = raw[0].x, hi_x = raw[0].x, lo_y = raw[0].y, hi_y = raw[0].y;
  for (const Point& pt : raw) {
    lo_x = std::min(lo_x, pt.x);
    hi_x = std::max(hi_x, pt.x);
    lo_y = std::min(lo_y, pt.y);
    hi_y = std::max(hi_y, pt.y);
  }
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  const Point mid{(lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0};
  result.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (span <= 0.0) {
      result.positions[i] = {0.5, 0.5};
    } else {
      result.positions[i] = {std::clamp(0.5 + (raw[i].x - mid.x) / span, 0.0, 1.0),
                             std::clamp(0.5 + (raw[i].y - mid.y) / span, 0.0, 1.0)};
    }
  }
  return result;
}

}  // namespace citenv
