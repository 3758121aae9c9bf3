#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "citenv/errors.hpp"
#include "citenv/journal_store.hpp"
#include "citenv/matrix.hpp"

namespace citenv {

/// Which relation delimits an environment. `combined` is the union of the
/// cited and citing environments.
enum class Direction { cited, citing, combined };

/// Which profile a map is built from: being-cited columns or citing rows.
enum class Axis { cited, citing };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::cited: return "cited";
    case Direction::citing: return "citing";
    case Direction::combined: return "combined";
  }
  return "?";
}

inline std::string_view to_string(Axis a) {
  return a == Axis::cited ? "cited" : "citing";
}

inline Direction parse_direction(std::string_view s) {
  if (s == "cited") return Direction::cited;
  if (s == "citing") return Direction::citing;
  if (s == "combined") return Direction::combined;
  throw Error(ErrorKind::invalid_input,
              "direction must be cited, citing or combined, got '" +
                  std::string(s) + "'");
}

inline Axis parse_axis(std::string_view s) {
  if (s == "cited") return Axis::cited;
  if (s == "citing") return Axis::citing;
  throw Error(ErrorKind::invalid_input,
              "axis must be cited or citing, got '" + std::string(s) + "'");
}

/// Combined environments are drawn on the being-cited axis unless told
/// otherwise.
inline Axis default_axis(Direction d) {
  return d == Direction::citing ? Axis::citing : Axis::cited;
}

/// Smallest integer k with k >= fraction * total. A count qualifies iff it
/// reaches k, so an exact product (e.g. 22.0) is itself admitted. The
/// product is taken with a relative slack of 1e-9 because decimal fractions
/// such as 0.01 are not representable: 0.01 * 2200 evaluates to
/// 22.000000000000004 and must still yield 22.
inline Count min_count(Count total, double fraction) {
  if (total < 0)
    throw Error(ErrorKind::invalid_input, "total must be non-negative");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(ErrorKind::invalid_input,
                "threshold fraction must lie in (0, 1)");
  const double product = fraction * static_cast<double>(total);
  return static_cast<Count>(std::ceil(product - 1e-9 * std::max(1.0, product)));
}

struct Thresholds {
  double cited = 0.01;
  double citing = 0.01;
};

struct Environment {
  std::string seed;
  Direction direction = Direction::cited;
  Thresholds thresholds;
  std::vector<std::string> members;  // journal ids, sorted by label
  std::vector<std::string> labels;   // parallel to members

  std::size_t size() const noexcept { return members.size(); }
};

namespace detail {

inline std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Case-insensitive label order; ties by exact label, then id.
inline void sort_by_label(const CitationDataset& ds,
                          std::vector<std::size_t>& indices) {
  std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
    const auto& ja = ds.journal(a);
    const auto& jb = ds.journal(b);
    const auto fa = fold_case(ja.label), fb = fold_case(jb.label);
    return std::tie(fa, ja.label, ja.id) < std::tie(fb, jb.label, jb.id);
  });
}

}  // namespace detail

/// Journals whose relation to `seed` reaches the threshold fraction of the
/// seed's total in that direction, plus the seed itself.
inline Environment extract(const CitationDataset& ds, std::string_view seed,
                           Direction direction, Thresholds thresholds) {
  const std::size_t s = ds.index_of(seed);
  const JournalRecord& rec = ds.journal(s);
  const bool want_cited = direction != Direction::citing;
  const bool want_citing = direction != Direction::cited;

  auto check = [](double f) {
    if (!(f > 0.0 && f < 1.0))
      throw Error(ErrorKind::invalid_input,
                  "threshold fraction must lie in (0, 1)");
  };
  if (want_cited) check(thresholds.cited);
  if (want_citing) check(thresholds.citing);

  const bool cited_ok = want_cited && rec.total_cited > 0;
  const bool citing_ok = want_citing && rec.total_citing > 0;
  if (!cited_ok && !citing_ok) {
    std::string msg = "journal '" + rec.id + "' has zero total ";
    if (direction == Direction::cited)
      msg += "cited; try the citing direction";
    else if (direction == Direction::citing)
      msg += "citing; try the cited direction";
    else
      msg += "citing and cited";
    throw Error(ErrorKind::unprocessable, msg);
  }

  std::vector<std::size_t> picked{s};
  if (cited_ok) {
    const Count k = min_count(rec.total_cited, thresholds.cited);
    for (const Entry& e : ds.column(s))
      if (e.count >= k) picked.push_back(e.index);
  }
  if (citing_ok) {
    const Count k = min_count(rec.total_citing, thresholds.citing);
    for (const Entry& e : ds.row(s))
      if (e.count >= k) picked.push_back(e.index);
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  detail::sort_by_label(ds, picked);

  Environment env{rec.id, direction, thresholds, {}, {}};
  for (std::size_t i : picked) {
    env.members.push_back(ds.journal(i).id);
    env.labels.push_back(ds.journal(i).label);
  }
  return env;
}

inline Environment extract(const CitationDataset& ds, std::string_view seed,
                           Direction direction, double threshold_fraction = 0.01) {
  return extract(ds, seed, direction,
                 Thresholds{threshold_fraction, threshold_fraction});
}

/// Dense citing x cited counts among environment members (rows citing).
struct EnvironmentMatrix {
  std::vector<std::string> members;
  std::vector<std::string> labels;
  Matrix<Count> cells;
  Count grandsum = 0;
  Count cell_floor = 2;

  std::size_t size() const noexcept { return members.size(); }

  Count trace() const {
    Count t = 0;
    for (std::size_t i = 0; i < cells.rows(); ++i) t += cells(i, i);
    return t;
  }
};

/// Cells below `cell_floor` are zeroed before the grandsum is taken; the
/// source data folds single citations into an "All others" row, hence the
/// default of 2.
inline EnvironmentMatrix build_matrix(const CitationDataset& ds,
                                      const Environment& env,
                                      Count cell_floor = 2) {
  if (env.members.empty())
    throw Error(ErrorKind::invalid_input, "environment has no members");
  if (cell_floor < 1)
    throw Error(ErrorKind::invalid_input, "cell floor must be at least 1");
  const std::size_t n = env.members.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = ds.index_of(env.members[i]);

  EnvironmentMatrix m{env.members, env.labels, Matrix<Count>(n, n), 0, cell_floor};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Count c = ds.count(idx[i], idx[j]);
      if (c >= cell_floor) {
        m.cells(i, j) = c;
        m.grandsum += c;
      }
    }
  return m;
}

}  // namespace citenv
