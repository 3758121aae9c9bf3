#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citenv/errors.hpp"
#include "citenv/numfmt.hpp"

namespace citenv {

using Count = std::int64_t;

struct JournalRecord {
  std::string id;
  std::string label;
  Count total_citing = 0;  // includes the discarded "All others" tail
  Count total_cited = 0;

  bool operator==(const JournalRecord&) const = default;
};

struct CitationEdge {
  std::string citing;
  std::string cited;
  Count count = 0;

  bool operator==(const CitationEdge&) const = default;
};

/// One row of the edge input. `line` is the 1-based source line, 0 when the
/// record did not come from a file.
struct EdgeRecord {
  std::string citing;
  std::string cited;
  Count count = 0;
  std::size_t line = 0;
};

struct TotalsRecord {
  std::string journal;
  Count total_citing = 0;
  Count total_cited = 0;
  std::size_t line = 0;
};

struct IngestOptions {
  std::string year_tag;
  /// Extra journal ids to retain even if no stored edge touches them (for
  /// example a processed journal whose citations all fell into the tail).
  std::vector<std::string> roster;
};

/// A stored matrix entry seen from one side: the partner journal index and
/// the count.
struct Entry {
  std::size_t index;
  Count count;

  bool operator==(const Entry&) const = default;
};

struct Margins {
  Count row_sum = 0;
  Count col_sum = 0;
  Count diagonal = 0;

  bool operator==(const Margins&) const = default;
};

struct Citer {
  std::string journal;
  Count count = 0;

  bool operator==(const Citer&) const = default;
};

struct DatasetStats {
  std::size_t n_source_journals = 0;
  std::size_t n_unprocessed_citing = 0;
  std::size_t n_unique_relations = 0;
  double density_percent = 0.0;
  Count sum_relations = 0;
  Count total_citing = 0;
  Count total_cited = 0;
  Count within_journal_total = 0;
  bool totals_derived = false;

  double average_cell_value() const {
    return n_unique_relations == 0
               ? 0.0
               : static_cast<double>(sum_relations) /
                     static_cast<double>(n_unique_relations);
  }
};

inline std::string_view trim(std::string_view s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

/// Display label: the id with every whitespace character removed.
inline std::string make_label(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

/// Immutable sparse citing x cited count matrix with per-journal totals.
/// Journals are held in id order; stored entries are indexed both by row
/// (citing) and by column (cited), each sorted by partner index.
class CitationDataset {
 public:
  std::span<const JournalRecord> journals() const noexcept { return journals_; }
  std::size_t size() const noexcept { return journals_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool totals_derived() const noexcept { return totals_derived_; }
  const std::string& year_tag() const noexcept { return year_tag_; }

  const JournalRecord& journal(std::size_t index) const {
    return journals_.at(index);
  }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = std::lower_bound(
        journals_.begin(), journals_.end(), id,
        [](const JournalRecord& j, std::string_view key) { return j.id < key; });
    if (it == journals_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - journals_.begin());
  }

  std::size_t index_of(std::string_view id) const {
    if (auto idx = find(id)) return *idx;
    throw Error(ErrorKind::not_found,
                "unknown journal '" + std::string(id) + "'");
  }

  /// Outgoing entries (what journal `citing` cites).
  std::span<const Entry> row(std::size_t citing) const {
    return {row_entries_.data() + row_start_.at(citing),
            row_start_[citing + 1] - row_start_[citing]};
  }

  /// Incoming entries (who cites journal `cited`).
  std::span<const Entry> column(std::size_t cited) const {
    return {col_entries_.data() + col_start_.at(cited),
            col_start_[cited + 1] - col_start_[cited]};
  }

  Count count(std::size_t citing, std::size_t cited) const {
    auto r = row(citing);
    auto it = std::lower_bound(
        r.begin(), r.end(), cited,
        [](const Entry& e, std::size_t key) { return e.index < key; });
    return (it != r.end() && it->index == cited) ? it->count : 0;
  }

  std::vector<CitationEdge> edges() const {
    std::vector<CitationEdge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < journals_.size(); ++i)
      for (const Entry& e : row(i))
        out.push_back({journals_[i].id, journals_[e.index].id, e.count});
    return out;
  }

 private:
  friend CitationDataset ingest(std::span<const EdgeRecord>,
                                std::optional<std::span<const TotalsRecord>>,
                                const IngestOptions&);

  std::vector<JournalRecord> journals_;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> row_entries_;
  std::vector<std::size_t> col_start_;
  std::vector<Entry> col_entries_;
  std::size_t edge_count_ = 0;
  bool totals_derived_ = false;
  std::string year_tag_;
};

namespace detail {

inline std::string where(std::size_t line) {
  return line == 0 ? std::string("record") : "line " + std::to_string(line);
}

inline std::string checked_id(std::string_view raw, std::size_t line,
                              std::string_view field) {
  std::string_view id = trim(raw);
  if (id.empty())
    throw Error(ErrorKind::invalid_input,
                where(line) + ": empty " + std::string(field) + " id");
  if (make_label(id).empty())
    throw Error(ErrorKind::invalid_input,
                where(line) + ": id has an empty label");
  return std::string(id);
}

}  // namespace detail

/// Builds the dataset. Input order does not matter: journals and entries are
/// sorted before indexing. Without totals records the totals fall back to the
/// stored margins and the dataset is flagged `totals_derived`.
inline CitationDataset ingest(
    std::span<const EdgeRecord> edge_records,
    std::optional<std::span<const TotalsRecord>> totals_records = std::nullopt,
    const IngestOptions& options = {}) {
  if (edge_records.empty())
    throw Error(ErrorKind::invalid_input, "empty dataset");

  struct Pending {
    std::string citing, cited;
    Count count;
    std::size_t line;
  };
  std::vector<Pending> pending;
  pending.reserve(edge_records.size());
  for (const EdgeRecord& r : edge_records) {
    if (r.count <= 0)
      throw Error(ErrorKind::invalid_input,
                  detail::where(r.line) + ": count must be a positive integer");
    pending.push_back({detail::checked_id(r.citing, r.line, "citing"),
                       detail::checked_id(r.cited, r.line, "cited"), r.count,
                       r.line});
  }
  std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
    return std::tie(a.citing, a.cited, a.line) <
           std::tie(b.citing, b.cited, b.line);
  });
  for (std::size_t i = 1; i < pending.size(); ++i) {
    if (pending[i].citing == pending[i - 1].citing &&
        pending[i].cited == pending[i - 1].cited)
      throw Error(ErrorKind::invalid_input,
                  "duplicate edge (" + pending[i].citing + ", " +
                      pending[i].cited + ") at " +
                      detail::where(pending[i - 1].line) + " and " +
                      detail::where(pending[i].line));
  }

  std::vector<std::string> ids;
  ids.reserve(pending.size() * 2 + options.roster.size());
  for (const auto& p : pending) {
    ids.push_back(p.citing);
    ids.push_back(p.cited);
  }
  for (const auto& r : options.roster) ids.push_back(detail::checked_id(r, 0, "roster"));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  CitationDataset ds;
  ds.year_tag_ = options.year_tag;
  ds.journals_.reserve(ids.size());
  for (auto& id : ids) ds.journals_.push_back({id, make_label(id), 0, 0});

  const std::size_t n = ds.journals_.size();
  std::vector<std::size_t> citing_idx(pending.size()), cited_idx(pending.size());
  std::vector<Count> row_sum(n, 0), col_sum(n, 0);
  std::vector<std::size_t> row_n(n, 0), col_n(n, 0);
  for (std::size_t k = 0; k < pending.size(); ++k) {
    citing_idx[k] = *ds.find(pending[k].citing);
    cited_idx[k] = *ds.find(pending[k].cited);
    row_sum[citing_idx[k]] += pending[k].count;
    col_sum[cited_idx[k]] += pending[k].count;
    ++row_n[citing_idx[k]];
    ++col_n[cited_idx[k]];
  }

  ds.row_start_.assign(n + 1, 0);
  ds.col_start_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ds.row_start_[i + 1] = ds.row_start_[i] + row_n[i];
    ds.col_start_[i + 1] = ds.col_start_[i] + col_n[i];
  }
  ds.row_entries_.resize(pending.size());
  ds.col_entries_.resize(pending.size());
  std::vector<std::size_t> row_fill(ds.row_start_.begin(), ds.row_start_.end() - 1);
  std::vector<std::size_t> col_fill(ds.col_start_.begin(), ds.col_start_.end() - 1);
  // `pending` is sorted by (citing, cited) id, which equals index order, so
  // rows come out sorted and columns are filled in ascending citing order.
  for (std::size_t k = 0; k < pending.size(); ++k) {
    ds.row_entries_[row_fill[citing_idx[k]]++] = {cited_idx[k], pending[k].count};
    ds.col_entries_[col_fill[cited_idx[k]]++] = {citing_idx[k], pending[k].count};
  }
  ds.edge_count_ = pending.size();

  if (totals_records) {
    std::map<std::string, std::size_t, std::less<>> seen;
    for (const TotalsRecord& t : *totals_records) {
      std::string id = detail::checked_id(t.journal, t.line, "totals");
      auto idx = ds.find(id);
      if (!idx)
        throw Error(ErrorKind::invalid_input,
                    detail::where(t.line) + ": totals for unknown journal '" +
                        id + "'");
      if (auto [it, fresh] = seen.emplace(id, t.line); !fresh)
        throw Error(ErrorKind::invalid_input,
                    "duplicate totals for '" + id + "' at " +
                        detail::where(it->second) + " and " +
                        detail::where(t.line));
      if (t.total_citing < row_sum[*idx] || t.total_cited < col_sum[*idx])
        throw Error(ErrorKind::invalid_input,
                    detail::where(t.line) + ": totals for '" + id +
                        "' are below the stored edge sums");
      ds.journals_[*idx].total_citing = t.total_citing;
      ds.journals_[*idx].total_cited = t.total_cited;
    }
    // Journals without a totals record keep their stored margins.
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen.contains(ds.journals_[i].id)) {
        ds.journals_[i].total_citing = row_sum[i];
        ds.journals_[i].total_cited = col_sum[i];
      }
    }
  } else {
    ds.totals_derived_ = true;
    for (std::size_t i = 0; i < n; ++i) {
      ds.journals_[i].total_citing = row_sum[i];
      ds.journals_[i].total_cited = col_sum[i];
    }
  }
  return ds;
}

inline CitationDataset ingest(std::span<const EdgeRecord> edge_records,
                              std::span<const TotalsRecord> totals_records,
                              const IngestOptions& options = {}) {
  return ingest(edge_records,
                std::optional<std::span<const TotalsRecord>>(totals_records),
                options);
}

inline Margins margins(const CitationDataset& ds, std::string_view journal) {
  const std::size_t j = ds.index_of(journal);
  Margins m;
  for (const Entry& e : ds.row(j)) m.row_sum += e.count;
  for (const Entry& e : ds.column(j)) m.col_sum += e.count;
  m.diagonal = ds.count(j, j);
  return m;
}

/// Journals citing `journal`, by descending count; ties by label, then id.
inline std::vector<Citer> citers_of(const CitationDataset& ds,
                                    std::string_view journal) {
  const std::size_t j = ds.index_of(journal);
  std::vector<Entry> col(ds.column(j).begin(), ds.column(j).end());
  std::stable_sort(col.begin(), col.end(), [&](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    const auto& ja = ds.journal(a.index);
    const auto& jb = ds.journal(b.index);
    return std::tie(ja.label, ja.id) < std::tie(jb.label, jb.id);
  });
  std::vector<Citer> out;
  out.reserve(col.size());
  for (const Entry& e : col) out.push_back({ds.journal(e.index).id, e.count});
  return out;
}

inline DatasetStats dataset_stats(const CitationDataset& ds) {
  DatasetStats s;
  s.totals_derived = ds.totals_derived();
  s.n_unique_relations = ds.edge_count();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const JournalRecord& j = ds.journal(i);
    if (j.total_citing > 0)
      ++s.n_source_journals;
    else
      ++s.n_unprocessed_citing;
    s.total_citing += j.total_citing;
    s.total_cited += j.total_cited;
    for (const Entry& e : ds.row(i)) s.sum_relations += e.count;
    s.within_journal_total += ds.count(i, i);
  }
  if (s.n_source_journals > 0) {
    const double n = static_cast<double>(s.n_source_journals);
    s.density_percent =
        100.0 * static_cast<double>(s.n_unique_relations) / (n * n);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Delimited text input.

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string_view::npos
                                         ? std::string_view::npos
                                         : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool looks_numeric(std::string_view s) {
  double v;
  return parse_double(trim(s), v);
}

inline Count parse_count(std::string_view raw, std::size_t line,
                         std::string_view what) {
  Count v = 0;
  if (!parse_integer(trim(raw), v))
    throw Error(ErrorKind::invalid_input,
                where(line) + ": " + std::string(what) +
                    " is not an integer: '" + std::string(trim(raw)) + "'");
  return v;
}

template <typename Fn>
void for_each_row(std::istream& in, char delim, std::size_t columns,
                  std::size_t header_probe, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, delim);
    if (fields.size() != columns)
      throw Error(ErrorKind::invalid_input,
                  where(line_no) + ": expected " + std::to_string(columns) +
                      " columns, found " + std::to_string(fields.size()));
    if (first) {
      first = false;
      if (!looks_numeric(fields[header_probe])) continue;  // header row
    }
    fn(fields, line_no);
  }
}

}  // namespace detail

/// Reads `citing<delim>cited<delim>count` rows. A first row whose count
/// column is not numeric is taken as a header.
inline std::vector<EdgeRecord> read_edge_records(std::istream& in,
                                                 char delim = '\t') {
  std::vector<EdgeRecord> out;
  detail::for_each_row(in, delim, 3, 2, [&](const auto& f, std::size_t line) {
    out.push_back({std::string(f[0]), std::string(f[1]),
                   detail::parse_count(f[2], line, "count"), line});
  });
  return out;
}

/// Reads `journal<delim>total_citing<delim>total_cited` rows.
inline std::vector<TotalsRecord> read_totals_records(std::istream& in,
                                                     char delim = '\t') {
  std::vector<TotalsRecord> out;
  detail::for_each_row(in, delim, 3, 1, [&](const auto& f, std::size_t line) {
    TotalsRecord t{std::string(f[0]),
                   detail::parse_count(f[1], line, "total_citing"),
                   detail::parse_count(f[2], line, "total_cited"), line};
    if (t.total_citing < 0 || t.total_cited < 0)
      throw Error(ErrorKind::invalid_input,
                  detail::where(line) + ": totals must be non-negative");
    out.push_back(std::move(t));
  });
  return out;
}

struct DatasetFiles {
  std::filesystem::path edges;
  std::optional<std::filesystem::path> totals;
  std::optional<std::filesystem::path> roster;  // one journal id per line
  char delimiter = '\t';
  std::string year_tag;
};

inline CitationDataset load_dataset(const DatasetFiles& files) {
  auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + p.string() + "'");
    return in;
  };
  auto edge_in = open(files.edges);
  auto edges = read_edge_records(edge_in, files.delimiter);
  IngestOptions options{files.year_tag, {}};
  if (files.roster) {
    auto roster_in = open(*files.roster);
    std::string line;
    while (std::getline(roster_in, line))
      if (!trim(line).empty()) options.roster.emplace_back(trim(line));
  }
  if (files.totals) {
    auto totals_in = open(*files.totals);
    auto totals = read_totals_records(totals_in, files.delimiter);
    return ingest(edges, std::span<const TotalsRecord>(totals), options);
  }
  return ingest(edges, std::nullopt, options);
}

}  // namespace citenv
