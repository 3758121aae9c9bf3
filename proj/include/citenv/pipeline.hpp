#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/factors.hpp"
#include "citenv/impact.hpp"
#include "citenv/journal_store.hpp"
#include "citenv/layout.hpp"
#include "citenv/netio.hpp"
#include "citenv/similarity.hpp"

namespace citenv {

/// Parameters of one map. Defaults reproduce the published maps: 1%
/// environment threshold, cosine >= 0.2, cells of at least 2, diagonal kept.
struct EnvironmentRequest {
  std::string seed;
  Direction direction = Direction::cited;
  std::optional<Axis> axis;  // defaults from direction
  double threshold_fraction = 0.01;
  std::optional<double> citing_threshold_fraction;  // combined only
  double cosine_cutoff = 0.2;
  Count cell_floor = 2;
  bool include_diagonal = true;
  bool want_layout = false;
  std::uint64_t rng_seed = 1;

  Axis map_axis() const { return axis.value_or(default_axis(direction)); }

  Thresholds thresholds() const {
    return {threshold_fraction, citing_threshold_fraction.value_or(threshold_fraction)};
  }

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::invalid_input, m); };
    if (seed.empty()) bad("seed is required");
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
      bad("threshold_fraction must lie in (0, 1)");
    if (citing_threshold_fraction &&
        !(*citing_threshold_fraction > 0.0 && *citing_threshold_fraction < 1.0))
      bad("citing_threshold_fraction must lie in (0, 1)");
    if (!(cosine_cutoff >= 0.0 && cosine_cutoff <= 1.0)) bad("cosine_cutoff must lie in [0, 1]");
    if (cell_floor < 1) bad("cell_floor must be at least 1");
    if (axis && direction != Direction::combined && *axis != default_axis(direction))
      bad("axis may only differ from direction for combined environments");
  }
};

struct Warning {
  std::string code;
  std::string message;
  std::optional<double> suggested_threshold;
};

struct MapResult {
  MapDocument document;
  EnvironmentMatrix matrix;
  std::vector<Warning> warnings;
};

/// extract -> build_matrix -> cosine_map -> local_shares -> (kk_layout).
inline MapResult build_map(const CitationDataset& ds, const EnvironmentRequest& req) {
  req.validate();
  const Environment env = extract(ds, req.seed, req.direction, req.thresholds());
  EnvironmentMatrix matrix = build_matrix(ds, env, req.cell_floor);
  if (matrix.grandsum <= 0)
    throw Error(ErrorKind::unprocessable,
                "environment of '" + req.seed + "' has no cell at or above the cell floor of " +
                    std::to_string(req.cell_floor));
  const Axis axis = req.map_axis();

  MapResult out;
  MapDocument& doc = out.document;
  doc.members = env.members;
  doc.labels = env.labels;
  doc.shares = local_shares(matrix, axis);
  doc.cosines = cosine_map(matrix, axis, {req.include_diagonal, req.cosine_cutoff});
  doc.provenance = {env.seed,          req.direction,      axis,
                    env.thresholds,    req.cosine_cutoff,  req.cell_floor,
                    req.include_diagonal, ds.year_tag(),   ds.totals_derived()};
  if (req.want_layout) doc.layout = kk_layout(target_distances(doc.cosines), req.rng_seed);

  if (env.size() == 1) {
    const double current = req.direction == Direction::citing ? req.thresholds().citing
                                                              : req.thresholds().cited;
    const double suggestion = current > 0.001 ? 0.001 : current / 10.0;
    out.warnings.push_back(
        {"degenerate_map",
         "only the seed passes the threshold; lower threshold_fraction (e.g. to " +
             fixed(suggestion, 4) + ") to see its environment",
         suggestion});
  } else if (doc.cosines.edge_count() == 0) {
    out.warnings.push_back({"no_edges", "no pair of members reaches the cosine cutoff", std::nullopt});
  }
  if (ds.totals_derived())
    out.warnings.push_back({"totals_derived",
                            "journal totals were derived from stored edges; thresholds ignore "
                            "the citation tail",
                            std::nullopt});
  out.matrix = std::move(matrix);
  return out;
}

// ---------------------------------------------------------------------------
// Structured payloads (JSON).

inline nlohmann::json to_json(const Provenance& p) {
  return {{"seed", p.seed},
          {"direction", to_string(p.direction)},
          {"axis", to_string(p.axis)},
          {"threshold_fraction", p.thresholds.cited},
          {"citing_threshold_fraction", p.thresholds.citing},
          {"cosine_cutoff", p.cosine_cutoff},
          {"cell_floor", p.cell_floor},
          {"include_diagonal", p.include_diagonal},
          {"year_tag", p.year_tag},
          {"totals_derived", p.totals_derived}};
}

/// Environment payload; schema "citenv.environment/1" (see README).
inline nlohmann::json environment_payload(const MapResult& r) {
  const MapDocument& doc = r.document;
  nlohmann::json members = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const MemberShare& s = doc.shares.members[i];
    nlohmann::json m = {{"index", i + 1},
                        {"id", doc.members[i]},
                        {"label", doc.labels[i]},
                        {"share_incl", s.share_incl},
                        {"share_excl", s.share_excl},
                        {"raw_in_env", s.raw_in_env},
                        {"self_count", s.self_count}};
    if (doc.layout) {
      m["x"] = doc.layout->positions[i].x;
      m["y"] = doc.layout->positions[i].y;
    }
    members.push_back(std::move(m));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.size(); ++i)
    for (std::size_t j = i + 1; j < doc.size(); ++j)
      if (doc.cosines.values(i, j) > 0.0)
        edges.push_back({{"source", i + 1}, {"target", j + 1}, {"cosine", doc.cosines.values(i, j)}});
  nlohmann::json warnings = nlohmann::json::array();
  for (const Warning& w : r.warnings) {
    nlohmann::json jw = {{"code", w.code}, {"message", w.message}};
    if (w.suggested_threshold) jw["suggested_threshold"] = *w.suggested_threshold;
    warnings.push_back(std::move(jw));
  }
  nlohmann::json payload = {{"schema", "citenv.environment/1"},
                            {"provenance", to_json(doc.provenance)},
                            {"grandsum", doc.shares.grandsum},
                            {"members", std::move(members)},
                            {"edges", std::move(edges)},
                            {"warnings", std::move(warnings)}};
  if (doc.layout) {
    payload["layout"] = {{"algorithm", "kamada-kawai"},
                         {"rng_seed", doc.layout->rng_seed},
                         {"energy", doc.layout->energy}};
  }
  return payload;
}

inline nlohmann::json error_payload(const Error& e) {
  return {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
}

inline nlohmann::json stats_payload(const DatasetStats& s, const std::string& year_tag) {
  return {{"schema", "citenv.stats/1"},
          {"year_tag", year_tag},
          {"n_source_journals", s.n_source_journals},
          {"n_unprocessed_citing", s.n_unprocessed_citing},
          {"n_unique_relations", s.n_unique_relations},
          {"density_percent", s.density_percent},
          {"sum_relations", s.sum_relations},
          {"average_cell_value", s.average_cell_value()},
          {"total_citing", s.total_citing},
          {"total_cited", s.total_cited},
          {"within_journal_total", s.within_journal_total},
          {"totals_derived", s.totals_derived}};
}

inline std::string render_stats(const DatasetStats& s) {
  std::string out;
  auto row = [&](const std::string& name, const std::string& value) {
    out += name + std::string(name.size() < 40 ? 40 - name.size() : 1, ' ') + value + '\n';
  };
  row("number of source journals processed", std::to_string(s.n_source_journals));
  row("source journals not processed 'citing'", std::to_string(s.n_unprocessed_citing));
  row("unique journal-journal relations",
      std::to_string(s.n_unique_relations) + " " + fixed(s.density_percent, 2) + "%");
  row("sum of journal-journal relations", std::to_string(s.sum_relations));
  row("average cell value", fixed(s.average_cell_value(), 2));
  row("total 'citing'", std::to_string(s.total_citing));
  row("total 'cited'", std::to_string(s.total_cited));
  row("within-journal citations", std::to_string(s.within_journal_total));
  if (s.totals_derived) out += "(totals derived from stored edges)\n";
  return out;
}

/// Journals whose label or id starts with `prefix` (case-insensitive),
/// ordered by label.
inline std::vector<const JournalRecord*> search_journals(const CitationDataset& ds,
                                                         std::string_view prefix,
                                                         std::size_t limit = 20) {
  const std::string want = detail::fold_case(prefix);
  const std::string want_label = detail::fold_case(make_label(prefix));
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& j = ds.journal(i);
    if (detail::fold_case(j.label).starts_with(want_label) ||
        detail::fold_case(j.id).starts_with(want))
      hits.push_back(i);
  }
  detail::sort_by_label(ds, hits);
  if (hits.size() > limit) hits.resize(limit);
  std::vector<const JournalRecord*> out;
  for (std::size_t i : hits) out.push_back(&ds.journal(i));
  return out;
}

inline nlohmann::json journals_payload(const std::vector<const JournalRecord*>& hits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const JournalRecord* j : hits)
    arr.push_back({{"id", j->id},
                   {"label", j->label},
                   {"total_citing", j->total_citing},
                   {"total_cited", j->total_cited}});
  return {{"schema", "citenv.journals/1"}, {"journals", std::move(arr)}};
}

// ---------------------------------------------------------------------------
// Factor report.

struct FactorOptions {
  std::optional<std::size_t> components;  // Kaiser rule when absent
  double display_suppression = 0.1;
  bool kaiser_normalize = true;
};

struct FactorResult {
  CorrelationResult correlation;
  LoadingsMatrix loadings;  // rotated
  std::string report;
};

inline FactorResult factor_analysis(const CitationDataset& ds, const EnvironmentRequest& req,
                                    const FactorOptions& opt = {}) {
  req.validate();
  const Environment env = extract(ds, req.seed, req.direction, req.thresholds());
  if (env.size() < 3)
    throw Error(ErrorKind::unprocessable,
                "insufficient variables: the environment has " + std::to_string(env.size()) +
                    " member(s), at least 3 are needed");
  const EnvironmentMatrix m = build_matrix(ds, env, req.cell_floor);
  FactorResult out;
  out.correlation = correlation_matrix(m, req.map_axis());
  if (out.correlation.variables.size() < 2)
    throw Error(ErrorKind::unprocessable,
                "insufficient variables after dropping constant profiles");
  LoadingsMatrix unrotated = pca(out.correlation, opt.components);
  out.loadings = rotate(unrotated, opt.kaiser_normalize);
  out.loadings.display_suppression = opt.display_suppression;
  for (const auto& d : out.correlation.dropped)
    out.loadings.warnings.push_back("'" + d + "' has a constant profile and was left out");

  out.report = "Factor analysis of " + std::string(to_string(req.map_axis())) +
               " patterns in the " + std::string(to_string(req.direction)) +
               " environment of " + env.seed + "\n\n" + render_component_table(out.loadings);
  return out;
}

inline std::string factor_report(const CitationDataset& ds, const EnvironmentRequest& req,
                                 const FactorOptions& opt = {}) {
  return factor_analysis(ds, req, opt).report;
}

// ---------------------------------------------------------------------------
// Batch export.

struct BatchOptions {
  EnvironmentRequest defaults;  // seed and direction are overwritten per file
  unsigned workers = 0;         // 0: hardware concurrency
};

struct BatchEntry {
  std::size_t index = 0;  // 1-based alphabetical rank
  std::string id;
  std::string label;
  std::string cited_file;   // relative path, empty if skipped
  std::string citing_file;
  std::vector<std::string> notes;
};

struct BatchSummary {
  std::vector<BatchEntry> entries;
  std::size_t files_written = 0;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes cited/v<i>.txt and citing/v<i>.txt Pajek files for every journal
/// with a non-zero total in that direction, plus index.txt. Indices are the
/// journals' alphabetical rank by label, so reruns give identical trees.
inline BatchSummary batch_export(const CitationDataset& ds, const std::filesystem::path& root,
                                 const BatchOptions& opt = {}) {
  std::error_code ec;
  std::filesystem::create_directories(root / "cited", ec);
  if (!ec) std::filesystem::create_directories(root / "citing", ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output tree under '" + root.string() + "'");

  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  detail::sort_by_label(ds, order);

  BatchSummary summary;
  summary.entries.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& j = ds.journal(order[r]);
    summary.entries[r] = {r + 1, j.id, j.label, {}, {}, {}};
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> written{0};
  std::mutex failure_mu;
  std::vector<std::string> failures;

  auto work = [&] {
    for (std::size_t r = next++; r < order.size(); r = next++) {
      BatchEntry& e = summary.entries[r];
      const JournalRecord& j = ds.journal(order[r]);
      for (Direction d : {Direction::cited, Direction::citing}) {
        const bool cited = d == Direction::cited;
        const std::string dir(to_string(d));
        if ((cited ? j.total_cited : j.total_citing) == 0) {
          e.notes.push_back(dir + " skipped: zero total");
          continue;
        }
        try {
          EnvironmentRequest req = opt.defaults;
          req.seed = j.id;
          req.direction = d;
          req.axis.reset();
          req.citing_threshold_fraction.reset();
          const MapResult map = build_map(ds, req);
          const std::string rel = dir + "/v" + std::to_string(e.index) + ".txt";
          detail::write_file(root / rel, write_pajek(map.document));
          (cited ? e.cited_file : e.citing_file) = rel;
          ++written;
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::io) {
            std::lock_guard lock(failure_mu);
            failures.push_back(err.what());
          } else {
            e.notes.push_back(dir + " skipped: " + err.what());
          }
        } catch (const std::exception& err) {
          // An escaping exception would terminate the worker thread.
          std::lock_guard lock(failure_mu);
          failures.push_back(j.id + " " + dir + ": " + err.what());
        }
      }
    }
  };

  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, order.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  summary.files_written = written;

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string msg = "batch export incomplete: " + std::to_string(summary.files_written) +
                      " file(s) written, " + std::to_string(failures.size()) + " failed";
    for (const auto& f : failures) msg += "\n  " + f;
    throw Error(ErrorKind::io, msg);
  }

  std::string index = "index\tlabel\tcited\tciting\tnotes\n";
  for (const BatchEntry& e : summary.entries) {
    std::string notes;
    for (const auto& n : e.notes) notes += (notes.empty() ? "" : "; ") + n;
    index += std::to_string(e.index) + '\t' + e.label + '\t' +
             (e.cited_file.empty() ? "-" : e.cited_file) + '\t' +
             (e.citing_file.empty() ? "-" : e.citing_file) + '\t' + notes + '\n';
  }
  detail::write_file(root / "index.txt", index);
  return summary;
}

}  // namespace citenv
