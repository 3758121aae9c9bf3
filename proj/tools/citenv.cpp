// citenv: citation environments of journals from aggregated journal-journal
// citation counts.
//
//   citenv stats   --edges data.tsv [--totals totals.tsv]
//   citenv env     --edges data.tsv --seed Scientometrics --direction cited --format pajek
//   citenv batch   --edges data.tsv --out-root jcr04/
//   citenv factors --edges data.tsv --seed Scientometrics --direction citing
//   citenv serve   --edges data.tsv --port 8080
//
// Exit codes: 0 ok, 1 user error, 2 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "citenv/citenv.hpp"
#include "citenv/service.hpp"

namespace {

struct DataArgs {
  std::string edges;
  std::string totals;
  std::string roster;
  std::string delimiter = "\\t";
  std::string year_tag;
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--edges,--data", a.edges,
                  "Edge file: citing, cited, count (default: $CITENV_DATA)");
  cmd->add_option("--totals", a.totals, "Totals file: journal, total_citing, total_cited");
  cmd->add_option("--journals", a.roster, "Extra journal ids to retain, one per line");
  cmd->add_option("--delimiter", a.delimiter, "Field delimiter (default tab)");
  cmd->add_option("--year-tag", a.year_tag, "Free-text dataset tag, e.g. SSCI-2004");
}

citenv::CitationDataset load(const DataArgs& a) {
  citenv::DatasetFiles files;
  std::string edges = a.edges;
  if (edges.empty())
    if (const char* env = std::getenv("CITENV_DATA")) edges = env;
  if (edges.empty())
    throw citenv::Error(citenv::ErrorKind::invalid_input,
                        "no dataset: pass --edges or set CITENV_DATA");
  files.edges = edges;
  if (!a.totals.empty()) files.totals = a.totals;
  if (!a.roster.empty()) files.roster = a.roster;
  if (a.delimiter == "\\t" || a.delimiter == "tab") {
    files.delimiter = '\t';
  } else if (a.delimiter.size() == 1) {
    files.delimiter = a.delimiter[0];
  } else {
    throw citenv::Error(citenv::ErrorKind::invalid_input, "delimiter must be one character");
  }
  files.year_tag = a.year_tag;
  return citenv::load_dataset(files);
}

void add_request_options(CLI::App* cmd, citenv::EnvironmentRequest& r, std::string& direction,
                         std::string& axis, std::optional<double>& citing_fraction) {
  cmd->add_option("--seed", r.seed, "Seed journal id")->required();
  cmd->add_option("--direction", direction, "cited, citing or combined")
      ->check(CLI::IsMember({"cited", "citing", "combined"}));
  cmd->add_option("--axis", axis, "Map axis for combined environments: cited or citing")
      ->check(CLI::IsMember({"cited", "citing"}));
  cmd->add_option("--threshold_fraction,--threshold-fraction", r.threshold_fraction,
                  "Environment threshold as a fraction of the seed's total");
  cmd->add_option("--citing_threshold_fraction,--citing-threshold-fraction", citing_fraction,
                  "Separate citing threshold for combined environments");
  cmd->add_option("--cosine_cutoff,--cosine-cutoff", r.cosine_cutoff, "Cosines below are dropped");
  cmd->add_option("--cell_floor,--cell-floor", r.cell_floor, "Smallest raw count kept");
  cmd->add_option("--include_diagonal,--include-diagonal", r.include_diagonal,
                  "Within-journal counts enter the cosine profiles (true/false)");
  cmd->add_flag("--want_layout,--want-layout,--layout", r.want_layout, "Compute a layout");
  cmd->add_option("--rng_seed,--rng-seed", r.rng_seed, "Layout seed");
}

void finish_request(citenv::EnvironmentRequest& r, const std::string& direction,
                    const std::string& axis, const std::optional<double>& citing_fraction) {
  r.direction = citenv::parse_direction(direction);
  if (!axis.empty()) r.axis = citenv::parse_axis(axis);
  r.citing_threshold_fraction = citing_fraction;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw citenv::Error(citenv::ErrorKind::io, "cannot write '" + out + "'");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation environments of scientific journals"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to standard error");

  DataArgs data;
  citenv::EnvironmentRequest request;
  std::string direction = "cited", axis, out = "-", format = "pajek";
  std::optional<double> citing_fraction;

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate input files; optionally write a normalised edge file");
  add_data_options(ingest_cmd, data);
  ingest_cmd->add_option("--out", out, "Normalised edge file ('-' for stdout)");

  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of the dataset");
  add_data_options(stats_cmd, data);
  stats_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  stats_cmd->add_option("--out", out, "Output file ('-' for stdout)");

  auto* env_cmd = app.add_subcommand("env", "Map the environment of one seed journal");
  add_data_options(env_cmd, data);
  add_request_options(env_cmd, request, direction, axis, citing_fraction);
  env_cmd->add_option("--format", format, "pajek, dl, svg or json")
      ->check(CLI::IsMember({"pajek", "dl", "svg", "json"}));
  env_cmd->add_option("--out", out, "Output file ('-' for stdout)");

  std::string out_root;
  unsigned workers = 0;
  auto* batch_cmd = app.add_subcommand("batch", "Write cited/ and citing/ Pajek files for every journal");
  add_data_options(batch_cmd, data);
  batch_cmd->add_option("--out-root,--out_root", out_root, "Output directory")->required();
  batch_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
  batch_cmd->add_option("--threshold_fraction,--threshold-fraction", request.threshold_fraction);
  batch_cmd->add_option("--cosine_cutoff,--cosine-cutoff", request.cosine_cutoff);
  batch_cmd->add_option("--cell_floor,--cell-floor", request.cell_floor);
  batch_cmd->add_option("--include_diagonal,--include-diagonal", request.include_diagonal);

  std::optional<std::size_t> components;
  double suppression = 0.1;
  auto* factors_cmd = app.add_subcommand("factors", "PCA with varimax rotation of an environment");
  add_data_options(factors_cmd, data);
  add_request_options(factors_cmd, request, direction, axis, citing_fraction);
  factors_cmd->add_option("--components", components, "Number of components (default: Kaiser rule)");
  factors_cmd->add_option("--suppress", suppression, "Blank loadings below this magnitude");
  factors_cmd->add_option("--out", out, "Output file ('-' for stdout)");

  std::string host = "127.0.0.1", ui_dir;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  add_data_options(serve_cmd, data);
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--ui-dir,--ui_dir", ui_dir, "Static UI assets served under /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  citenv::log::set_level(verbose ? citenv::log::Level::info : citenv::log::Level::warning);

  try {
    const citenv::CitationDataset ds = load(data);
    citenv::log::info("loaded " + std::to_string(ds.size()) + " journals, " +
                      std::to_string(ds.edge_count()) + " relations");

    if (*ingest_cmd) {
      const auto s = citenv::dataset_stats(ds);
      std::cerr << "ok: " << ds.size() << " journals, " << s.n_unique_relations << " relations"
                << (ds.totals_derived() ? " (totals derived from edges)" : "") << '\n';
      if (ingest_cmd->count("--out")) {
        std::string text = "citing\tcited\tcount\n";
        for (const auto& e : ds.edges())
          text += e.citing + '\t' + e.cited + '\t' + std::to_string(e.count) + '\n';
        emit(out, text);
      }
    } else if (*stats_cmd) {
      const auto s = citenv::dataset_stats(ds);
      emit(out, format == "json" ? citenv::stats_payload(s, ds.year_tag()).dump(2) + "\n"
                                 : citenv::render_stats(s));
    } else if (*env_cmd) {
      finish_request(request, direction, axis, citing_fraction);
      if (format == "svg") request.want_layout = true;
      const auto map = citenv::build_map(ds, request);
      for (const auto& w : map.warnings) citenv::log::warning(w.message);
      if (format == "pajek") emit(out, citenv::write_pajek(map.document));
      else if (format == "dl") emit(out, citenv::write_dl(map.document));
      else if (format == "svg") emit(out, citenv::write_svg(map.document));
      else emit(out, citenv::environment_payload(map).dump(2) + "\n");
    } else if (*batch_cmd) {
      citenv::BatchOptions opt;
      opt.defaults = request;
      opt.workers = workers;
      const auto summary = citenv::batch_export(ds, out_root, opt);
      std::cerr << "wrote " << summary.files_written << " file(s) and index.txt under " << out_root
                << '\n';
    } else if (*factors_cmd) {
      finish_request(request, direction, axis, citing_fraction);
      citenv::FactorOptions opt;
      opt.components = components;
      opt.display_suppression = suppression;
      emit(out, citenv::factor_report(ds, request, opt));
    } else if (*serve_cmd) {
      auto shared = std::make_shared<const citenv::CitationDataset>(ds);
      httplib::Server server;
      citenv::service::Options opt;
      if (!ui_dir.empty()) opt.ui_dir = ui_dir;
      citenv::service::mount(server, shared, opt);
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      if (!server.listen(host, port))
        throw citenv::Error(citenv::ErrorKind::io, "cannot listen on " + host + ":" + std::to_string(port));
    }
  } catch (const citenv::Error& e) {
    std::cerr << "citenv: " << citenv::to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "citenv: internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
