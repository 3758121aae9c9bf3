#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "citenv/errors.hpp"
#include "citenv/journal_store.hpp"
#include "citenv/log.hpp"
#include "citenv/netio.hpp"
#include "citenv/numfmt.hpp"
#include "citenv/pipeline.hpp"

namespace citenv::service {

/// Reads EnvironmentRequest fields from query parameters of the same names.
inline EnvironmentRequest parse_request(const httplib::Request& req) {
  EnvironmentRequest out;
  auto text = [&](const char* name) -> std::optional<std::string> {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
  };
  auto number = [&](const char* name, double& into) {
    if (auto v = text(name))
      if (!parse_double(*v, into))
        throw Error(ErrorKind::invalid_input, std::string(name) + " is not a number");
  };
  auto flag = [&](const char* name, bool& into) {
    if (auto v = text(name)) {
      if (*v == "true" || *v == "1") into = true;
      else if (*v == "false" || *v == "0") into = false;
      else throw Error(ErrorKind::invalid_input, std::string(name) + " must be true or false");
    }
  };

  out.seed = text("seed").value_or("");
  if (auto d = text("direction")) out.direction = parse_direction(*d);
  if (auto a = text("axis")) out.axis = parse_axis(*a);
  number("threshold_fraction", out.threshold_fraction);
  if (req.has_param("citing_threshold_fraction")) {
    double f = 0;
    number("citing_threshold_fraction", f);
    out.citing_threshold_fraction = f;
  }
  number("cosine_cutoff", out.cosine_cutoff);
  if (auto v = text("cell_floor"))
    if (!parse_integer(*v, out.cell_floor))
      throw Error(ErrorKind::invalid_input, "cell_floor is not an integer");
  flag("include_diagonal", out.include_diagonal);
  flag("want_layout", out.want_layout);
  if (auto v = text("rng_seed"))
    if (!parse_integer(*v, out.rng_seed))
      throw Error(ErrorKind::invalid_input, "rng_seed is not an unsigned integer");
  out.validate();
  return out;
}

inline int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return 400;
    case ErrorKind::not_found: return 404;
    case ErrorKind::unprocessable: return 422;
    case ErrorKind::io: return 500;
  }
  return 500;
}

struct Options {
  std::optional<std::filesystem::path> ui_dir;  // static assets served under /
};

namespace detail {

inline void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

/// Runs `fn`, translating library errors into JSON error responses.
inline void guarded(httplib::Response& res, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_json(res, error_payload(e), status_for(e.kind()));
  } catch (const std::exception& e) {
    log::write(log::Level::error, e.what());
    send_json(res, {{"error", {{"kind", "internal"}, {"message", e.what()}}}}, 500);
  }
}

}  // namespace detail

/// Registers the read-only API on `server`. The dataset is shared by all
/// handler threads and never modified.
inline void mount(httplib::Server& server, std::shared_ptr<const CitationDataset> dataset,
                  const Options& options = {}) {
  using detail::guarded;
  using detail::send_json;

  server.Get("/api/journals", [dataset](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::size_t limit = 20;
      if (req.has_param("limit") && !parse_integer(req.get_param_value("limit"), limit))
        throw Error(ErrorKind::invalid_input, "limit is not an integer");
      const std::string q = req.has_param("q") ? req.get_param_value("q") : "";
      send_json(res, journals_payload(search_journals(*dataset, q, limit)));
    });
  });

  server.Get("/api/stats", [dataset](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, stats_payload(dataset_stats(*dataset), dataset->year_tag())); });
  });

  server.Get("/api/environment", [dataset](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, environment_payload(build_map(*dataset, parse_request(req)))); });
  });

  auto download = [dataset](std::string ext, std::string mime,
                            std::function<std::string(const MapDocument&)> render, bool layout) {
    return [=](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        EnvironmentRequest r = parse_request(req);
        if (layout) r.want_layout = true;
        const MapResult map = build_map(*dataset, r);
        res.set_header("Content-Disposition", "attachment; filename=\"" + make_label(r.seed) +
                                                  "-" + std::string(to_string(r.direction)) + ext + "\"");
        res.set_content(render(map.document), mime);
      });
    };
  };
  server.Get("/api/environment.net",
             download(".net", "text/plain", [](const MapDocument& d) { return write_pajek(d); }, false));
  server.Get("/api/environment.dl",
             download(".dl", "text/plain", [](const MapDocument& d) { return write_dl(d); }, false));
  server.Get("/api/environment.svg",
             download(".svg", "image/svg+xml", [](const MapDocument& d) { return write_svg(d); }, true));

  server.Get("/api/factors", [dataset](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      FactorOptions opt;
      if (req.has_param("components")) {
        std::size_t k = 0;
        if (!parse_integer(req.get_param_value("components"), k))
          throw Error(ErrorKind::invalid_input, "components is not an integer");
        opt.components = k;
      }
      const FactorResult fr = factor_analysis(*dataset, parse_request(req), opt);
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t r = 0; r < fr.loadings.variables.size(); ++r) {
        std::vector<double> row(fr.loadings.loadings.row(r).begin(), fr.loadings.loadings.row(r).end());
        rows.push_back({{"variable", fr.loadings.variables[r]}, {"loadings", row}});
      }
      send_json(res, {{"schema", "citenv.factors/1"},
                      {"eigenvalues", fr.loadings.eigenvalues},
                      {"variance_explained_percent", fr.loadings.variance_explained_percent},
                      {"rotation_iterations", fr.loadings.rotation_iterations},
                      {"dropped", fr.correlation.dropped},
                      {"warnings", fr.loadings.warnings},
                      {"rows", rows},
                      {"report", fr.report}});
    });
  });

  if (options.ui_dir) {
    if (!server.set_mount_point("/", options.ui_dir->string()))
      log::warning("UI directory '" + options.ui_dir->string() + "' not found; UI not served");
  }
}

}  // namespace citenv::service
