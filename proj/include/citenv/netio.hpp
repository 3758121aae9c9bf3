#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/impact.hpp"
#include "citenv/layout.hpp"
#include "citenv/numfmt.hpp"
#include "citenv/similarity.hpp"

namespace citenv {

/// Where a map came from. Only the fields relevant to export appear in
/// files; the API payload carries all of them.
struct Provenance {
  std::string seed;
  Direction direction = Direction::cited;
  Axis axis = Axis::cited;
  Thresholds thresholds;
  double cosine_cutoff = 0.2;
  Count cell_floor = 2;
  bool include_diagonal = true;
  std::string year_tag;
  bool totals_derived = false;
};

/// The unit of export: members with labels, their local shares, the
/// thresholded cosine matrix and optionally a layout. All per-member
/// collections share the member order.
struct MapDocument {
  std::vector<std::string> members;
  std::vector<std::string> labels;
  ImpactShares shares;
  CosineMatrix cosines;
  std::optional<LayoutResult> layout;
  Provenance provenance;

  std::size_t size() const noexcept { return members.size(); }

  void check() const {
    const std::size_t n = members.size();
    if (labels.size() != n || shares.members.size() != n || cosines.size() != n ||
        cosines.values.rows() != n || cosines.values.cols() != n ||
        (layout && layout->positions.size() != n))
      throw Error(ErrorKind::invalid_input, "map document components disagree on member count");
  }
};

namespace detail {

inline void check_labels(const MapDocument& doc) {
  for (const auto& l : doc.labels) {
    if (l.empty()) throw Error(ErrorKind::invalid_input, "empty label");
    if (l.find('"') != std::string::npos)
      throw Error(ErrorKind::invalid_input, "label contains a double quote: " + l);
    if (l.find('\n') != std::string::npos || l.find('\r') != std::string::npos)
      throw Error(ErrorKind::invalid_input, "label contains a line break");
  }
}

inline std::string matrix_rows(const Matrix<double>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += fixed6(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace detail

/// Pajek network text:
///
///   *Vertices n
///   i "label" 0.0 0.0 0.0 x_fact <share_excl> y_fact <share_incl>
///   *Matrix
///   n rows of n cosines
///
/// Every number has six decimals. With a layout attached the coordinate
/// slots carry x, y and 0, and a `%` comment line records the seed; derived
/// totals are likewise noted in a comment.
inline std::string write_pajek(const MapDocument& doc) {
  doc.check();
  detail::check_labels(doc);
  const std::size_t n = doc.size();
  std::string out;
  if (doc.layout)
    out += "% layout kamada-kawai rng_seed=" + std::to_string(doc.layout->rng_seed) + '\n';
  if (doc.provenance.totals_derived) out += "% totals derived from stored margins\n";
  out += "*Vertices " + std::to_string(n) + '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1) + " \"" + doc.labels[i] + "\" ";
    if (doc.layout) {
      const Point& p = doc.layout->positions[i];
      out += fixed6(p.x) + ' ' + fixed6(p.y) + " 0.000000";
    } else {
      out += "0.0 0.0 0.0";
    }
    out += " x_fact " + fixed6(doc.shares.members[i].share_excl) + " y_fact " +
           fixed6(doc.shares.members[i].share_incl) + '\n';
  }
  out += "*Matrix\n";
  out += detail::matrix_rows(doc.cosines.values);
  return out;
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next non-blank line, or nullopt at the end.
  std::optional<std::string_view> next() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!trim(line).empty()) return line;
    }
    return std::nullopt;
  }

  std::size_t line() const noexcept { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool iequals_prefix(std::string_view line, std::string_view keyword) {
  line = trim(line);
  if (line.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(line[i])) !=
        std::tolower(static_cast<unsigned char>(keyword[i])))
      return false;
  return true;
}

inline Matrix<double> read_square(LineReader& in, std::size_t n, std::string_view block) {
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto line = in.next();
    if (!line)
      throw Error(ErrorKind::invalid_input,
                  "line " + std::to_string(in.line()) + ": " + std::string(block) +
                      " block truncated after " + std::to_string(i) + " of " +
                      std::to_string(n) + " rows");
    auto tok = tokens(*line);
    if (tok.size() != n)
      in.fail("expected " + std::to_string(n) + " values, found " + std::to_string(tok.size()));
    for (std::size_t j = 0; j < n; ++j)
      if (!parse_double(tok[j], m(i, j))) in.fail("bad number '" + std::string(tok[j]) + "'");
  }
  return m;
}

}  // namespace detail

/// Reads the dialect emitted by write_pajek (whitespace-tolerant). Members
/// are the labels; shares, matrix and any coordinates are recovered.
inline MapDocument parse_pajek(std::string_view text) {
  detail::LineReader in(text);
  MapDocument doc;
  std::optional<std::uint64_t> layout_seed;

  auto line = in.next();
  for (; line && trim(*line).starts_with('%'); line = in.next()) {
    const auto body = trim(trim(*line).substr(1));
    if (body.starts_with("layout kamada-kawai rng_seed=")) {
      std::uint64_t seed = 0;
      if (!parse_integer(body.substr(body.find('=') + 1), seed)) in.fail("bad layout comment");
      layout_seed = seed;
    } else if (body == "totals derived from stored margins") {
      doc.provenance.totals_derived = true;
    }
  }
  if (!line || !detail::iequals_prefix(*line, "*vertices")) in.fail("expected *Vertices");
  auto head = detail::tokens(*line);
  std::size_t n = 0;
  if (head.size() != 2 || !parse_integer(head[1], n)) in.fail("malformed vertex count");

  doc.shares.members.resize(n);
  std::vector<Point> coords(n);
  bool any_coordinates = false;
  for (std::size_t i = 0; i < n; ++i) {
    line = in.next();
    if (!line) in.fail("vertex list truncated");
    if (detail::iequals_prefix(*line, "*")) in.fail("expected vertex " + std::to_string(i + 1));
    std::string_view rest = trim(*line);
    const std::size_t sp = rest.find_first_of(" \t");
    std::size_t index = 0;
    if (sp == std::string_view::npos || !parse_integer(rest.substr(0, sp), index))
      in.fail("malformed vertex line");
    if (index != i + 1)
      in.fail("vertex index gap: expected " + std::to_string(i + 1) + ", found " +
              std::to_string(index));
    rest = trim(rest.substr(sp));
    if (rest.empty() || rest.front() != '"') in.fail("vertex label must be quoted");
    const std::size_t close = rest.find('"', 1);
    if (close == std::string_view::npos) in.fail("unterminated vertex label");
    std::string label(rest.substr(1, close - 1));
    if (label.empty()) in.fail("empty vertex label");
    auto tok = detail::tokens(rest.substr(close + 1));

    std::size_t t = 0;
    double xyz[3] = {0, 0, 0};
    for (int c = 0; c < 3 && t < tok.size() && tok[t] != "x_fact" && tok[t] != "y_fact"; ++c, ++t) {
      if (!parse_double(tok[t], xyz[c])) in.fail("bad coordinate '" + std::string(tok[t]) + "'");
      if (tok[t] != "0.0") any_coordinates = true;
    }
    coords[i] = {xyz[0], xyz[1]};
    bool have_x = false, have_y = false;
    for (; t < tok.size(); t += 2) {
      if (t + 1 >= tok.size()) in.fail("parameter '" + std::string(tok[t]) + "' has no value");
      double v = 0;
      if (!parse_double(tok[t + 1], v)) in.fail("bad value for " + std::string(tok[t]));
      if (tok[t] == "x_fact") {
        doc.shares.members[i].share_excl = v;
        have_x = true;
      } else if (tok[t] == "y_fact") {
        doc.shares.members[i].share_incl = v;
        have_y = true;
      }
    }
    if (!have_x || !have_y) in.fail("vertex lacks x_fact/y_fact");
    doc.members.push_back(label);
    doc.labels.push_back(std::move(label));
  }

  line = in.next();
  if (!line || !detail::iequals_prefix(*line, "*matrix")) in.fail("expected *Matrix");
  doc.cosines.members = doc.members;
  doc.cosines.values = detail::read_square(in, n, "*Matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (doc.cosines.values(i, j) != doc.cosines.values(j, i))
        throw Error(ErrorKind::invalid_input,
                    "line " + std::to_string(in.line() - n + 1 + i) +
                        ": matrix not symmetric at (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + ")");
  if (auto extra = in.next()) in.fail("unexpected content after matrix");

  double cutoff = 1.0;
  bool any = false;
  for (double v : doc.cosines.values.data())
    if (v > 0.0) {
      cutoff = std::min(cutoff, v);
      any = true;
    }
  doc.cosines.cutoff = any ? cutoff : 0.0;

  if (any_coordinates || layout_seed) {
    LayoutResult layout;
    layout.positions = std::move(coords);
    layout.rng_seed = layout_seed.value_or(0);
    doc.layout = std::move(layout);
  }
  return doc;
}

/// UCINET DL full matrix: labels and cosines only; node sizes have no place
/// in this format.
inline std::string write_dl(const MapDocument& doc) {
  doc.check();
  detail::check_labels(doc);
  std::string out = "dl n=" + std::to_string(doc.size()) + " format=fullmatrix\n";
  out += "labels:\n";
  for (const auto& l : doc.labels) out += l + '\n';
  out += "data:\n";
  out += detail::matrix_rows(doc.cosines.values);
  return out;
}

struct DlMatrix {
  std::vector<std::string> labels;
  Matrix<double> values;
};

inline DlMatrix parse_dl(std::string_view text) {
  detail::LineReader in(text);
  auto line = in.next();
  if (!line || !detail::iequals_prefix(*line, "dl")) in.fail("expected dl header");
  std::size_t n = 0;
  bool have_n = false, full = false;
  for (auto tok : detail::tokens(*line)) {
    if (tok.starts_with("n=") || tok.starts_with("N=")) {
      if (!parse_integer(tok.substr(2), n)) in.fail("malformed n");
      have_n = true;
    } else if (tok == "format=fullmatrix") {
      full = true;
    }
  }
  if (!have_n) in.fail("missing n=");
  if (!full) in.fail("only format=fullmatrix is supported");

  line = in.next();
  if (!line || trim(*line) != "labels:") in.fail("expected labels:");
  DlMatrix out;
  for (std::size_t i = 0; i < n; ++i) {
    line = in.next();
    if (!line) in.fail("label block truncated");
    out.labels.emplace_back(trim(*line));
  }
  line = in.next();
  if (!line || trim(*line) != "data:") in.fail("expected data:");
  out.values = detail::read_square(in, n, "data:");
  if (in.next()) in.fail("unexpected content after data");
  return out;
}

struct SvgOptions {
  double width = 800.0;
  double height = 800.0;
  double margin = 60.0;
  double max_stroke = 4.0;
};

/// Node-link drawing. Each member is an ellipse whose vertical radius
/// follows share_incl and horizontal radius share_excl (radius =
/// share/100 * height/2, at least one unit); a member with no share left
/// after removing within-journal citations is drawn as a vertical line.
inline std::string write_svg(const MapDocument& doc, const SvgOptions& opt = {}) {
  doc.check();
  if (!doc.layout) throw Error(ErrorKind::invalid_input, "map has no layout");
  const std::size_t n = doc.size();
  auto px = [&](const Point& p) {
    return Point{opt.margin + p.x * (opt.width - 2 * opt.margin),
                 opt.margin + p.y * (opt.height - 2 * opt.margin)};
  };
  auto radius = [&](double share) { return std::max(share / 100.0 * opt.height / 2.0, 1.0); };
  auto escape = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fixed6(opt.width) + "\" height=\"" + fixed6(opt.height) + "\">\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = doc.cosines.values(i, j);
      if (c <= 0.0) continue;
      const Point a = px(doc.layout->positions[i]), b = px(doc.layout->positions[j]);
      out += "<line class=\"edge\" x1=\"" + fixed6(a.x) + "\" y1=\"" + fixed6(a.y) +
             "\" x2=\"" + fixed6(b.x) + "\" y2=\"" + fixed6(b.y) + "\" stroke=\"#888888\"" +
             " stroke-width=\"" + fixed6(c * opt.max_stroke) + "\"/>\n";
    }
  for (std::size_t i = 0; i < n; ++i) {
    const Point c = px(doc.layout->positions[i]);
    const MemberShare& s = doc.shares.members[i];
    const double ry = radius(s.share_incl);
    if (s.share_excl <= 0.0) {
      out += "<line class=\"node\" x1=\"" + fixed6(c.x) + "\" y1=\"" + fixed6(c.y - ry) +
             "\" x2=\"" + fixed6(c.x) + "\" y2=\"" + fixed6(c.y + ry) +
             "\" stroke=\"#1f4e79\" stroke-width=\"1.000000\"/>\n";
    } else {
      out += "<ellipse class=\"node\" cx=\"" + fixed6(c.x) + "\" cy=\"" + fixed6(c.y) +
             "\" rx=\"" + fixed6(radius(s.share_excl)) + "\" ry=\"" + fixed6(ry) +
             "\" fill=\"#9ecae1\" stroke=\"#1f4e79\"/>\n";
    }
    out += "<text x=\"" + fixed6(c.x) + "\" y=\"" + fixed6(c.y + ry + 12.0) +
           "\" font-size=\"11.000000\" text-anchor=\"middle\">" + escape(doc.labels[i]) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace citenv
