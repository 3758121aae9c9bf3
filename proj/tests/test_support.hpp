#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "citenv/citenv.hpp"

namespace citenv::testing {

// TOY4: citing rows x cited columns over journals A, B, C, D.
inline constexpr std::int64_t kToy4[4][4] = {
    {10, 5, 0, 0},
    {4, 20, 2, 0},
    {0, 3, 30, 2},
    {0, 0, 2, 8},
};
inline const char* const kToy4Ids[4] = {"A", "B", "C", "D"};

inline std::vector<EdgeRecord> toy4_records() {
  std::vector<EdgeRecord> out;
  std::size_t line = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (kToy4[i][j] > 0) out.push_back({kToy4Ids[i], kToy4Ids[j], kToy4[i][j], ++line});
  return out;
}

inline CitationDataset toy4() { return ingest(toy4_records()); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string sciento_text() {
  return read_file(std::string(CITENV_FIXTURE_DIR) + "/scientometrics_cited_2004.net");
}

// The published Scientometrics 2004 cited map, transcribed value by value.
inline const std::vector<std::string> kScientoLabels = {
    "ApplLinguist", "InformProcessManag", "JAmSocInfSciTec", "JDoc", "JInfSci",
    "Libri", "OnlineInformRev", "ResEvaluat", "ResPolicy", "Scientometrics"};
inline const std::vector<double> kScientoXFact = {0.000000, 6.346968, 18.758815, 7.616361,
                                                 4.795487, 0.634697, 0.528914, 0.811001,
                                                 2.679831, 7.757405};
inline const std::vector<double> kScientoYFact = {1.410437, 9.273625, 29.337094, 9.767278,
                                                 6.346968, 1.163611, 1.339915, 1.339915,
                                                 19.358251, 20.662906};
inline const double kScientoMatrix[10][10] = {
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0.901230, 0.813610, 0.567065, 0.272871, 0.334979, 0, 0, 0.316497},
    {0, 0.901230, 0, 0.940527, 0.806805, 0.384551, 0.328352, 0.311033, 0, 0.566747},
    {0, 0.813610, 0.940527, 0, 0.826643, 0.395131, 0.354960, 0.338886, 0, 0.612842},
    {0, 0.567065, 0.806805, 0.826643, 0, 0.600559, 0.455367, 0.523022, 0, 0.753862},
    {0, 0.272871, 0.384551, 0.395131, 0.600559, 0, 0.295597, 0, 0, 0.242298},
    {0, 0.334979, 0.328352, 0.354960, 0.455367, 0.295597, 0, 0.244246, 0, 0.236972},
    {0, 0, 0.311033, 0.338886, 0.523022, 0, 0.244246, 0, 0.274056, 0.768357},
    {0, 0, 0, 0, 0, 0, 0, 0.274056, 0, 0},
    {0, 0.316497, 0.566747, 0.612842, 0.753862, 0.242298, 0.236972, 0.768357, 0, 0},
};

// Integer counts behind the published shares: y_fact * 2836 / 100 and
// (y_fact - x_fact) * 2836 / 100 are whole numbers for every row.
inline constexpr std::int64_t kScientoGrandsum = 2836;
inline const std::vector<std::int64_t> kScientoReceived = {40, 263, 832, 277, 180,
                                                          33, 38,  38,  549, 586};
inline const std::vector<std::int64_t> kScientoSelf = {40, 83, 300, 61, 44, 15, 23, 15, 473, 366};

inline MapDocument sciento_document() {
  MapDocument doc;
  doc.members = kScientoLabels;
  doc.labels = kScientoLabels;
  doc.shares.axis = Axis::cited;
  doc.shares.grandsum = kScientoGrandsum;
  for (std::size_t i = 0; i < 10; ++i)
    doc.shares.members.push_back({kScientoYFact[i], kScientoXFact[i], 0, 0});
  doc.cosines.members = kScientoLabels;
  doc.cosines.values = Matrix<double>(10, 10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) doc.cosines.values(i, j) = kScientoMatrix[i][j];
  doc.provenance.seed = "Scientometrics";
  return doc;
}

/// Random sparse dataset over `n` journals named J00.. with roughly
/// `density` of the cells filled.
inline CitationDataset random_dataset(std::mt19937_64& rng, int n, double density) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 40);
  std::vector<EdgeRecord> edges;
  auto name = [](int i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "J%02d", i);
    return std::string(buf);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j ? coin(rng) < 0.8 : coin(rng) < density)
        edges.push_back({name(i), name(j), count(rng), 0});
  if (edges.empty()) edges.push_back({name(0), name(0), 5, 0});
  return ingest(edges);
}

inline EnvironmentMatrix random_environment(std::mt19937_64& rng, std::size_t n, int max_count,
                                            double zero_probability) {
  std::uniform_int_distribution<int> count(0, max_count);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  EnvironmentMatrix m;
  for (std::size_t i = 0; i < n; ++i) {
    m.members.push_back("M" + std::to_string(i));
    m.labels.push_back("M" + std::to_string(i));
  }
  m.cells = Matrix<Count>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Count c = coin(rng) < zero_probability ? 0 : count(rng);
      m.cells(i, j) = c;
      m.grandsum += c;
    }
  return m;
}

inline MapDocument random_document(std::mt19937_64& rng, std::size_t n, bool with_layout) {
  std::uniform_real_distribution<double> share(0.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MapDocument doc;
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = "J" + std::to_string(i) + "x" + std::to_string(rng() % 1000);
    doc.members.push_back(label);
    doc.labels.push_back(label);
    const double incl = share(rng);
    doc.shares.members.push_back({incl, incl * unit(rng), 0, 0});
  }
  doc.cosines.members = doc.members;
  doc.cosines.values = Matrix<double>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = unit(rng) < 0.4 ? 0.0 : 0.2 + 0.8 * unit(rng);
      doc.cosines.values(i, j) = c;
      doc.cosines.values(j, i) = c;
    }
  if (with_layout) {
    LayoutResult l;
    l.rng_seed = rng() % 100000;
    for (std::size_t i = 0; i < n; ++i) l.positions.push_back({unit(rng), unit(rng)});
    doc.layout = l;
  }
  return doc;
}

}  // namespace citenv::testing
