#pragma once

#include <string_view>
#include <vector>

#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/journal_store.hpp"

namespace citenv {

/// Local share of one member. On the cited axis these are the node size
/// parameters: share_incl is y_fact, share_excl (within-journal citations
/// removed) is x_fact. On the citing axis they read as citation activity.
struct MemberShare {
  double share_incl = 0.0;  // percent of N
  double share_excl = 0.0;  // percent of N after removing c_ii
  Count raw_in_env = 0;     // n_i
  Count self_count = 0;     // c_ii

  bool operator==(const MemberShare&) const = default;
};

struct ImpactShares {
  Axis axis = Axis::cited;
  Count grandsum = 0;
  std::vector<MemberShare> members;
};

inline MemberShare member_share(Count raw, Count self, Count grandsum) {
  if (grandsum <= 0)
    throw Error(ErrorKind::unprocessable, "empty environment matrix");
  const double n = static_cast<double>(grandsum);
  return {100.0 * static_cast<double>(raw) / n,
          100.0 * static_cast<double>(raw - self) / n, raw, self};
}

inline ImpactShares local_shares(const EnvironmentMatrix& m, Axis axis) {
  if (m.grandsum <= 0)
    throw Error(ErrorKind::unprocessable, "empty environment matrix");
  const std::size_t n = m.size();
  ImpactShares out{axis, m.grandsum, {}};
  out.members.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Count raw = 0;
    for (std::size_t i = 0; i < n; ++i)
      raw += axis == Axis::cited ? m.cells(i, j) : m.cells(j, i);
    out.members.push_back(member_share(raw, m.cells(j, j), m.grandsum));
  }
  return out;
}

struct SelfCitationProfile {
  Count self_count = 0;
  Count total_cited = 0;
  double percent = 0.0;
};

inline SelfCitationProfile self_citation_profile(Count self_count,
                                                 Count total_cited) {
  if (total_cited <= 0)
    throw Error(ErrorKind::unprocessable, "journal has zero total cited");
  return {self_count, total_cited,
          100.0 * static_cast<double>(self_count) /
              static_cast<double>(total_cited)};
}

/// Within-journal citations as a percentage of everything the journal
/// receives, tail included.
inline SelfCitationProfile self_citation_profile(const CitationDataset& ds,
                                                 std::string_view journal) {
  const std::size_t j = ds.index_of(journal);
  return self_citation_profile(ds.count(j, j), ds.journal(j).total_cited);
}

}  // namespace citenv
