#pragma once

// Topic extraction: every Strong heartbeat graph in a window contributes its
// keywords, ranked by degree centrality times displaced frequency. Duplicate
// words keep their best-ranked copy.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wdhg/detection.hpp"
#include "wdhg/heartbeat.hpp"

namespace wdhg {

struct TopicEntry {
  std::string word;
  double rank = 0.0;
  std::size_t sourceWdhgIndex = 0;

  bool operator==(const TopicEntry&) const = default;
};

struct RankedTopicList {
  std::size_t windowIndex = 0;
  Timestamp intervalStart = 0;
  Timestamp intervalEnd = 0;
  std::size_t strongCount = 0;
  std::vector<TopicEntry> entries;  // rank descending, then word ascending

  bool operator==(const RankedTopicList&) const = default;
};

// Positive incident edge count over (total nodes - 1).
double degree_centrality(const HeartbeatGraph& wdhg, std::size_t nodeIndex);

double keyword_rank(const HeartbeatGraph& wdhg, std::size_t nodeIndex);

// keyword_rank for every vocabulary index at once.
std::vector<double> keyword_ranks(const HeartbeatGraph& wdhg);

// The Strong-labelled graphs of `verdict`, looked up in the full series.
std::vector<const HeartbeatGraph*> strong_candidates(std::span<const HeartbeatGraph> series,
                                                     const WindowVerdict& verdict);

// Words with rank > 0 from any candidate; duplicates keep the maximum rank
// (the lower source index on an exact tie). Interval bounds are left for the
// caller to fill.
RankedTopicList merge_candidates(std::span<const HeartbeatGraph* const> candidates,
                                 const WindowVerdict& verdict);

RankedTopicList top_k(const RankedTopicList& list, std::size_t k);

}  // namespace wdhg
