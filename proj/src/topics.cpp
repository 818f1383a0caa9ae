#include "wdhg/topics.hpp"

#include <algorithm>
#include <map>

#include "wdhg/errors.hpp"

namespace wdhg {

namespace {

std::vector<std::size_t> positive_degrees(const HeartbeatGraph& wdhg) {
  std::vector<std::size_t> degree(wdhg.total_nodes(), 0);
  for (const auto& e : wdhg.positive_edges()) {
    ++degree[e.a];
    ++degree[e.b];
  }
  return degree;
}

double normalized(std::size_t degree, std::size_t totalNodes) {
  if (totalNodes < 2) return 0.0;
  return static_cast<double>(degree) / static_cast<double>(totalNodes - 1);
}

}  // namespace

double degree_centrality(const HeartbeatGraph& wdhg, std::size_t nodeIndex) {
  if (nodeIndex >= wdhg.total_nodes()) throw UsageError("node index out of range");
  std::size_t degree = 0;
  for (const auto& e : wdhg.positive_edges()) {
    if (e.a == nodeIndex || e.b == nodeIndex) ++degree;
  }
  return normalized(degree, wdhg.total_nodes());
}

double keyword_rank(const HeartbeatGraph& wdhg, std::size_t nodeIndex) {
  return degree_centrality(wdhg, nodeIndex) * static_cast<double>(wdhg.node_delta(nodeIndex));
}

std::vector<double> keyword_ranks(const HeartbeatGraph& wdhg) {
  const auto degree = positive_degrees(wdhg);
  std::vector<double> ranks(degree.size());
  for (std::size_t k = 0; k < degree.size(); ++k)
    ranks[k] = normalized(degree[k], wdhg.total_nodes()) * static_cast<double>(wdhg.node_deltas()[k]);
  return ranks;
}

std::vector<const HeartbeatGraph*> strong_candidates(std::span<const HeartbeatGraph> series,
                                                     const WindowVerdict& verdict) {
  std::vector<const HeartbeatGraph*> out;
  for (std::size_t i = 0; i < verdict.labels.size(); ++i) {
    if (verdict.labels[i] != Label::Strong) continue;
    const std::size_t idx = verdict.scores[i].wdhgIndex;
    if (idx >= series.size()) throw UsageError("verdict refers to a heartbeat graph outside the series");
    out.push_back(&series[idx]);
  }
  return out;
}

RankedTopicList merge_candidates(std::span<const HeartbeatGraph* const> candidates,
                                 const WindowVerdict& verdict) {
  std::map<std::string, TopicEntry, std::less<>> pool;
  for (const HeartbeatGraph* wdhg : candidates) {
    const auto ranks = keyword_ranks(*wdhg);
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      if (!(ranks[k] > 0.0)) continue;
      const std::string& word = wdhg->vocabulary()[k];
      auto [it, inserted] = pool.try_emplace(word, TopicEntry{word, ranks[k], wdhg->index()});
      if (inserted) continue;
      TopicEntry& kept = it->second;
      if (ranks[k] > kept.rank || (ranks[k] == kept.rank && wdhg->index() < kept.sourceWdhgIndex)) {
        kept.rank = ranks[k];
        kept.sourceWdhgIndex = wdhg->index();
      }
    }
  }

  RankedTopicList list;
  list.windowIndex = verdict.windowIndex;
  list.strongCount = verdict.strong_count();
  list.entries.reserve(pool.size());
  for (auto& [word, entry] : pool) list.entries.push_back(std::move(entry));
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const TopicEntry& a, const TopicEntry& b) { return a.rank > b.rank; });
  return list;
}

RankedTopicList top_k(const RankedTopicList& list, std::size_t k) {
  RankedTopicList out = list;
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

}  // namespace wdhg
