#include "wdhg/heartbeat.hpp"

#include <algorithm>

#include <json.hpp>

#include "parallel.hpp"
#include "wdhg/errors.hpp"

namespace wdhg {

HeartbeatGraph::HeartbeatGraph(std::size_t index, std::vector<std::string> vocabulary,
                               std::vector<Weight> nodeDelta, std::vector<IndexedEdge> positiveEdges,
                               std::optional<std::map<EdgeKey, Weight>> allEdgeDeltas)
    : index_(index),
      vocabulary_(std::move(vocabulary)),
      nodeDelta_(std::move(nodeDelta)),
      positiveEdges_(std::move(positiveEdges)),
      allEdgeDeltas_(std::move(allEdgeDeltas)) {
  if (nodeDelta_.size() != vocabulary_.size())
    throw UsageError("node delta vector does not match vocabulary size");
  if (std::adjacent_find(vocabulary_.begin(), vocabulary_.end(), std::greater_equal<>{}) !=
      vocabulary_.end())
    throw UsageError("heartbeat vocabulary must be strictly sorted");
  for (const auto& e : positiveEdges_) {
    if (e.weight <= 0 || e.a >= e.b || e.b >= vocabulary_.size())
      throw UsageError("malformed positive edge");
  }
}

Weight HeartbeatGraph::node_delta(std::size_t nodeIndex) const {
  if (nodeIndex >= nodeDelta_.size()) throw UsageError("node index out of range");
  return nodeDelta_[nodeIndex];
}

Weight HeartbeatGraph::node_delta(std::string_view word) const {
  auto idx = index_of(word);
  return idx ? nodeDelta_[*idx] : 0;
}

std::optional<std::size_t> HeartbeatGraph::index_of(std::string_view word) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), word);
  if (it == vocabulary_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary_.begin());
}

namespace {

HeartbeatGraph diff_graphs(const WordGraph& earlier, const WordGraph& later, std::size_t index,
                           const DiffOptions& options) {
  // Both node maps are sorted, so a merge walk yields the canonical union
  // order and the node deltas in one pass.
  std::vector<std::string> vocabulary;
  std::vector<Weight> deltas;
  vocabulary.reserve(std::max(earlier.nodes.size(), later.nodes.size()));
  auto e = earlier.nodes.begin();
  auto l = later.nodes.begin();
  while (e != earlier.nodes.end() || l != later.nodes.end()) {
    if (l == later.nodes.end() || (e != earlier.nodes.end() && e->first < l->first)) {
      vocabulary.push_back(e->first);
      deltas.push_back(-e->second);
      ++e;
    } else if (e == earlier.nodes.end() || l->first < e->first) {
      vocabulary.push_back(l->first);
      deltas.push_back(l->second);
      ++l;
    } else {
      vocabulary.push_back(l->first);
      deltas.push_back(l->second - e->second);
      ++e;
      ++l;
    }
  }

  auto indexOf = [&](const std::string& w) {
    return static_cast<std::size_t>(std::lower_bound(vocabulary.begin(), vocabulary.end(), w) -
                                    vocabulary.begin());
  };

  std::vector<IndexedEdge> positive;
  std::optional<std::map<EdgeKey, Weight>> all;
  if (options.keepAllEdgeDeltas) all.emplace();

  auto ee = earlier.edges.begin();
  auto le = later.edges.begin();
  while (ee != earlier.edges.end() || le != later.edges.end()) {
    const EdgeKey* key;
    Weight delta;
    if (le == later.edges.end() || (ee != earlier.edges.end() && ee->first < le->first)) {
      key = &ee->first;
      delta = -ee->second;
      ++ee;
    } else if (ee == earlier.edges.end() || le->first < ee->first) {
      key = &le->first;
      delta = le->second;
      ++le;
    } else {
      key = &le->first;
      delta = le->second - ee->second;
      ++ee;
      ++le;
    }
    if (delta > 0) positive.push_back({indexOf(key->first), indexOf(key->second), delta});
    if (all) all->emplace(*key, delta);
  }

  return HeartbeatGraph(index, std::move(vocabulary), std::move(deltas), std::move(positive),
                        std::move(all));
}

}  // namespace

HeartbeatGraph align_and_diff(const WordGraph& earlier, const WordGraph& later,
                              const DiffOptions& options) {
  return diff_graphs(earlier, later, earlier.index, options);
}

std::vector<HeartbeatGraph> build_wdhg_series(std::span<const WordGraph> series,
                                              const DiffOptions& options, unsigned threads) {
  if (series.size() < 2)
    throw ConfigError("a heartbeat series needs at least two graphs (stream spans fewer than two intervals)");
  std::vector<HeartbeatGraph> out(series.size() - 1);
  detail::parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = diff_graphs(series[i], series[i + 1], i, options);
  });
  return out;
}

void write_wdhg_csv(std::ostream& out, const HeartbeatGraph& wdhg) {
  const auto& vocab = wdhg.vocabulary();
  out << "word,delta\n";
  for (std::size_t i = 0; i < vocab.size(); ++i) out << vocab[i] << ',' << wdhg.node_deltas()[i] << '\n';
  out << "\nwordA,wordB,delta\n";
  for (const auto& e : wdhg.positive_edges()) out << vocab[e.a] << ',' << vocab[e.b] << ',' << e.weight << '\n';
}

std::string wdhg_summary_json(const HeartbeatGraph& wdhg) {
  nlohmann::ordered_json j;
  j["index"] = wdhg.index();
  j["totalNodes"] = wdhg.total_nodes();
  j["positiveEdgeCount"] = wdhg.positive_edges().size();
  return j.dump();
}

}  // namespace wdhg
