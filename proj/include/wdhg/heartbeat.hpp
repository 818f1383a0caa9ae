#pragma once

// Heartbeat graphs: the signed difference between two adjacent word graphs,
// aligned on their union vocabulary. Only the node deltas and the strictly
// positive edge deltas are kept; the full signed edge map is optional.

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wdhg/graph.hpp"

namespace wdhg {

// Edge of the positive-edge vector. Endpoints index into the vocabulary,
// with a < b.
struct IndexedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  Weight weight = 0;

  bool operator==(const IndexedEdge&) const = default;
};

class HeartbeatGraph {
 public:
  HeartbeatGraph() = default;
  HeartbeatGraph(std::size_t index, std::vector<std::string> vocabulary, std::vector<Weight> nodeDelta,
                 std::vector<IndexedEdge> positiveEdges,
                 std::optional<std::map<EdgeKey, Weight>> allEdgeDeltas = std::nullopt);

  std::size_t index() const noexcept { return index_; }
  // Sorted union vocabulary of the two source graphs.
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  std::size_t total_nodes() const noexcept { return vocabulary_.size(); }
  const std::vector<IndexedEdge>& positive_edges() const noexcept { return positiveEdges_; }
  // Per-vocabulary-index displaced frequency (later minus earlier).
  const std::vector<Weight>& node_deltas() const noexcept { return nodeDelta_; }

  Weight node_delta(std::size_t nodeIndex) const;
  // Total: words outside the vocabulary have delta 0.
  Weight node_delta(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const;

  const std::optional<std::map<EdgeKey, Weight>>& all_edge_deltas() const noexcept {
    return allEdgeDeltas_;
  }

 private:
  std::size_t index_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<Weight> nodeDelta_;
  std::vector<IndexedEdge> positiveEdges_;
  std::optional<std::map<EdgeKey, Weight>> allEdgeDeltas_;
};

struct DiffOptions {
  bool keepAllEdgeDeltas = false;
};

// later - earlier on the union vocabulary. The result's index is the
// earlier graph's index.
HeartbeatGraph align_and_diff(const WordGraph& earlier, const WordGraph& later,
                              const DiffOptions& options = {});

// Pairs series[i] with series[i+1]; returns series.size() - 1 graphs.
// Throws ConfigError for fewer than two graphs.
std::vector<HeartbeatGraph> build_wdhg_series(std::span<const WordGraph> series,
                                              const DiffOptions& options = {}, unsigned threads = 1);

// Debug dump: `word,delta` section, blank line, `wordA,wordB,delta` (positive
// edges only).
void write_wdhg_csv(std::ostream& out, const HeartbeatGraph& wdhg);
// {"index":..,"totalNodes":..,"positiveEdgeCount":..}
std::string wdhg_summary_json(const HeartbeatGraph& wdhg);

}  // namespace wdhg
