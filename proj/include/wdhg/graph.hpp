#pragma once

// Weighted word co-occurrence graph of one super-document. Every
// micro-document adds a clique over its (unique) words.

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wdhg/ingest.hpp"

namespace wdhg {

using Weight = std::int64_t;

// Unordered word pair stored with the lexicographically smaller word first.
struct EdgeKey {
  std::string first;
  std::string second;

  static EdgeKey of(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
  }

  auto operator<=>(const EdgeKey&) const = default;
  bool operator==(const EdgeKey&) const = default;
};

struct WordGraph {
  std::size_t index = 0;
  std::map<std::string, Weight, std::less<>> nodes;
  std::map<EdgeKey, Weight> edges;

  Weight node_weight(std::string_view word) const;
  // Symmetric: edge_weight(a, b) == edge_weight(b, a). Missing edges weigh 0.
  Weight edge_weight(const std::string& a, const std::string& b) const;

  bool empty() const noexcept { return nodes.empty(); }
};

struct GraphOptions {
  // Documents longer than this are truncated before the clique is built.
  std::size_t maxTokensPerDocument = 100;
};

WordGraph build_word_graph(const SuperDocument& superdoc, const GraphOptions& options = {});

// One graph per super-document, index-aligned. `threads` > 1 builds graphs
// concurrently.
std::vector<WordGraph> build_graph_series(std::span<const SuperDocument> superdocs,
                                          const GraphOptions& options = {}, unsigned threads = 1);

// Debug dump: a `node,weight` section, a blank line, then `src,dst,weight`.
void write_graph_csv(std::ostream& out, const WordGraph& graph);

}  // namespace wdhg
