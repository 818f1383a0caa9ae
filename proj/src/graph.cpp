#include "wdhg/graph.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace wdhg {

Weight WordGraph::node_weight(std::string_view word) const {
  auto it = nodes.find(word);
  return it == nodes.end() ? 0 : it->second;
}

Weight WordGraph::edge_weight(const std::string& a, const std::string& b) const {
  auto it = edges.find(EdgeKey::of(a, b));
  return it == edges.end() ? 0 : it->second;
}

WordGraph build_word_graph(const SuperDocument& superdoc, const GraphOptions& options) {
  WordGraph graph;
  graph.index = superdoc.index;
  std::vector<std::string> words;
  for (const auto& doc : superdoc.documents) {
    const std::size_t n = std::min(doc.tokens.size(), options.maxTokensPerDocument);
    words.assign(doc.tokens.begin(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    for (const auto& w : words) ++graph.nodes[w];
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) ++graph.edges[EdgeKey{words[i], words[j]}];
    }
  }
  return graph;
}

std::vector<WordGraph> build_graph_series(std::span<const SuperDocument> superdocs,
                                          const GraphOptions& options, unsigned threads) {
  std::vector<WordGraph> series(superdocs.size());
  detail::parallel_for(superdocs.size(), threads,
                       [&](std::size_t i) { series[i] = build_word_graph(superdocs[i], options); });
  return series;
}

void write_graph_csv(std::ostream& out, const WordGraph& graph) {
  out << "node,weight\n";
  for (const auto& [word, weight] : graph.nodes) out << word << ',' << weight << '\n';
  out << "\nsrc,dst,weight\n";
  for (const auto& [key, weight] : graph.edges)
    out << key.first << ',' << key.second << ',' << weight << '\n';
}

}  // namespace wdhg
