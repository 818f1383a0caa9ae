#pragma once

// End-to-end run: text stream -> super-documents -> graph series ->
// heartbeat series -> per-window verdicts -> ranked topics.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wdhg/detection.hpp"
#include "wdhg/graph.hpp"
#include "wdhg/heartbeat.hpp"
#include "wdhg/ingest.hpp"
#include "wdhg/topics.hpp"

namespace wdhg {

// Window, interval and omega used for the three benchmark datasets.
struct Preset {
  Timestamp windowLength;
  Timestamp intervalLength;
  double omega;
};

// facup | supertuesday | uselection
Preset preset(std::string_view name);

struct PipelineOptions {
  SlidingWindowConfig window;
  FeatureMode mode = FeatureMode::AggregatedCentrality;
  std::size_t topK = 20;
  std::optional<Timestamp> origin;  // default: first timestamp floored to the interval
  bool dropDuplicates = true;
  GraphOptions graph;
  DiffOptions diff;
  unsigned threads = 1;
  bool keepGraphs = false;  // retain the word graphs for debug dumps

  void validate() const;
};

struct PipelineResult {
  Timeline timeline;
  std::size_t documents = 0;  // after duplicate removal
  std::vector<WordGraph> graphs;  // empty unless keepGraphs
  std::vector<HeartbeatGraph> wdhgs;
  std::vector<WindowVerdict> verdicts;
  std::vector<RankedTopicList> topics;  // one per window, truncated to topK
  std::vector<double> windowMillis;     // scoring + classification + merge, per window
};

// Throws ConfigError when the stream covers fewer than two intervals.
PipelineResult run_pipeline(const TextStream& stream, const PipelineOptions& options);

// One object per window:
// {window_index, interval_start, interval_end, strong_count, topics: [{word, rank, wdhg_index}]}
void write_topics_jsonl(std::ostream& out, std::span<const RankedTopicList> lists);
std::vector<RankedTopicList> read_topics_jsonl(std::istream& in);

// One block per window: a "# window ..." header, then rank<TAB>word lines.
void write_topics_text(std::ostream& out, std::span<const RankedTopicList> lists);

// wdhg_index,interval_start,gf,ac,heartbeat,theta,label
void write_heartbeats_csv(std::ostream& out, const PipelineResult& result);

// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace wdhg
