#pragma once

// Heartbeat scoring and per-window Strong/Weak classification.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wdhg/heartbeat.hpp"
#include "wdhg/ingest.hpp"

namespace wdhg {

enum class FeatureMode { GrowthFactor, AggregatedCentrality, Combined };

FeatureMode parse_feature_mode(std::string_view name);  // gf | ac | combined
std::string_view to_string(FeatureMode mode);

struct HeartbeatScore {
  std::size_t wdhgIndex = 0;
  double growthFactor = 0.0;
  double aggregatedCentrality = 0.0;
  double heartbeat = 0.0;
};

struct SlidingWindowConfig {
  Timestamp windowLength = 60;    // seconds covered by one window
  Timestamp intervalLength = 60;  // seconds per super-document
  double omega = 1.0;             // dispersion multiplier in the threshold
  // Distance between window starts; defaults to windowLength (tumbling).
  std::optional<Timestamp> strideLength;

  void validate() const;
  std::size_t wdhgs_per_window() const;
  std::size_t stride_wdhgs() const;
};

enum class Label { Strong, Weak };

std::string_view to_string(Label label);

struct Threshold {
  double theta = 0.0;
  double mean = 0.0;
};

struct WindowVerdict {
  std::size_t windowIndex = 0;  // ordinal of the window
  std::size_t firstWdhg = 0;    // index of the first heartbeat graph it covers
  double theta = 0.0;
  double mean = 0.0;
  std::vector<HeartbeatScore> scores;
  std::vector<Label> labels;  // parallel to scores

  std::size_t strong_count() const;
  // A single-graph window always labels its graph Strong.
  bool degenerate() const noexcept { return labels.size() == 1; }
};

// Contiguous run of heartbeat graphs forming one window.
struct WindowSpan {
  std::size_t windowIndex = 0;
  std::size_t first = 0;
  std::size_t count = 0;
};

// Windows of wdhgs_per_window() graphs starting every stride_wdhgs(). The
// last window may be partial; no window is emitted past the one that
// reaches the end of the series.
std::vector<WindowSpan> window_spans(std::size_t wdhgCount, const SlidingWindowConfig& config);

// Sum of all node deltas, positive and negative.
double growth_factor(const HeartbeatGraph& wdhg);

// Sum of positive incident edge weights over the total node count.
double topic_centrality(const HeartbeatGraph& wdhg, std::size_t nodeIndex);

// Sum of topic centrality over nodes touching at least one positive edge.
double aggregated_centrality(const HeartbeatGraph& wdhg);

double heartbeat(const HeartbeatGraph& wdhg, FeatureMode mode);
HeartbeatScore score(const HeartbeatGraph& wdhg, FeatureMode mode);

// mean + omega * population standard deviation. Throws UsageError on empty input.
Threshold window_threshold(std::span<const double> scores, double omega);

// Strong iff heartbeat >= theta.
WindowVerdict classify_window(std::span<const HeartbeatScore> scores, const SlidingWindowConfig& config,
                              std::size_t windowIndex = 0);

std::vector<WindowVerdict> detect(std::span<const HeartbeatGraph> series, const SlidingWindowConfig& config,
                                  FeatureMode mode, unsigned threads = 1);

// Maps heartbeat graph and window indexes back to wall-clock time. A heartbeat
// graph is stamped with the interval of its later source graph.
struct Timeline {
  Timestamp origin = 0;
  Timestamp intervalLength = 60;

  Timestamp wdhg_start(std::size_t wdhgIndex) const;
  Timestamp window_start(const WindowSpan& span) const;
  Timestamp window_end(const WindowSpan& span) const;  // exclusive
};

}  // namespace wdhg
