#include "wdhg/detection.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "wdhg/errors.hpp"

namespace wdhg {

FeatureMode parse_feature_mode(std::string_view name) {
  if (name == "gf") return FeatureMode::GrowthFactor;
  if (name == "ac") return FeatureMode::AggregatedCentrality;
  if (name == "combined") return FeatureMode::Combined;
  throw ConfigError("unknown feature mode '" + std::string(name) + "' (expected gf, ac or combined)");
}

std::string_view to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::GrowthFactor: return "gf";
    case FeatureMode::AggregatedCentrality: return "ac";
    case FeatureMode::Combined: return "combined";
  }
  return "?";
}

std::string_view to_string(Label label) { return label == Label::Strong ? "Strong" : "Weak"; }

void SlidingWindowConfig::validate() const {
  if (intervalLength <= 0) throw ConfigError("interval length must be positive");
  if (windowLength <= 0 || windowLength % intervalLength != 0)
    throw ConfigError("window length must be a positive multiple of the interval length");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be a finite value >= 0");
  if (strideLength && (*strideLength <= 0 || *strideLength % intervalLength != 0))
    throw ConfigError("stride must be a positive multiple of the interval length");
}

std::size_t SlidingWindowConfig::wdhgs_per_window() const {
  validate();
  return static_cast<std::size_t>(windowLength / intervalLength);
}

std::size_t SlidingWindowConfig::stride_wdhgs() const {
  validate();
  return static_cast<std::size_t>(strideLength.value_or(windowLength) / intervalLength);
}

std::size_t WindowVerdict::strong_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Strong));
}

std::vector<WindowSpan> window_spans(std::size_t wdhgCount, const SlidingWindowConfig& config) {
  const std::size_t n = config.wdhgs_per_window();
  const std::size_t stride = config.stride_wdhgs();
  std::vector<WindowSpan> spans;
  for (std::size_t first = 0; first < wdhgCount; first += stride) {
    const std::size_t count = std::min(n, wdhgCount - first);
    spans.push_back({spans.size(), first, count});
    if (first + count >= wdhgCount) break;
  }
  return spans;
}

double growth_factor(const HeartbeatGraph& wdhg) {
  Weight sum = 0;
  for (Weight d : wdhg.node_deltas()) sum += d;
  return static_cast<double>(sum);
}

double topic_centrality(const HeartbeatGraph& wdhg, std::size_t nodeIndex) {
  if (nodeIndex >= wdhg.total_nodes()) throw UsageError("node index out of range");
  Weight incident = 0;
  for (const auto& e : wdhg.positive_edges()) {
    if (e.a == nodeIndex || e.b == nodeIndex) incident += e.weight;
  }
  return static_cast<double>(incident) / static_cast<double>(wdhg.total_nodes());
}

double aggregated_centrality(const HeartbeatGraph& wdhg) {
  if (wdhg.positive_edges().empty()) return 0.0;
  // Incident weight per node in one pass; nodes with a positive edge form T.
  std::vector<Weight> incident(wdhg.total_nodes(), 0);
  std::vector<bool> touched(wdhg.total_nodes(), false);
  for (const auto& e : wdhg.positive_edges()) {
    incident[e.a] += e.weight;
    incident[e.b] += e.weight;
    touched[e.a] = touched[e.b] = true;
  }
  const double total = static_cast<double>(wdhg.total_nodes());
  double ac = 0.0;
  for (std::size_t k = 0; k < incident.size(); ++k) {
    if (touched[k]) ac += static_cast<double>(incident[k]) / total;
  }
  return ac;
}

double heartbeat(const HeartbeatGraph& wdhg, FeatureMode mode) { return score(wdhg, mode).heartbeat; }

HeartbeatScore score(const HeartbeatGraph& wdhg, FeatureMode mode) {
  HeartbeatScore s;
  s.wdhgIndex = wdhg.index();
  s.growthFactor = growth_factor(wdhg);
  s.aggregatedCentrality = aggregated_centrality(wdhg);
  switch (mode) {
    case FeatureMode::GrowthFactor: s.heartbeat = s.growthFactor; break;
    case FeatureMode::AggregatedCentrality: s.heartbeat = s.aggregatedCentrality; break;
    case FeatureMode::Combined: s.heartbeat = s.growthFactor * s.aggregatedCentrality; break;
  }
  return s;
}

Threshold window_threshold(std::span<const double> scores, double omega) {
  if (scores.empty()) throw UsageError("window_threshold needs at least one score");
  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  for (double s : scores) sum += s;
  const double mean = sum / n;
  double squares = 0.0;
  for (double s : scores) squares += (s - mean) * (s - mean);
  return {mean + omega * std::sqrt(squares / n), mean};
}

WindowVerdict classify_window(std::span<const HeartbeatScore> scores, const SlidingWindowConfig& config,
                              std::size_t windowIndex) {
  config.validate();
  WindowVerdict verdict;
  verdict.windowIndex = windowIndex;
  verdict.scores.assign(scores.begin(), scores.end());
  if (scores.empty()) return verdict;
  verdict.firstWdhg = scores.front().wdhgIndex;

  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.heartbeat);
  const Threshold t = window_threshold(values, config.omega);
  verdict.theta = t.theta;
  verdict.mean = t.mean;
  verdict.labels.reserve(scores.size());
  for (double v : values) verdict.labels.push_back(v >= t.theta ? Label::Strong : Label::Weak);
  return verdict;
}

std::vector<WindowVerdict> detect(std::span<const HeartbeatGraph> series, const SlidingWindowConfig& config,
                                  FeatureMode mode, unsigned threads) {
  if (series.empty()) throw UsageError("detect needs a non-empty heartbeat series");
  std::vector<HeartbeatScore> scores(series.size());
  detail::parallel_for(series.size(), threads, [&](std::size_t i) { scores[i] = score(series[i], mode); });

  const auto spans = window_spans(series.size(), config);
  std::vector<WindowVerdict> verdicts(spans.size());
  detail::parallel_for(spans.size(), threads, [&](std::size_t w) {
    const auto& span = spans[w];
    verdicts[w] = classify_window(std::span(scores).subspan(span.first, span.count), config, span.windowIndex);
  });
  return verdicts;
}

Timestamp Timeline::wdhg_start(std::size_t wdhgIndex) const {
  return origin + static_cast<Timestamp>(wdhgIndex + 1) * intervalLength;
}

Timestamp Timeline::window_start(const WindowSpan& span) const { return wdhg_start(span.first); }

Timestamp Timeline::window_end(const WindowSpan& span) const {
  return wdhg_start(span.first + span.count);
}

}  // namespace wdhg
