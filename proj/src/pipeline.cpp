#include "wdhg/pipeline.hpp"

#include <charconv>
#include <chrono>

#include <json.hpp>

#include "parallel.hpp"
#include "wdhg/errors.hpp"

namespace wdhg {

Preset preset(std::string_view name) {
  if (name == "facup") return {60, 60, 1.0};
  if (name == "supertuesday") return {3600, 600, 0.6};
  if (name == "uselection") return {600, 60, 0.6};
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected facup, supertuesday or uselection)");
}

void PipelineOptions::validate() const {
  window.validate();
  if (topK < 1) throw ConfigError("top-k must be at least 1");
  if (origin && *origin < 0) throw ConfigError("origin must be non-negative");
}

PipelineResult run_pipeline(const TextStream& stream, const PipelineOptions& options) {
  options.validate();
  const TextStream docs = options.dropDuplicates ? deduplicate(stream) : stream;

  PipelineResult result;
  result.documents = docs.size();
  result.timeline.intervalLength = options.window.intervalLength;
  result.timeline.origin = options.origin.value_or(default_origin(docs, options.window.intervalLength));

  const auto superdocs = partition(docs, options.window.intervalLength, result.timeline.origin);
  auto graphs = build_graph_series(superdocs, options.graph, options.threads);
  result.wdhgs = build_wdhg_series(graphs, options.diff, options.threads);
  if (options.keepGraphs) result.graphs = std::move(graphs);

  const auto spans = window_spans(result.wdhgs.size(), options.window);
  result.verdicts.resize(spans.size());
  result.topics.resize(spans.size());
  result.windowMillis.resize(spans.size());

  detail::parallel_for(spans.size(), options.threads, [&](std::size_t w) {
    const auto started = std::chrono::steady_clock::now();
    const WindowSpan& span = spans[w];

    std::vector<HeartbeatScore> scores;
    scores.reserve(span.count);
    for (std::size_t i = span.first; i < span.first + span.count; ++i)
      scores.push_back(score(result.wdhgs[i], options.mode));
    WindowVerdict verdict = classify_window(scores, options.window, span.windowIndex);

    const auto candidates = strong_candidates(result.wdhgs, verdict);
    RankedTopicList topics = top_k(merge_candidates(candidates, verdict), options.topK);
    topics.intervalStart = result.timeline.window_start(span);
    topics.intervalEnd = result.timeline.window_end(span);

    result.windowMillis[w] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    result.verdicts[w] = std::move(verdict);
    result.topics[w] = std::move(topics);
  });
  return result;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_topics_jsonl(std::ostream& out, std::span<const RankedTopicList> lists) {
  for (const auto& list : lists) {
    nlohmann::ordered_json j;
    j["window_index"] = list.windowIndex;
    j["interval_start"] = list.intervalStart;
    j["interval_end"] = list.intervalEnd;
    j["strong_count"] = list.strongCount;
    auto topics = nlohmann::ordered_json::array();
    for (const auto& e : list.entries) {
      nlohmann::ordered_json t;
      t["word"] = e.word;
      t["rank"] = e.rank;
      t["wdhg_index"] = e.sourceWdhgIndex;
      topics.push_back(std::move(t));
    }
    j["topics"] = std::move(topics);
    out << j.dump() << '\n';
  }
}

std::vector<RankedTopicList> read_topics_jsonl(std::istream& in) {
  if (!in) throw IoError("detection output is not readable");
  std::vector<RankedTopicList> lists;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      RankedTopicList list;
      list.windowIndex = j.at("window_index").get<std::size_t>();
      list.intervalStart = j.at("interval_start").get<Timestamp>();
      list.intervalEnd = j.at("interval_end").get<Timestamp>();
      list.strongCount = j.value("strong_count", std::size_t{0});
      for (const auto& t : j.at("topics"))
        list.entries.push_back({t.at("word").get<std::string>(), t.at("rank").get<double>(),
                                t.value("wdhg_index", std::size_t{0})});
      lists.push_back(std::move(list));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineNo, e.what());
    }
  }
  return lists;
}

void write_topics_text(std::ostream& out, std::span<const RankedTopicList> lists) {
  bool first = true;
  for (const auto& list : lists) {
    if (!first) out << '\n';
    first = false;
    out << "# window " << list.windowIndex << " [" << list.intervalStart << ", " << list.intervalEnd
        << ") strong=" << list.strongCount << '\n';
    for (const auto& e : list.entries) out << format_double(e.rank) << '\t' << e.word << '\n';
  }
}

void write_heartbeats_csv(std::ostream& out, const PipelineResult& result) {
  out << "wdhg_index,interval_start,gf,ac,heartbeat,theta,label\n";
  std::size_t next = 0;  // overlapping windows: report each graph under the first window covering it
  for (const auto& verdict : result.verdicts) {
    for (std::size_t i = 0; i < verdict.scores.size(); ++i) {
      const auto& s = verdict.scores[i];
      if (s.wdhgIndex < next) continue;
      out << s.wdhgIndex << ',' << result.timeline.wdhg_start(s.wdhgIndex) << ','
          << format_double(s.growthFactor) << ',' << format_double(s.aggregatedCentrality) << ','
          << format_double(s.heartbeat) << ',' << format_double(verdict.theta) << ','
          << to_string(verdict.labels[i]) << '\n';
      next = s.wdhgIndex + 1;
    }
  }
}

}  // namespace wdhg
