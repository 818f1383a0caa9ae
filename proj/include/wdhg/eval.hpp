#pragma once

// Ground-truth loading and the Topic-Recall@K / Keyword-Precision@K metrics.

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "wdhg/ingest.hpp"
#include "wdhg/topics.hpp"

namespace wdhg {

struct GroundTruthTopic {
  std::string topicId;
  std::set<std::string> mandatory;  // non-empty
  std::set<std::string> optional;   // disjoint from mandatory
  Timestamp eventTs = 0;
  std::optional<std::size_t> windowIndex;  // unset: the event falls outside every window
};

// Maps an event timestamp to the window that covers it.
using WindowBinder = std::function<std::optional<std::size_t>(Timestamp)>;

// Binds to the first list whose [intervalStart, intervalEnd) holds the time.
WindowBinder window_binder(std::span<const RankedTopicList> results);

// JSONL records {topic_id, event_ts, mandatory: [..], optional: [..]}; an
// explicit integer "window_index" overrides the binder. Keywords go through
// normalize_keyword(). Throws ParseError (with line number) on malformed
// records or overlapping mandatory/optional sets.
std::vector<GroundTruthTopic> load_ground_truth(std::istream& source, const WindowBinder& binder);

void write_ground_truth(std::ostream& out, std::span<const GroundTruthTopic> topics);

bool topic_detected(const GroundTruthTopic& topic, const std::set<std::string>& topkWords);

double topic_recall_at_k(std::span<const GroundTruthTopic> topics, std::span<const RankedTopicList> results,
                         std::size_t k);

double keyword_precision_at_k(std::span<const GroundTruthTopic> topics,
                              std::span<const RankedTopicList> results, std::size_t k);

struct TopicOutcome {
  std::string topicId;
  std::optional<std::size_t> windowIndex;
  std::size_t k = 0;
  bool detected = false;
  std::vector<std::string> matchedKeywords;  // mandatory or optional words found in the top-K
};

struct EvalReport {
  std::vector<std::size_t> kValues;
  std::map<std::size_t, double> topicRecallAtK;
  std::map<std::size_t, double> keywordPrecisionAtK;
  std::vector<TopicOutcome> perTopic;
  std::vector<std::string> warnings;
};

std::vector<std::size_t> default_k_values();  // 2, 4, ..., 20

EvalReport evaluate(std::span<const GroundTruthTopic> topics, std::span<const RankedTopicList> results,
                    std::span<const std::size_t> kValues);

// [{"k":..,"topic_recall":..,"keyword_precision":..}, ...]
void write_report_json(std::ostream& out, const EvalReport& report);
// topic_id,window_index,k,detected,matched_keywords
void write_report_csv(std::ostream& out, const EvalReport& report);

}  // namespace wdhg
