#include "wdhg/eval.hpp"

#include <algorithm>

#include <json.hpp>

#include "wdhg/errors.hpp"

namespace wdhg {

namespace {

const RankedTopicList* find_window(std::span<const RankedTopicList> results, std::size_t windowIndex) {
  auto it = std::find_if(results.begin(), results.end(),
                         [&](const RankedTopicList& l) { return l.windowIndex == windowIndex; });
  return it == results.end() ? nullptr : &*it;
}

std::set<std::string> top_words(const RankedTopicList& list, std::size_t k) {
  std::set<std::string> words;
  for (std::size_t i = 0; i < std::min(k, list.entries.size()); ++i) words.insert(list.entries[i].word);
  return words;
}

std::set<std::string> read_keywords(const nlohmann::json& record, const char* field, std::size_t line) {
  std::set<std::string> out;
  auto it = record.find(field);
  if (it == record.end()) return out;
  if (!it->is_array()) throw ParseError(line, std::string("'") + field + "' must be an array");
  for (const auto& item : *it) {
    if (!item.is_string()) throw ParseError(line, std::string("'") + field + "' entries must be strings");
    if (std::string word = normalize_keyword(item.get_ref<const std::string&>()); !word.empty())
      out.insert(std::move(word));
  }
  return out;
}

}  // namespace

WindowBinder window_binder(std::span<const RankedTopicList> results) {
  std::vector<RankedTopicList> bounds;
  bounds.reserve(results.size());
  for (const auto& r : results) bounds.push_back({r.windowIndex, r.intervalStart, r.intervalEnd, 0, {}});
  return [bounds = std::move(bounds)](Timestamp ts) -> std::optional<std::size_t> {
    for (const auto& b : bounds) {
      if (ts >= b.intervalStart && ts < b.intervalEnd) return b.windowIndex;
    }
    return std::nullopt;
  };
}

std::vector<GroundTruthTopic> load_ground_truth(std::istream& source, const WindowBinder& binder) {
  if (!source) throw IoError("ground-truth source is not readable");
  std::vector<GroundTruthTopic> topics;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(source, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = nlohmann::json::parse(line, nullptr, false);
    if (!record.is_object()) throw ParseError(lineNo, "not a JSON object");

    GroundTruthTopic topic;
    auto id = record.find("topic_id");
    if (id == record.end()) throw ParseError(lineNo, "missing 'topic_id'");
    topic.topicId = id->is_string() ? id->get<std::string>() : id->dump();

    auto ts = record.find("event_ts");
    std::optional<Timestamp> when;
    if (ts != record.end() && ts->is_number_integer()) when = ts->get<Timestamp>();
    if (ts != record.end() && ts->is_string()) when = parse_timestamp(ts->get_ref<const std::string&>());
    if (!when) throw ParseError(lineNo, "missing or invalid 'event_ts'");
    topic.eventTs = *when;

    if (!record.contains("mandatory")) throw ParseError(lineNo, "missing 'mandatory'");
    topic.mandatory = read_keywords(record, "mandatory", lineNo);
    topic.optional = read_keywords(record, "optional", lineNo);
    if (topic.mandatory.empty()) throw ParseError(lineNo, "'mandatory' must name at least one keyword");
    for (const auto& w : topic.optional) {
      if (topic.mandatory.contains(w))
        throw ParseError(lineNo, "keyword '" + w + "' is both mandatory and optional");
    }

    if (auto wi = record.find("window_index"); wi != record.end()) {
      if (!wi->is_number_unsigned()) throw ParseError(lineNo, "'window_index' must be a non-negative integer");
      topic.windowIndex = wi->get<std::size_t>();
    } else if (binder) {
      topic.windowIndex = binder(topic.eventTs);
    }
    topics.push_back(std::move(topic));
  }
  if (source.bad()) throw IoError("read failure on ground-truth source");
  return topics;
}

void write_ground_truth(std::ostream& out, std::span<const GroundTruthTopic> topics) {
  for (const auto& t : topics) {
    nlohmann::ordered_json j;
    j["topic_id"] = t.topicId;
    j["event_ts"] = t.eventTs;
    j["mandatory"] = t.mandatory;
    j["optional"] = t.optional;
    out << j.dump() << '\n';
  }
}

bool topic_detected(const GroundTruthTopic& topic, const std::set<std::string>& topkWords) {
  return std::includes(topkWords.begin(), topkWords.end(), topic.mandatory.begin(), topic.mandatory.end());
}

double topic_recall_at_k(std::span<const GroundTruthTopic> topics, std::span<const RankedTopicList> results,
                         std::size_t k) {
  if (topics.empty()) return 0.0;
  std::size_t detected = 0;
  for (const auto& topic : topics) {
    if (!topic.windowIndex) continue;
    const RankedTopicList* list = find_window(results, *topic.windowIndex);
    if (list && topic_detected(topic, top_words(*list, k))) ++detected;
  }
  return static_cast<double>(detected) / static_cast<double>(topics.size());
}

double keyword_precision_at_k(std::span<const GroundTruthTopic> topics,
                              std::span<const RankedTopicList> results, std::size_t k) {
  // Keyword pool per annotated window; unannotated windows never count.
  std::map<std::size_t, std::set<std::string>> keywordsByWindow;
  for (const auto& topic : topics) {
    if (!topic.windowIndex) continue;
    auto& pool = keywordsByWindow[*topic.windowIndex];
    pool.insert(topic.mandatory.begin(), topic.mandatory.end());
    pool.insert(topic.optional.begin(), topic.optional.end());
  }

  std::size_t matched = 0;
  std::size_t retrieved = 0;
  for (const auto& [window, pool] : keywordsByWindow) {
    const RankedTopicList* list = find_window(results, window);
    if (!list) continue;
    const std::size_t n = std::min(k, list->entries.size());
    retrieved += n;
    for (std::size_t i = 0; i < n; ++i) matched += pool.contains(list->entries[i].word) ? 1 : 0;
  }
  return retrieved == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(retrieved);
}

std::vector<std::size_t> default_k_values() { return {2, 4, 6, 8, 10, 12, 14, 16, 18, 20}; }

EvalReport evaluate(std::span<const GroundTruthTopic> topics, std::span<const RankedTopicList> results,
                    std::span<const std::size_t> kValues) {
  EvalReport report;
  report.kValues.assign(kValues.begin(), kValues.end());
  for (const auto& topic : topics) {
    if (!topic.windowIndex) {
      report.warnings.push_back("topic '" + topic.topicId + "' (event_ts " + std::to_string(topic.eventTs) +
                                ") falls outside every window; counted as undetected");
    } else if (!find_window(results, *topic.windowIndex)) {
      report.warnings.push_back("topic '" + topic.topicId + "' refers to missing window " +
                                std::to_string(*topic.windowIndex) + "; counted as undetected");
    }
  }

  for (std::size_t k : kValues) {
    report.topicRecallAtK[k] = topic_recall_at_k(topics, results, k);
    report.keywordPrecisionAtK[k] = keyword_precision_at_k(topics, results, k);
    for (const auto& topic : topics) {
      TopicOutcome outcome{topic.topicId, topic.windowIndex, k, false, {}};
      const RankedTopicList* list = topic.windowIndex ? find_window(results, *topic.windowIndex) : nullptr;
      if (list) {
        const auto words = top_words(*list, k);
        outcome.detected = topic_detected(topic, words);
        for (const auto& w : words) {
          if (topic.mandatory.contains(w) || topic.optional.contains(w)) outcome.matchedKeywords.push_back(w);
        }
      }
      report.perTopic.push_back(std::move(outcome));
    }
  }
  return report;
}

void write_report_json(std::ostream& out, const EvalReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t k : report.kValues) {
    nlohmann::ordered_json row;
    row["k"] = k;
    row["topic_recall"] = report.topicRecallAtK.at(k);
    row["keyword_precision"] = report.keywordPrecisionAtK.at(k);
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "topic_id,window_index,k,detected,matched_keywords\n";
  for (const auto& t : report.perTopic) {
    out << t.topicId << ',';
    if (t.windowIndex) out << *t.windowIndex;
    out << ',' << t.k << ',' << (t.detected ? 1 : 0) << ',';
    for (std::size_t i = 0; i < t.matchedKeywords.size(); ++i) out << (i ? " " : "") << t.matchedKeywords[i];
    out << '\n';
  }
}

}  // namespace wdhg
