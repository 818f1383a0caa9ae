#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "wdhg/errors.hpp"
#include "wdhg/eval.hpp"

using namespace wdhg;

namespace {

GroundTruthTopic topic(std::string id, std::size_t window, std::set<std::string> mandatory,
                       std::set<std::string> optional = {}) {
  GroundTruthTopic t;
  t.topicId = std::move(id);
  t.windowIndex = window;
  t.mandatory = std::move(mandatory);
  t.optional = std::move(optional);
  return t;
}

RankedTopicList list(std::size_t window, std::vector<std::string> words) {
  RankedTopicList l;
  l.windowIndex = window;
  l.intervalStart = static_cast<Timestamp>(window) * 60;
  l.intervalEnd = l.intervalStart + 60;
  double rank = static_cast<double>(words.size());
  for (auto& w : words) l.entries.push_back({std::move(w), rank--, 0});
  return l;
}

}  // namespace

TEST_CASE("load_ground_truth: empty, normalization, window binding") {
  std::istringstream empty("");
  CHECK(load_ground_truth(empty, nullptr).empty());

  std::istringstream in(R"({"topic_id":"g1","event_ts":125,"mandatory":["Goal","ramirez"],"optional":["chelsea"]}
{"topic_id":7,"event_ts":"1970-01-01T00:00:30Z","mandatory":["#KickOff"]}
{"topic_id":"late","event_ts":5000,"mandatory":["end"],"window_index":3}
)");
  std::vector<RankedTopicList> windows = {list(0, {}), list(1, {}), list(2, {})};
  auto topics = load_ground_truth(in, window_binder(windows));
  REQUIRE(topics.size() == 3);
  CHECK(topics[0].mandatory == std::set<std::string>{"goal", "ramirez"});
  CHECK(topics[0].optional == std::set<std::string>{"chelsea"});
  CHECK(topics[0].windowIndex == 2);
  CHECK(topics[1].topicId == "7");
  CHECK(topics[1].mandatory == std::set<std::string>{"kickoff"});
  CHECK(topics[1].windowIndex == 0);
  CHECK(topics[2].windowIndex == 3);
}

TEST_CASE("load_ground_truth: errors carry line numbers") {
  auto fails_on_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      load_ground_truth(in, nullptr);
    } catch (const ParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  const std::string ok = R"({"topic_id":"a","event_ts":1,"mandatory":["aaa"]})";
  CHECK(fails_on_line(ok + "\n{broken", 2));
  CHECK(fails_on_line(ok + "\n" + R"({"topic_id":"b","event_ts":1,"mandatory":[]})", 2));
  CHECK(fails_on_line(R"({"topic_id":"b","event_ts":1})", 1));
  CHECK(fails_on_line(R"({"event_ts":1,"mandatory":["x"]})", 1));
  CHECK(fails_on_line(R"({"topic_id":"b","mandatory":["x"]})", 1));
  CHECK(fails_on_line(R"({"topic_id":"b","event_ts":1,"mandatory":["Goal"],"optional":["goal"]})", 1));
}

TEST_CASE("topic_detected requires every mandatory keyword") {
  const auto t = topic("g", 0, {"goal", "ramirez"});
  CHECK(topic_detected(t, {"goal", "ramirez", "chelsea"}));
  CHECK_FALSE(topic_detected(t, {"goal", "drogba"}));
  CHECK_FALSE(topic_detected(t, {}));
}

TEST_CASE("topic recall") {
  std::vector<GroundTruthTopic> topics = {topic("a", 0, {"goal"}), topic("b", 1, {"card"})};
  std::vector<RankedTopicList> results = {list(0, {"goal", "xxx"}), list(1, {"yyy", "card"})};
  CHECK(topic_recall_at_k(topics, results, 2) == 1.0);
  CHECK(topic_recall_at_k(topics, results, 1) == 0.5);
  CHECK(topic_recall_at_k(topics, std::vector<RankedTopicList>{}, 5) == 0.0);
  CHECK(topic_recall_at_k(std::vector<GroundTruthTopic>{}, results, 5) == 0.0);

  // a topic in the wrong window is not detected by a neighbour's list
  std::vector<GroundTruthTopic> shifted = {topic("a", 1, {"goal"})};
  CHECK(topic_recall_at_k(shifted, results, 2) == 0.0);
}

TEST_CASE("keyword precision") {
  std::vector<GroundTruthTopic> topics = {topic("a", 0, {"goal", "ramirez"}, {"chelsea"})};
  CHECK(keyword_precision_at_k(topics, std::vector{list(0, {"goal", "ramirez"})}, 2) == 1.0);

  std::vector<GroundTruthTopic> two = {topic("a", 0, {"goal", "ramirez"})};
  CHECK(keyword_precision_at_k(two, std::vector{list(0, {"goal", "weather"})}, 2) == 0.5);

  // window 1 has no ground truth, its noise does not count
  std::vector<RankedTopicList> withNoise = {list(0, {"goal", "weather"}), list(1, {"rain", "snow"})};
  CHECK(keyword_precision_at_k(two, withNoise, 2) == 0.5);

  // optional keywords of every topic in the window count
  std::vector<GroundTruthTopic> shared = {topic("a", 0, {"goal"}), topic("b", 0, {"card"}, {"yellow"})};
  CHECK(keyword_precision_at_k(shared, std::vector{list(0, {"yellow", "goal", "foul", "card"})}, 4) == 0.75);

  CHECK(keyword_precision_at_k(two, std::vector{list(0, {})}, 2) == 0.0);
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> pool = {"aaa", "bbb", "ccc", "ddd", "eee", "fff", "ggg", "hhh"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<GroundTruthTopic> topics;
    std::vector<RankedTopicList> results;
    for (std::size_t w = 0; w < 4; ++w) {
      auto words = pool;
      std::shuffle(words.begin(), words.end(), rng);
      words.resize(rng() % 8);
      results.push_back(list(w, words));
    }
    for (std::size_t t = 0; t < 1 + rng() % 6; ++t) {
      auto words = pool;
      std::shuffle(words.begin(), words.end(), rng);
      std::set<std::string> mandatory(words.begin(), words.begin() + 1 + static_cast<long>(rng() % 2));
      std::set<std::string> optional(words.begin() + 3, words.begin() + 4);
      topics.push_back(topic("t" + std::to_string(t), rng() % 5, mandatory, optional));
    }

    double previous = 0.0;
    for (std::size_t k = 0; k <= 10; ++k) {
      const double r = topic_recall_at_k(topics, results, k);
      const double p = keyword_precision_at_k(topics, results, k);
      CHECK(r >= previous);
      CHECK(r <= 1.0);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      previous = r;
    }

    auto shuffled = topics;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(topic_recall_at_k(shuffled, results, 4) == topic_recall_at_k(topics, results, 4));
    CHECK(keyword_precision_at_k(shuffled, results, 4) == keyword_precision_at_k(topics, results, 4));
  }
}

TEST_CASE("perfect results score 1") {
  std::vector<GroundTruthTopic> topics = {topic("a", 0, {"goal", "ramirez"}, {"chelsea"}),
                                          topic("b", 1, {"halftime"})};
  std::vector<RankedTopicList> results = {list(0, {"chelsea", "goal", "ramirez"}), list(1, {"halftime"})};
  CHECK(topic_recall_at_k(topics, results, 3) == 1.0);
  CHECK(keyword_precision_at_k(topics, results, 3) == 1.0);
}

TEST_CASE("evaluate: report, warnings and writers") {
  std::vector<GroundTruthTopic> topics = {topic("a", 0, {"goal"}), topic("b", 7, {"card"})};
  GroundTruthTopic outside;
  outside.topicId = "c";
  outside.mandatory = {"foul"};
  topics.push_back(outside);
  std::vector<RankedTopicList> results = {list(0, {"goal", "noise"})};

  const std::vector<std::size_t> ks = {1, 2};
  auto report = evaluate(topics, results, ks);
  CHECK(report.warnings.size() == 2);
  CHECK(report.topicRecallAtK.at(1) == doctest::Approx(1.0 / 3));
  CHECK(report.keywordPrecisionAtK.at(2) == 0.5);
  CHECK(report.perTopic.size() == 6);

  std::ostringstream json;
  write_report_json(json, report);
  CHECK(json.str().find("\"topic_recall\"") != std::string::npos);

  std::ostringstream csv;
  write_report_csv(csv, report);
  CHECK(csv.str().rfind("topic_id,window_index,k,detected,matched_keywords\na,0,1,1,goal\n", 0) == 0);

  CHECK(default_k_values() == std::vector<std::size_t>{2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
  auto empty = evaluate(topics, std::vector<RankedTopicList>{}, ks);
  CHECK(empty.topicRecallAtK.at(2) == 0.0);
}

TEST_CASE("ground truth round trip") {
  std::vector<GroundTruthTopic> topics = {topic("a", 0, {"goal", "ramirez"}, {"chelsea"})};
  topics[0].eventTs = 90;
  std::ostringstream out;
  write_ground_truth(out, topics);
  CHECK(out.str() == R"({"topic_id":"a","event_ts":90,"mandatory":["goal","ramirez"],"optional":["chelsea"]})"
                     "\n");
  std::istringstream in(out.str());
  auto back = load_ground_truth(in, nullptr);
  REQUIRE(back.size() == 1);
  CHECK(back[0].mandatory == topics[0].mandatory);
  CHECK(back[0].optional == topics[0].optional);
  CHECK(back[0].eventTs == 90);
}
