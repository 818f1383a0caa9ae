#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "wdhg/errors.hpp"
#include "wdhg/ingest.hpp"

using namespace wdhg;

namespace {

PreprocessConfig with_stopwords(std::initializer_list<const char*> words) {
  PreprocessConfig cfg;
  for (const char* w : words) cfg.stopwords.insert(w);
  return cfg;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

TextStream stream_of(std::vector<std::pair<Timestamp, std::vector<std::string>>> docs) {
  TextStream s;
  for (auto& [t, tokens] : docs) s.documents.push_back({t, "u", std::move(tokens)});
  return s;
}

}  // namespace

TEST_CASE("preprocess applies lowercase, stripping, stopwords, length and dedup") {
  CHECK(preprocess("Goal!!! GOAL by Ramirez", with_stopwords({"by"})) ==
        std::vector<std::string>{"goal", "ramirez"});
  CHECK(preprocess("a an to", with_stopwords({"a", "an", "to"})).empty());
  CHECK(preprocess("", {}).empty());
  CHECK(preprocess("   \t\n ", {}).empty());
}

TEST_CASE("mention and URL stripping") {
  PreprocessConfig keep;
  keep.stripMentionsAndUrls = false;
  CHECK(preprocess("RT @user http://x.co GOAL", keep) == std::vector<std::string>{"user", "http", "goal"});
  CHECK(preprocess("RT @user http://x.co GOAL", PreprocessConfig{}) == std::vector<std::string>{"goal"});
  CHECK(preprocess("see https://t.co/abc and www.example.com now", PreprocessConfig{}) ==
        std::vector<std::string>{"see", "and", "now"});
}

TEST_CASE("hashtags keep their word, apostrophes join, other symbols split") {
  PreprocessConfig cfg;
  CHECK(preprocess("#FACup final", cfg) == std::vector<std::string>{"facup", "final"});
  CHECK(preprocess("don't panic", cfg) == std::vector<std::string>{"dont", "panic"});
  CHECK(preprocess("Chelsea\xE2\x80\x99s goal", cfg) == std::vector<std::string>{"chelseas", "goal"});
  CHECK(preprocess("goal-line drama", cfg) == std::vector<std::string>{"goal", "line", "drama"});
  CHECK(preprocess("caf\xC3\xA9 olé", cfg) == std::vector<std::string>{"caf"});
}

TEST_CASE("minTokenLength is configurable and validated") {
  PreprocessConfig cfg;
  cfg.minTokenLength = 1;
  CHECK(preprocess("a bb ccc", cfg) == std::vector<std::string>{"a", "bb", "ccc"});
  cfg.minTokenLength = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("preprocess is a fixed point on its own output") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ019 #@!.,'-/:\t\xE2\x80\x99";
  PreprocessConfig cfg = with_stopwords({"abc", "xyz"});
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const std::size_t len = rng() % 60;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    const auto once = preprocess(text, cfg);
    CHECK(preprocess(join(once), cfg) == once);
    for (const auto& t : once) {
      CHECK(t.size() >= 3);
      CHECK(t.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789") == std::string::npos);
    }
  }
}

TEST_CASE("parse_stream: empty input") {
  std::istringstream in("");
  auto r = parse_stream(in, InputFormat::Jsonl, {});
  CHECK(r.stream.empty());
  CHECK(r.skipped == 0);
}

TEST_CASE("parse_stream: JSONL sorted by timestamp") {
  std::istringstream in(R"({"ts":5,"user":"a","text":"fifth word"}
{"ts":3,"user":"b","text":"third word"}
{"ts":4,"user":"c","text":"fourth word","lang":"en"}
)");
  auto r = parse_stream(in, InputFormat::Jsonl, {});
  REQUIRE(r.stream.size() == 3);
  CHECK(r.stream.documents[0].timestamp == 3);
  CHECK(r.stream.documents[1].timestamp == 4);
  CHECK(r.stream.documents[2].timestamp == 5);
  CHECK(r.stream.documents[0].author == "b");
  CHECK(r.stream.documents[0].tokens == std::vector<std::string>{"third", "word"});
}

TEST_CASE("parse_stream: malformed lines are counted, not fatal") {
  std::istringstream in(R"({"ts":1,"user":"a","text":"one"}
{"ts":2,"user":"b"}
{"ts":3,"user":"c","text":"three"}
not json at all
{"ts":-4,"user":"d","text":"negative"}
)");
  auto r = parse_stream(in, InputFormat::Jsonl, {});
  CHECK(r.stream.size() == 2);
  CHECK(r.skipped == 3);
}

TEST_CASE("parse_stream: TSV and RFC 3339 timestamps") {
  std::istringstream in("2012-05-05T14:00:10Z\tfan1\tGoal Ramirez!\n"
                        "1336226400\tfan2\tkick off\n"
                        "bad\tfan3\ttext\n"
                        "onlytwo\tcolumns\n");
  auto r = parse_stream(in, InputFormat::Tsv, {});
  REQUIRE(r.stream.size() == 2);
  CHECK(r.skipped == 2);
  CHECK(r.stream.documents[0].timestamp == 1336226400);
  CHECK(r.stream.documents[1].timestamp == 1336226410);
  CHECK(r.stream.documents[1].tokens == std::vector<std::string>{"goal", "ramirez"});
}

TEST_CASE("parse_timestamp") {
  CHECK(parse_timestamp("0") == 0);
  CHECK(parse_timestamp("1336226400") == 1336226400);
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_timestamp("2012-05-05T14:00:00Z") == 1336226400);
  CHECK(parse_timestamp("2012-05-05T15:00:00+01:00") == 1336226400);
  CHECK(parse_timestamp("2012-05-05T13:30:00.250-00:30") == 1336226400);
  CHECK_FALSE(parse_timestamp("2012-02-30T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("2012-05-05T14:00:00"));
  CHECK_FALSE(parse_timestamp("yesterday"));
  CHECK_FALSE(parse_timestamp(""));
}

TEST_CASE("parse_stream: unreadable source") {
  std::ifstream missing("/nonexistent/definitely/not/here.jsonl");
  CHECK_THROWS_AS(parse_stream(missing, InputFormat::Jsonl, {}), IoError);
}

TEST_CASE("parse_input_format") {
  CHECK(parse_input_format("jsonl") == InputFormat::Jsonl);
  CHECK(parse_input_format("tsv") == InputFormat::Tsv);
  CHECK_THROWS_AS(parse_input_format("csv"), ConfigError);
}

TEST_CASE("deduplicate uses the ordered token list") {
  auto s = stream_of({{1, {"aaa", "bbb"}}, {2, {"aaa", "bbb"}}, {3, {"bbb", "aaa"}}});
  auto d = deduplicate(s);
  REQUIRE(d.size() == 2);
  CHECK(d.documents[0].timestamp == 1);
  CHECK(d.documents[1].tokens == std::vector<std::string>{"bbb", "aaa"});

  auto distinct = stream_of({{1, {"aaa"}}, {2, {"bbb"}}, {3, {"ccc"}}});
  CHECK(deduplicate(distinct).documents == distinct.documents);
  CHECK(deduplicate(TextStream{}).empty());
}

TEST_CASE("deduplicate never grows and is idempotent") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    TextStream s;
    for (int i = 0; i < 30; ++i) {
      std::vector<std::string> t;
      for (std::size_t k = 0; k < rng() % 3; ++k) t.push_back(std::string(1, static_cast<char>('a' + rng() % 3)) + "xx");
      s.documents.push_back({i, "u", t});
    }
    auto once = deduplicate(s);
    CHECK(once.size() <= s.size());
    CHECK(deduplicate(once).documents == once.documents);
  }
}

TEST_CASE("partition: floor division boundaries") {
  auto s = stream_of({{0, {"aaa"}}, {59, {"bbb"}}, {60, {"ccc"}}});
  auto p = partition(s, 60, 0);
  REQUIRE(p.size() == 2);
  CHECK(p[0].documents.size() == 2);
  CHECK(p[1].documents.size() == 1);
  CHECK(p[1].intervalStart == 60);
  CHECK(p[1].intervalEnd == 120);
  CHECK(p[1].intervalLength() == 60);
}

TEST_CASE("partition: empty intervals are materialized") {
  auto p = partition(stream_of({{0, {"aaa"}}, {130, {"bbb"}}}), 60, 0);
  REQUIRE(p.size() == 3);
  CHECK(p[0].documents.size() == 1);
  CHECK(p[1].documents.empty());
  CHECK(p[2].documents.size() == 1);
  CHECK(p[1].index == 1);
}

TEST_CASE("partition: single document, empty stream, bad config") {
  auto p = partition(stream_of({{1000, {"aaa"}}}), 60, default_origin(stream_of({{1000, {"aaa"}}}), 60));
  REQUIRE(p.size() == 1);
  CHECK(p[0].intervalStart == 960);
  CHECK(partition(TextStream{}, 60, 0).empty());
  CHECK_THROWS_AS(partition(stream_of({{0, {"aaa"}}}), 0, 0), ConfigError);
  CHECK_THROWS_AS(partition(stream_of({{0, {"aaa"}}}), -5, 0), ConfigError);
  CHECK_THROWS_AS(partition(stream_of({{10, {"aaa"}}}), 60, 11), ConfigError);
}

TEST_CASE("partition is complete and mutually exclusive") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    TextStream s;
    Timestamp t = static_cast<Timestamp>(rng() % 1000);
    for (int i = 0; i < 200; ++i) {
      t += static_cast<Timestamp>(rng() % 40);
      s.documents.push_back({t, "u" + std::to_string(i), {"w" + std::to_string(i) + "xx"}});
    }
    const Timestamp interval = 1 + static_cast<Timestamp>(rng() % 120);
    const auto parts = partition(s, interval, default_origin(s, interval));
    std::size_t total = 0;
    std::set<std::string> seen;
    for (const auto& part : parts) {
      total += part.documents.size();
      for (const auto& d : part.documents) {
        CHECK(d.timestamp >= part.intervalStart);
        CHECK(d.timestamp < part.intervalEnd);
        CHECK(seen.insert(d.author).second);
      }
    }
    CHECK(total == s.size());
  }
}

TEST_CASE("stopword loading") {
  std::istringstream in("# comment\nThe\n\n  and  \nDon't\n");
  auto words = load_stopwords(in);
  CHECK(words == std::set<std::string, std::less<>>{"the", "and", "dont"});
  CHECK(default_stopwords().contains("the"));
  CHECK_FALSE(default_stopwords().contains("goal"));
}

TEST_CASE("shipped stopword file matches the built-in list") {
  std::ifstream in(std::string(WDHG_SOURCE_DIR) + "/data/stopwords_en.txt");
  REQUIRE(in);
  CHECK(load_stopwords(in) == default_stopwords());
}
