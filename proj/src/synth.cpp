#include "wdhg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include <json.hpp>

#include "wdhg/errors.hpp"

namespace wdhg {

namespace {

// Draws are built directly on the engine output: std:: distributions are
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

class BackgroundSampler {
 public:
  BackgroundSampler(std::size_t vocab, double zipf) : vocab_(vocab) {
    if (zipf <= 0.0) return;
    cdf_.resize(vocab);
    double acc = 0.0;
    for (std::size_t r = 0; r < vocab; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), zipf);
      cdf_[r] = acc;
    }
    for (double& c : cdf_) c /= acc;
  }

  std::size_t draw(Rng& rng) const {
    if (cdf_.empty()) return rng.below(vocab_);
    const double u = rng.unit();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), vocab_ - 1);
  }

  // `count` distinct background words (capped at the vocabulary size).
  std::vector<std::string> distinct(Rng& rng, std::size_t count) const {
    count = std::min(count, vocab_);
    std::set<std::size_t> picked;
    std::vector<std::string> words;
    while (words.size() < count) {
      const std::size_t w = draw(rng);
      if (picked.insert(w).second) words.push_back(background_word(w));
    }
    return words;
  }

 private:
  std::size_t vocab_;
  std::vector<double> cdf_;
};

std::string join(const std::vector<std::string>& words) {
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

bool overlaps(const PlantedEvent& a, const PlantedEvent& b) {
  return a.startTs < b.startTs + b.durationSeconds && b.startTs < a.startTs + a.durationSeconds;
}

std::string event_id(const PlantedEvent& e, std::size_t i) {
  return e.topicId.empty() ? "event" + std::to_string(i) : e.topicId;
}

}  // namespace

std::string background_word(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "bgw%05zu", index);
  return buf;
}

void SynthSpec::validate() const {
  if (intervalSeconds <= 0) throw ConfigError("synth: interval_secs must be positive");
  if (durationSeconds <= 0 || durationSeconds % intervalSeconds != 0)
    throw ConfigError("synth: duration_secs must be a positive multiple of interval_secs");
  if (originTs < 0) throw ConfigError("synth: origin_ts must be non-negative");
  if (backgroundVocabSize == 0 || backgroundVocabSize > 99999)
    throw ConfigError("synth: background_vocab_size must be in [1, 99999]");
  if (tokensPerDocument == 0) throw ConfigError("synth: tokens_per_document must be positive");
  if (!(zipfExponent >= 0.0) || !std::isfinite(zipfExponent))
    throw ConfigError("synth: zipf_exponent must be >= 0");

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::string id = event_id(e, i);
    if (e.keywords.empty()) throw ConfigError("synth: event '" + id + "' has no keywords");
    if (e.durationSeconds <= 0 || e.durationSeconds % intervalSeconds != 0)
      throw ConfigError("synth: event '" + id + "' duration must be a positive multiple of interval_secs");
    if (e.startTs < originTs || (e.startTs - originTs) % intervalSeconds != 0)
      throw ConfigError("synth: event '" + id + "' must start on an interval boundary");
    if (e.startTs + e.durationSeconds > originTs + durationSeconds)
      throw ConfigError("synth: event '" + id + "' runs past the end of the stream");
    for (const auto& k : e.keywords) {
      if (normalize_keyword(k) != k || k.size() < 3)
        throw ConfigError("synth: keyword '" + k + "' is not a normalized token of length >= 3");
      if (k.rfind("bgw", 0) == 0) throw ConfigError("synth: keyword '" + k + "' collides with the background vocabulary");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!overlaps(e, events[j])) continue;
      for (const auto& k : e.keywords) {
        if (std::find(events[j].keywords.begin(), events[j].keywords.end(), k) != events[j].keywords.end())
          throw ConfigError("synth: overlapping events '" + event_id(events[j], j) + "' and '" + id +
                            "' share keyword '" + k + "'");
      }
    }
  }
}

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const BackgroundSampler sampler(spec.backgroundVocabSize, spec.zipfExponent);
  const std::size_t intervals = static_cast<std::size_t>(spec.durationSeconds / spec.intervalSeconds);

  SynthOutput out;
  auto emit = [&](Timestamp intervalStart, std::vector<std::string> words) {
    const Timestamp ts = intervalStart + static_cast<Timestamp>(rng.below(static_cast<std::size_t>(spec.intervalSeconds)));
    out.records.push_back({ts, "user" + std::to_string(rng.below(10000)), join(words)});
  };

  for (std::size_t i = 0; i < intervals; ++i) {
    const Timestamp start = spec.originTs + static_cast<Timestamp>(i) * spec.intervalSeconds;
    for (std::size_t d = 0; d < spec.backgroundDocsPerInterval; ++d) emit(start, sampler.distinct(rng, spec.tokensPerDocument));

    for (const auto& e : spec.events) {
      if (start < e.startTs || start >= e.startTs + e.durationSeconds) continue;
      for (std::size_t d = 0; d < e.docsPerInterval; ++d) {
        std::vector<std::string> words = e.keywords;
        for (auto& w : sampler.distinct(rng, spec.eventNoiseTokens)) words.push_back(std::move(w));
        rng.shuffle(words);
        emit(start, std::move(words));
      }
    }
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const SynthRecord& a, const SynthRecord& b) { return a.timestamp < b.timestamp; });

  for (std::size_t i = 0; i < spec.events.size(); ++i) {
    const auto& e = spec.events[i];
    GroundTruthTopic topic;
    topic.topicId = event_id(e, i);
    topic.eventTs = e.startTs;
    topic.mandatory.insert(e.keywords.begin(), e.keywords.end());
    out.groundTruth.push_back(std::move(topic));
  }
  return out;
}

void write_stream_jsonl(std::ostream& out, std::span<const SynthRecord> records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["ts"] = r.timestamp;
    j["user"] = r.user;
    j["text"] = r.text;
    out << j.dump() << '\n';
  }
}

SynthSpec load_synth_spec(std::istream& source) {
  if (!source) throw IoError("synth spec is not readable");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(source);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }

  SynthSpec spec;
  try {
    spec.originTs = j.value("origin_ts", spec.originTs);
    spec.durationSeconds = j.value("duration_secs", spec.durationSeconds);
    spec.intervalSeconds = j.value("interval_secs", spec.intervalSeconds);
    spec.backgroundVocabSize = j.value("background_vocab_size", spec.backgroundVocabSize);
    spec.backgroundDocsPerInterval = j.value("background_docs_per_interval", spec.backgroundDocsPerInterval);
    spec.tokensPerDocument = j.value("tokens_per_document", spec.tokensPerDocument);
    spec.eventNoiseTokens = j.value("event_noise_tokens", spec.eventNoiseTokens);
    spec.zipfExponent = j.value("zipf_exponent", spec.zipfExponent);
    spec.seed = j.value("seed", spec.seed);
    for (const auto& ev : j.value("events", nlohmann::json::array())) {
      PlantedEvent e;
      e.topicId = ev.value("topic_id", std::string{});
      e.startTs = ev.at("start_ts").get<Timestamp>();
      e.durationSeconds = ev.at("duration_secs").get<Timestamp>();
      e.keywords = ev.at("keywords").get<std::vector<std::string>>();
      e.docsPerInterval = ev.at("docs_per_interval").get<std::size_t>();
      spec.events.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace wdhg
