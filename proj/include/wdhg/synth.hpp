#pragma once

// Synthetic micro-document streams with planted events, plus the matching
// ground truth. Output is a pure function of the spec (seed included).

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wdhg/eval.hpp"
#include "wdhg/ingest.hpp"

namespace wdhg {

struct PlantedEvent {
  std::string topicId;  // defaults to "event<N>" when empty
  Timestamp startTs = 0;
  Timestamp durationSeconds = 0;
  std::vector<std::string> keywords;
  std::size_t docsPerInterval = 0;
};

struct SynthSpec {
  Timestamp originTs = 0;
  Timestamp durationSeconds = 3600;
  Timestamp intervalSeconds = 60;
  std::size_t backgroundVocabSize = 500;
  std::size_t backgroundDocsPerInterval = 20;
  std::size_t tokensPerDocument = 8;
  // Background words mixed into each event document. Keeps event documents
  // from collapsing under duplicate removal.
  std::size_t eventNoiseTokens = 3;
  // 0 draws background words uniformly; > 0 uses a Zipf law with this exponent.
  double zipfExponent = 0.0;
  std::vector<PlantedEvent> events;
  std::uint64_t seed = 1;

  // Throws ConfigError on invalid values, unaligned event times, keywords that
  // overlap the background vocabulary or that two overlapping events share.
  void validate() const;
};

struct SynthRecord {
  Timestamp timestamp = 0;
  std::string user;
  std::string text;

  bool operator==(const SynthRecord&) const = default;
};

struct SynthOutput {
  std::vector<SynthRecord> records;  // sorted by timestamp
  std::vector<GroundTruthTopic> groundTruth;
};

// Background words are "bgw" followed by a five-digit index.
std::string background_word(std::size_t index);

SynthOutput generate(const SynthSpec& spec);

// Same JSONL format parse_stream() reads: {"ts":..,"user":..,"text":..}.
void write_stream_jsonl(std::ostream& out, std::span<const SynthRecord> records);

// JSON spec file; see README for the field list.
SynthSpec load_synth_spec(std::istream& source);

}  // namespace wdhg
