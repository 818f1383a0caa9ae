#pragma once

// Stream ingestion: record parsing, tweet normalization, duplicate removal
// and partitioning of the stream into fixed-length super-documents.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wdhg {

using Timestamp = std::int64_t;  // seconds since epoch

struct MicroDocument {
  Timestamp timestamp = 0;
  std::string author;
  std::vector<std::string> tokens;  // unique, normalized, first-occurrence order

  bool operator==(const MicroDocument&) const = default;
};

struct TextStream {
  std::vector<MicroDocument> documents;  // non-decreasing timestamps

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }
};

struct SuperDocument {
  std::size_t index = 0;
  Timestamp intervalStart = 0;
  Timestamp intervalEnd = 0;  // exclusive
  std::vector<MicroDocument> documents;

  Timestamp intervalLength() const noexcept { return intervalEnd - intervalStart; }
};

struct PreprocessConfig {
  std::set<std::string, std::less<>> stopwords;
  std::size_t minTokenLength = 3;
  bool dropDuplicates = true;
  // Drop "@name" tokens and http(s):// / www. links before normalization.
  bool stripMentionsAndUrls = true;

  void validate() const;
};

enum class InputFormat { Jsonl, Tsv };

InputFormat parse_input_format(std::string_view name);

struct ParseResult {
  TextStream stream;
  std::size_t skipped = 0;  // malformed lines
};

// Reads one record per line. Lines missing a field, or with an unparsable
// timestamp, are counted in `skipped`. Output is stably sorted by timestamp.
ParseResult parse_stream(std::istream& source, InputFormat format, const PreprocessConfig& config);

// Accepts integer seconds or an RFC 3339 date-time ("2012-05-05T14:00:00Z",
// optional fraction, "Z" or +hh:mm offset).
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Lowercase, split on whitespace and on characters outside [a-z0-9]
// (apostrophes are deleted instead so "don't" stays one word), then drop
// stopwords, short tokens and repeats.
std::vector<std::string> preprocess(std::string_view rawText, const PreprocessConfig& config);

// The per-token part of preprocess(): lowercase and keep [a-z0-9] runs.
// Used to normalize ground-truth keywords and stopword entries.
std::string normalize_keyword(std::string_view word);

// Removes documents whose token list equals (in order) that of an earlier one.
TextStream deduplicate(const TextStream& stream);

// First timestamp truncated down to a multiple of intervalLength.
Timestamp default_origin(const TextStream& stream, Timestamp intervalLength);

// Document at time t lands in super-document floor((t - origin) / intervalLength).
// Empty intervals between populated ones are materialized.
std::vector<SuperDocument> partition(const TextStream& stream, Timestamp intervalLength,
                                     Timestamp origin);

// One word per line, '#' comments and blank lines ignored.
std::set<std::string, std::less<>> load_stopwords(std::istream& source);
std::set<std::string, std::less<>> default_stopwords();

}  // namespace wdhg
