#include "wdhg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <unordered_set>

#include <json.hpp>

#include "wdhg/errors.hpp"

namespace wdhg {

namespace {

constexpr std::string_view kDefaultStopwords[] = {
    "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "aren", "because", "been", "before", "being", "below", "between", "both", "but",
    "can", "cannot", "could", "couldn", "did", "didn", "does", "doesn", "doing", "don",
    "dont", "down", "during", "each", "few", "for", "from", "further", "get", "got", "had",
    "hadn", "has", "hasn", "have", "haven", "having", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "http", "https", "into", "isn", "its", "itself", "just",
    "let", "lol", "more", "most", "mustn", "myself", "nor", "not", "now", "off", "once",
    "only", "other", "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
    "shan", "she", "should", "shouldn", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
    "through", "too", "under", "until", "very", "via", "was", "wasn", "were", "weren",
    "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "won",
    "would", "wouldn", "www", "you", "your", "yours", "yourself", "yourselves",
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_alnum_lower(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (to_lower_ascii(s[i]) != prefix[i]) return false;
  }
  return true;
}

bool is_mention_or_url(std::string_view raw) {
  return raw.front() == '@' || starts_with_ci(raw, "http://") || starts_with_ci(raw, "https://") ||
         starts_with_ci(raw, "www.");
}

// Apostrophe: ASCII ' and U+2019 (E2 80 99).
std::size_t apostrophe_width(std::string_view s, std::size_t i) {
  if (s[i] == '\'') return 1;
  if (s.size() - i >= 3 && s[i] == '\xE2' && s[i + 1] == '\x80' && s[i + 2] == '\x99') return 3;
  return 0;
}

// Splits one whitespace-delimited chunk into lowercase [a-z0-9] runs.
template <typename Sink>
void split_normalized(std::string_view chunk, Sink&& sink) {
  std::string current;
  for (std::size_t i = 0; i < chunk.size();) {
    if (std::size_t w = apostrophe_width(chunk, i); w > 0) {
      i += w;
      continue;
    }
    char c = to_lower_ascii(chunk[i]);
    if (is_alnum_lower(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      sink(std::move(current));
      current.clear();
    }
    ++i;
  }
  if (!current.empty()) sink(std::move(current));
}

std::optional<Timestamp> parse_integer(std::string_view text) {
  Timestamp value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<int> fixed_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm|-hh:mm)
  auto year = fixed_digits(s, 0, 4);
  auto month = fixed_digits(s, 5, 2);
  auto day = fixed_digits(s, 8, 2);
  auto hour = fixed_digits(s, 11, 2);
  auto minute = fixed_digits(s, 14, 2);
  auto second = fixed_digits(s, 17, 2);
  if (!year || !month || !day || !hour || !minute || !second) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    return std::nullopt;
  if (*hour > 23 || *minute > 59 || *second > 60) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                           std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t digitsStart = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digitsStart) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;

  Timestamp offset = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    auto oh = fixed_digits(s, pos + 1, 2);
    auto om = fixed_digits(s, pos + 4, 2);
    if (!oh || !om || s[pos + 3] != ':') return std::nullopt;
    offset = (*oh * 3600 + *om * 60) * (s[pos] == '+' ? 1 : -1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const Timestamp days = sys_days{ymd}.time_since_epoch().count();
  return days * 86400 + *hour * 3600 + *minute * 60 + *second - offset;
}

struct RawRecord {
  Timestamp timestamp;
  std::string author;
  std::string text;
};

std::optional<RawRecord> read_json_record(std::string_view line) {
  auto json = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!json.is_object()) return std::nullopt;
  auto ts = json.find("ts");
  auto user = json.find("user");
  auto text = json.find("text");
  if (ts == json.end() || user == json.end() || text == json.end()) return std::nullopt;
  if (!user->is_string() || !text->is_string()) return std::nullopt;

  std::optional<Timestamp> when;
  if (ts->is_number_integer()) {
    when = ts->get<Timestamp>();
  } else if (ts->is_string()) {
    when = parse_timestamp(ts->get_ref<const std::string&>());
  }
  if (!when || *when < 0) return std::nullopt;
  return RawRecord{*when, user->get<std::string>(), text->get<std::string>()};
}

std::optional<RawRecord> read_tsv_record(std::string_view line) {
  const auto first = line.find('\t');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = line.find('\t', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  auto when = parse_timestamp(line.substr(0, first));
  if (!when) return std::nullopt;
  return RawRecord{*when, std::string(line.substr(first + 1, second - first - 1)),
                   std::string(line.substr(second + 1))};
}

}  // namespace

void PreprocessConfig::validate() const {
  if (minTokenLength < 1) throw ConfigError("minTokenLength must be at least 1");
}

InputFormat parse_input_format(std::string_view name) {
  if (name == "jsonl") return InputFormat::Jsonl;
  if (name == "tsv") return InputFormat::Tsv;
  throw ConfigError("unknown input format '" + std::string(name) + "' (expected jsonl or tsv)");
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  std::optional<Timestamp> value =
      text.find_first_not_of("0123456789") == std::string_view::npos ? parse_integer(text)
                                                                      : parse_rfc3339(text);
  if (value && *value < 0) return std::nullopt;
  return value;
}

std::vector<std::string> preprocess(std::string_view rawText, const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  std::unordered_set<std::string> seen;
  auto accept = [&](std::string token) {
    if (token.size() < config.minTokenLength) return;
    if (config.stopwords.contains(token)) return;
    if (!seen.insert(token).second) return;
    tokens.push_back(std::move(token));
  };

  std::size_t i = 0;
  while (i < rawText.size()) {
    while (i < rawText.size() && is_space(rawText[i])) ++i;
    const std::size_t start = i;
    while (i < rawText.size() && !is_space(rawText[i])) ++i;
    if (start == i) break;
    const std::string_view chunk = rawText.substr(start, i - start);
    if (config.stripMentionsAndUrls && is_mention_or_url(chunk)) continue;
    split_normalized(chunk, accept);
  }
  return tokens;
}

std::string normalize_keyword(std::string_view word) {
  std::string out;
  split_normalized(word, [&](std::string piece) { out += piece; });
  return out;
}

ParseResult parse_stream(std::istream& source, InputFormat format, const PreprocessConfig& config) {
  config.validate();
  if (!source) throw IoError("input stream is not readable");

  ParseResult result;
  std::string line;
  while (std::getline(source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto record = format == InputFormat::Jsonl ? read_json_record(line) : read_tsv_record(line);
    if (!record) {
      ++result.skipped;
      continue;
    }
    result.stream.documents.push_back(
        MicroDocument{record->timestamp, std::move(record->author), preprocess(record->text, config)});
  }
  if (source.bad()) throw IoError("read failure on input stream");

  std::stable_sort(result.stream.documents.begin(), result.stream.documents.end(),
                   [](const MicroDocument& a, const MicroDocument& b) { return a.timestamp < b.timestamp; });
  return result;
}

TextStream deduplicate(const TextStream& stream) {
  TextStream out;
  std::set<std::vector<std::string>> seen;
  for (const auto& doc : stream.documents) {
    if (seen.insert(doc.tokens).second) out.documents.push_back(doc);
  }
  return out;
}

Timestamp default_origin(const TextStream& stream, Timestamp intervalLength) {
  if (intervalLength <= 0) throw ConfigError("interval length must be positive");
  if (stream.empty()) return 0;
  const Timestamp first = stream.documents.front().timestamp;
  return first - first % intervalLength;
}

std::vector<SuperDocument> partition(const TextStream& stream, Timestamp intervalLength,
                                     Timestamp origin) {
  if (intervalLength <= 0) throw ConfigError("interval length must be positive");
  std::vector<SuperDocument> out;
  if (stream.empty()) return out;
  if (origin > stream.documents.front().timestamp)
    throw ConfigError("partition origin lies after the first document");

  const auto slot = [&](Timestamp t) { return static_cast<std::size_t>((t - origin) / intervalLength); };
  const std::size_t count = slot(stream.documents.back().timestamp) + 1;
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].index = i;
    out[i].intervalStart = origin + static_cast<Timestamp>(i) * intervalLength;
    out[i].intervalEnd = out[i].intervalStart + intervalLength;
  }
  for (const auto& doc : stream.documents) out[slot(doc.timestamp)].documents.push_back(doc);
  return out;
}

std::set<std::string, std::less<>> load_stopwords(std::istream& source) {
  if (!source) throw IoError("stopword source is not readable");
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(source, line)) {
    std::string_view view = line;
    while (!view.empty() && is_space(view.front())) view.remove_prefix(1);
    while (!view.empty() && is_space(view.back())) view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    if (std::string word = normalize_keyword(view); !word.empty()) words.insert(std::move(word));
  }
  return words;
}

std::set<std::string, std::less<>> default_stopwords() {
  return {std::begin(kDefaultStopwords), std::end(kDefaultStopwords)};
}

}  // namespace wdhg
