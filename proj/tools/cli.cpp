#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>

#include <CLI11.hpp>

#include "wdhg/errors.hpp"
#include "wdhg/eval.hpp"
#include "wdhg/pipeline.hpp"
#include "wdhg/synth.hpp"

namespace wdhg::cli {

namespace {

struct RunConfig {
  std::string inputPath = "-";
  std::string inputFormat = "jsonl";
  std::string stopwordsPath;
  std::string preset;
  Timestamp windowLengthSeconds = 60;
  Timestamp intervalLengthSeconds = 60;
  Timestamp strideSeconds = 0;  // 0: same as the window
  double omega = 1.0;
  std::string featureMode = "ac";
  std::size_t topK = 20;
  std::optional<Timestamp> originTs;
  std::string groundTruthPath;
  std::string outputPath = "-";
  std::string outputFormat = "jsonl";
  std::string dumpDir;
  bool emitHeartbeats = false;
  bool timing = false;
  bool keepDuplicates = false;
  bool keepMentions = false;
  std::size_t minTokenLength = 3;
  unsigned threads = 1;
  std::vector<std::size_t> kValues;
};

struct PipelineFlags {
  CLI::Option* window = nullptr;
  CLI::Option* interval = nullptr;
  CLI::Option* omega = nullptr;
};

PipelineFlags add_pipeline_flags(CLI::App& cmd, RunConfig& cfg) {
  PipelineFlags flags;
  cmd.add_option("--input", cfg.inputPath, "Input stream (JSONL or TSV); '-' reads stdin")->required();
  cmd.add_option("--format", cfg.inputFormat, "Input format")->check(CLI::IsMember({"jsonl", "tsv"}));
  cmd.add_option("--stopwords", cfg.stopwordsPath, "Stopword file (falls back to $WDHG_STOPWORDS, then the built-in list)");
  cmd.add_option("--preset", cfg.preset, "Parameter preset")->check(CLI::IsMember({"facup", "supertuesday", "uselection"}));
  flags.window = cmd.add_option("--window-secs", cfg.windowLengthSeconds, "Sliding window length in seconds");
  flags.interval = cmd.add_option("--interval-secs", cfg.intervalLengthSeconds, "Super-document interval in seconds");
  cmd.add_option("--stride-secs", cfg.strideSeconds, "Distance between window starts (default: window length)");
  flags.omega = cmd.add_option("--omega", cfg.omega, "Threshold dispersion multiplier");
  cmd.add_option("--feature", cfg.featureMode, "Heartbeat feature")->check(CLI::IsMember({"gf", "ac", "combined"}));
  cmd.add_option("--top-k", cfg.topK, "Keywords kept per window");
  cmd.add_option("--origin-ts", cfg.originTs, "Partition origin timestamp");
  cmd.add_option("--out", cfg.outputPath, "Output path; '-' writes stdout");
  cmd.add_option("--threads", cfg.threads, "Worker threads (1 = fully serial)");
  cmd.add_option("--min-token-length", cfg.minTokenLength, "Shortest token kept");
  cmd.add_flag("--keep-duplicates", cfg.keepDuplicates, "Do not remove duplicate tweets");
  cmd.add_flag("--keep-mentions", cfg.keepMentions, "Keep @mentions and URLs as text");
  cmd.add_option("--dump-dir", cfg.dumpDir, "Write per-interval graph and heartbeat dumps here");
  return flags;
}

std::set<std::string, std::less<>> resolve_stopwords(const RunConfig& cfg) {
  std::string path = cfg.stopwordsPath;
  if (path.empty()) {
    if (const char* env = std::getenv("WDHG_STOPWORDS"); env && *env) path = env;
  }
  if (path.empty()) return default_stopwords();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file '" + path + "'");
  return load_stopwords(in);
}

PipelineOptions pipeline_options(RunConfig& cfg, const PipelineFlags& flags) {
  if (!cfg.preset.empty()) {
    const Preset p = preset(cfg.preset);
    if (flags.window->count() == 0) cfg.windowLengthSeconds = p.windowLength;
    if (flags.interval->count() == 0) cfg.intervalLengthSeconds = p.intervalLength;
    if (flags.omega->count() == 0) cfg.omega = p.omega;
  }
  PipelineOptions options;
  options.window.windowLength = cfg.windowLengthSeconds;
  options.window.intervalLength = cfg.intervalLengthSeconds;
  options.window.omega = cfg.omega;
  if (cfg.strideSeconds != 0) options.window.strideLength = cfg.strideSeconds;
  options.mode = parse_feature_mode(cfg.featureMode);
  options.topK = cfg.topK;
  options.origin = cfg.originTs;
  options.dropDuplicates = !cfg.keepDuplicates;
  options.threads = cfg.threads == 0 ? 1 : cfg.threads;
  options.keepGraphs = !cfg.dumpDir.empty();
  options.diff.keepAllEdgeDeltas = !cfg.dumpDir.empty();
  options.validate();
  return options;
}

// Opens `path` for reading, or stdin for "-".
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw IoError("cannot open '" + path + "' for reading");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : fallback_; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failure");
  }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

PipelineResult run_stream(RunConfig& cfg, const PipelineFlags& flags, std::ostream& err) {
  const PipelineOptions options = pipeline_options(cfg, flags);
  PreprocessConfig pre;
  pre.stopwords = resolve_stopwords(cfg);
  pre.minTokenLength = cfg.minTokenLength;
  pre.dropDuplicates = !cfg.keepDuplicates;
  pre.stripMentionsAndUrls = !cfg.keepMentions;
  pre.validate();

  Input input(cfg.inputPath);
  ParseResult parsed = parse_stream(input.stream(), parse_input_format(cfg.inputFormat), pre);
  if (parsed.skipped > 0) err << "warning: skipped " << parsed.skipped << " malformed line(s)\n";

  PipelineResult result = run_pipeline(parsed.stream, options);

  if (!cfg.dumpDir.empty()) {
    std::filesystem::create_directories(cfg.dumpDir);
    const std::filesystem::path dir(cfg.dumpDir);
    for (const auto& g : result.graphs) {
      std::ofstream f(dir / ("graph_" + std::to_string(g.index) + ".csv"));
      write_graph_csv(f, g);
    }
    std::ofstream summary(dir / "wdhg_summary.jsonl");
    for (const auto& h : result.wdhgs) {
      std::ofstream f(dir / ("wdhg_" + std::to_string(h.index()) + ".csv"));
      write_wdhg_csv(f, h);
      summary << wdhg_summary_json(h) << '\n';
    }
    if (!summary) throw IoError("cannot write dumps to '" + cfg.dumpDir + "'");
  }
  return result;
}

void report_timing(const PipelineResult& result, std::ostream& err) {
  for (std::size_t w = 0; w < result.windowMillis.size(); ++w)
    err << "window " << w << " " << format_double(result.windowMillis[w]) << " ms\n";
  const double total = std::accumulate(result.windowMillis.begin(), result.windowMillis.end(), 0.0);
  const double avg = result.windowMillis.empty() ? 0.0 : total / static_cast<double>(result.windowMillis.size());
  err << "average_window_ms " << format_double(avg) << '\n';
}

int cmd_detect(RunConfig& cfg, const PipelineFlags& flags, std::ostream& out, std::ostream& err) {
  if (cfg.emitHeartbeats && cfg.outputPath == "-")
    throw ConfigError("--emit-heartbeats needs --out so the CSV can be written next to it");
  const PipelineResult result = run_stream(cfg, flags, err);

  Output output(cfg.outputPath, out);
  if (cfg.outputFormat == "text")
    write_topics_text(output.stream(), result.topics);
  else
    write_topics_jsonl(output.stream(), result.topics);
  output.finish();

  if (cfg.emitHeartbeats) {
    Output csv(cfg.outputPath + ".heartbeats.csv", out);
    write_heartbeats_csv(csv.stream(), result);
    csv.finish();
  }
  if (cfg.timing) report_timing(result, err);

  if (!cfg.groundTruthPath.empty()) {
    Input gt(cfg.groundTruthPath);
    const auto topics = load_ground_truth(gt.stream(), window_binder(result.topics));
    const auto ks = cfg.kValues.empty() ? default_k_values() : cfg.kValues;
    const EvalReport report = evaluate(topics, result.topics, ks);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    for (std::size_t k : ks)
      err << "K=" << k << " topic_recall=" << format_double(report.topicRecallAtK.at(k))
          << " keyword_precision=" << format_double(report.keywordPrecisionAtK.at(k)) << '\n';
  }
  return 0;
}

int cmd_heartbeats(RunConfig& cfg, const PipelineFlags& flags, std::ostream& out, std::ostream& err) {
  const PipelineResult result = run_stream(cfg, flags, err);
  Output output(cfg.outputPath, out);
  write_heartbeats_csv(output.stream(), result);
  output.finish();
  if (cfg.timing) report_timing(result, err);
  return 0;
}

int cmd_evaluate(RunConfig& cfg, const std::string& perTopicPath, std::ostream& out, std::ostream& err) {
  Input detections(cfg.inputPath);
  const auto results = read_topics_jsonl(detections.stream());
  Input gt(cfg.groundTruthPath);
  const auto topics = load_ground_truth(gt.stream(), window_binder(results));

  const auto ks = cfg.kValues.empty() ? default_k_values() : cfg.kValues;
  const EvalReport report = evaluate(topics, results, ks);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';

  Output output(cfg.outputPath, out);
  write_report_json(output.stream(), report);
  output.finish();
  if (!perTopicPath.empty()) {
    Output csv(perTopicPath, out);
    write_report_csv(csv.stream(), report);
    csv.finish();
  }
  return 0;
}

int cmd_synth(const std::string& specPath, const std::string& streamPath, const std::string& truthPath,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  Input in(specPath);
  SynthSpec spec = load_synth_spec(in.stream());
  if (seed) spec.seed = *seed;
  const SynthOutput generated = generate(spec);

  Output stream(streamPath, out);
  write_stream_jsonl(stream.stream(), generated.records);
  stream.finish();
  if (!truthPath.empty()) {
    Output truth(truthPath, out);
    write_ground_truth(truth.stream(), generated.groundTruth);
    truth.finish();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event detection on micro-document streams with weighted dynamic heartbeat graphs", "wdhg"};
  app.require_subcommand(1);

  RunConfig detectCfg;
  auto* detect = app.add_subcommand("detect", "Detect events and write ranked topic lists per window");
  const PipelineFlags detectFlags = add_pipeline_flags(*detect, detectCfg);
  detect->add_option("--output-format", detectCfg.outputFormat, "Topic list format")
      ->check(CLI::IsMember({"jsonl", "text"}));
  detect->add_flag("--emit-heartbeats", detectCfg.emitHeartbeats, "Also write <out>.heartbeats.csv");
  detect->add_flag("--timing", detectCfg.timing, "Report per-window processing time on stderr");
  detect->add_option("--ground-truth", detectCfg.groundTruthPath, "Score the run against this ground truth");
  detect->add_option("--k", detectCfg.kValues, "K values for --ground-truth scoring")->delimiter(',');

  RunConfig hbCfg;
  auto* heartbeats = app.add_subcommand("heartbeats", "Write per-graph heartbeat scores, thresholds and labels as CSV");
  const PipelineFlags hbFlags = add_pipeline_flags(*heartbeats, hbCfg);
  heartbeats->add_flag("--timing", hbCfg.timing, "Report per-window processing time on stderr");

  RunConfig evalCfg;
  std::string perTopicPath;
  auto* evaluateCmd = app.add_subcommand("evaluate", "Compute Topic-Recall@K and Keyword-Precision@K");
  evaluateCmd->add_option("--input", evalCfg.inputPath, "Output of `detect` (JSONL)")->required();
  evaluateCmd->add_option("--ground-truth", evalCfg.groundTruthPath, "Ground-truth JSONL")->required();
  evaluateCmd->add_option("--out", evalCfg.outputPath, "Report JSON path; '-' writes stdout");
  evaluateCmd->add_option("--per-topic", perTopicPath, "Per-topic CSV path");
  evaluateCmd->add_option("--k", evalCfg.kValues, "Comma-separated K values (default 2,4,...,20)")->delimiter(',');

  std::string specPath;
  std::string streamPath = "-";
  std::string truthPath;
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic stream with planted events");
  synth->add_option("--input", specPath, "Synthetic stream spec (JSON)")->required();
  synth->add_option("--out", streamPath, "Stream JSONL path; '-' writes stdout");
  synth->add_option("--ground-truth", truthPath, "Where to write the ground-truth JSONL");
  synth->add_option("--seed", seed, "Override the spec's seed");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*detect) return cmd_detect(detectCfg, detectFlags, out, err);
    if (*heartbeats) return cmd_heartbeats(hbCfg, hbFlags, out, err);
    if (*evaluateCmd) return cmd_evaluate(evalCfg, perTopicPath, out, err);
    if (*synth) return cmd_synth(specPath, streamPath, truthPath, seed, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace wdhg::cli
