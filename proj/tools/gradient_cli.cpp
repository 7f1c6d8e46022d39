// gradient: command-line front end for corpus preparation, transition graph
// inspection, one-shot paraphrasing, metric scoring, evaluation and serving.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.

#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gradient/gradient.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

struct GlobalOptions {
  std::uint64_t seed = gradient::kDefaultSeed;
  bool verbose = false;
};

struct ClassifierOptions {
  std::string backend = "lexicon";
  std::string url;
  std::string fixed_map;
  std::string lexicon;
  double threshold = gradient::kDefaultThreshold;
};

struct GeneratorOptions {
  std::string backend = "echo";
  std::string url;
  std::string oracle_pairs;
  int max_length = gradient::kDefaultMaxLength;
};

void add_classifier_flags(CLI::App* cmd, ClassifierOptions& o) {
  cmd->add_option("--classifier", o.backend, "Classifier backend")
      ->check(CLI::IsMember({"remote", "lexicon", "fixed"}))
      ->capture_default_str();
  cmd->add_option("--classifier-url", o.url, "Remote classifier endpoint (default: $GRADIENT_CLASSIFIER_URL)");
  cmd->add_option("--fixed-map", o.fixed_map, "JSON seed map for the fixed classifier")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", o.lexicon, "JSON keyword table replacing the built-in lexicon")
      ->check(CLI::ExistingFile);
  cmd->add_option("--threshold", o.threshold, "Dominant-emotion threshold, strictly inside (0,1)")
      ->capture_default_str();
}

void add_generator_flags(CLI::App* cmd, GeneratorOptions& o) {
  cmd->add_option("--generator", o.backend, "Generator backend")
      ->check(CLI::IsMember({"remote", "echo", "oracle"}))
      ->capture_default_str();
  cmd->add_option("--generator-url", o.url, "Remote generator endpoint (default: $GRADIENT_GENERATOR_URL)");
  cmd->add_option("--oracle-pairs", o.oracle_pairs, "JSONL pairs whose targets the oracle generator returns")
      ->check(CLI::ExistingFile);
  cmd->add_option("--max-length", o.max_length, "Generation length limit in tokens")->capture_default_str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gradient::Error(gradient::ErrorKind::unreadable_file, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw gradient::Error(gradient::ErrorKind::parse, path + ": " + e.what());
  }
}

std::vector<gradient::PairRecord> read_records(const std::string& path, bool verbose) {
  auto result = gradient::ingest(path, gradient::Origin::generic);
  if (result.malformed > 0) {
    throw gradient::Error(gradient::ErrorKind::parse,
                          path + ": " + std::to_string(result.malformed) + " malformed record line(s)");
  }
  if (verbose) std::cerr << "read " << result.records.size() << " records from " << path << "\n";
  return std::move(result.records);
}

void write_records(const std::vector<gradient::PairRecord>& records, const std::string& out) {
  if (out.empty() || out == "-") {
    gradient::write_jsonl(std::cout, records);
  } else {
    gradient::export_jsonl(records, out);
  }
}

gradient::RemoteOptions remote_options(std::string endpoint) {
  gradient::RemoteOptions options;
  options.endpoint = std::move(endpoint);
  return options;
}

std::unique_ptr<gradient::Classifier> make_classifier(const ClassifierOptions& o) {
  gradient::ClassifierConfig config;
  config.threshold = o.threshold;
  if (o.backend == "remote") {
    config.backend = gradient::ClassifierBackend::remote;
    config.endpoint = o.url.empty() ? gradient::detail::endpoint_from_env(gradient::kClassifierUrlEnv) : o.url;
  } else if (o.backend == "fixed") {
    config.backend = gradient::ClassifierBackend::fixed;
  }
  config.validate();

  switch (config.backend) {
    case gradient::ClassifierBackend::remote:
      return std::make_unique<gradient::RemoteClassifier>(remote_options(config.endpoint));
    case gradient::ClassifierBackend::fixed:
      if (o.fixed_map.empty()) throw gradient::Error(gradient::ErrorKind::usage, "--classifier fixed needs --fixed-map");
      return std::make_unique<gradient::FixedClassifier>(gradient::FixedClassifier::from_json(read_json_file(o.fixed_map)));
    case gradient::ClassifierBackend::lexicon:
      if (o.lexicon.empty()) return std::make_unique<gradient::LexiconClassifier>();
      return std::make_unique<gradient::LexiconClassifier>(
          gradient::LexiconClassifier::from_json(read_json_file(o.lexicon)));
  }
  return nullptr;
}

std::unique_ptr<gradient::Generator> make_generator(const GeneratorOptions& o,
                                                    const std::vector<gradient::PairRecord>* fallback_pairs = nullptr) {
  if (o.backend == "remote") {
    const auto url = o.url.empty() ? gradient::detail::endpoint_from_env(gradient::kGeneratorUrlEnv) : o.url;
    if (url.empty()) {
      throw gradient::Error(gradient::ErrorKind::usage, "remote generator needs --generator-url or $GRADIENT_GENERATOR_URL");
    }
    return std::make_unique<gradient::RemoteGenerator>(remote_options(url));
  }
  if (o.backend == "oracle") {
    auto oracle = std::make_unique<gradient::TargetOracleGenerator>();
    std::vector<gradient::PairRecord> loaded;
    const std::vector<gradient::PairRecord>* pairs = fallback_pairs;
    if (!o.oracle_pairs.empty()) {
      loaded = read_records(o.oracle_pairs, false);
      pairs = &loaded;
    }
    if (pairs == nullptr) throw gradient::Error(gradient::ErrorKind::usage, "--generator oracle needs --oracle-pairs");
    for (const auto& r : *pairs) oracle->add(r.source, r.target);
    return oracle;
  }
  return std::make_unique<gradient::EchoGenerator>();
}

gradient::TransitionGraph load_graph_or_default(const std::string& path) {
  return path.empty() ? gradient::TransitionGraph::build_default() : gradient::load_graph_file(path);
}

std::optional<gradient::EmotionId> parse_emotion_arg(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    if (auto e = gradient::emotion_by_id(std::stoi(text))) return e->id;
    return std::nullopt;
  }
  if (auto e = gradient::emotion_by_name(text)) return e->id;
  return std::nullopt;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

/// Reads metric-scoring rows keyed by id, preserving file order.
std::vector<json> read_jsonl_objects(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gradient::Error(gradient::ErrorKind::unreadable_file, "cannot open " + path);
  std::vector<json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (gradient::detail::is_blank(line)) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw gradient::Error(gradient::ErrorKind::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!rows.back().is_object()) {
      throw gradient::Error(gradient::ErrorKind::parse, path + ":" + std::to_string(line_no) + ": not an object");
    }
  }
  return rows;
}

gradient::EmotionLabel label_field(const json& row, const char* key) {
  if (!row.contains(key) || row.at(key).is_null()) return gradient::EmotionLabel::none();
  const auto& v = row.at(key);
  if (v.is_object()) return gradient::label_from_json(v);
  return {gradient::detail::emotion_ref_from_json(v), std::nullopt};
}

std::string string_field(const json& row, const char* key, const std::string& where) {
  if (!row.contains(key) || !row.at(key).is_string()) {
    throw gradient::Error(gradient::ErrorKind::parse, where + ": missing string field '" + key + "'");
  }
  return row.at(key).get<std::string>();
}

void print_filter_stats(const gradient::FilterStats& stats, bool to_stdout) {
  (to_stdout ? std::cout : std::cerr) << stats.to_json().dump() << "\n";
}

bool color_enabled() { return std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO) != 0; }

void report_error(const std::string& message) {
  if (color_enabled()) {
    std::cerr << "\033[31merror:\033[0m " << message << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion-gradient paraphrasing toolkit"};
  app.set_config("--config", "", "Read flags from an INI/TOML file");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed for splits")->capture_default_str();
  app.add_flag("-v,--verbose", global.verbose, "Progress details on stderr");

  std::function<void()> action;

  // corpus -----------------------------------------------------------------
  auto* corpus = app.add_subcommand("corpus", "Prepare emotion-labeled paraphrase corpora");
  corpus->require_subcommand(1);

  std::string input;
  std::string out;
  std::string graph_path;

  std::string format;
  std::string split_tag = "unsplit";
  auto* ingest_cmd = corpus->add_subcommand("ingest", "Convert a corpus file to canonical JSONL");
  ingest_cmd->add_option("input", input, "Corpus file")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--format", format, "Input layout")
      ->required()
      ->check(CLI::IsMember({"paws", "mrpc", "qqp", "twitter-url", "generic"}));
  ingest_cmd->add_option("--split", split_tag, "Split tag for the ingested rows")
      ->check(CLI::IsMember({"train", "test", "unsplit"}))
      ->capture_default_str();
  ingest_cmd->add_option("--out", out, "Output JSONL (default stdout)");
  ingest_cmd->callback([&] {
    action = [&] {
      const auto result = gradient::ingest(input, gradient::parse_origin(format),
                                           gradient::IngestOptions{gradient::parse_split(split_tag)});
      write_records(result.records, out);
      std::cerr << json{{"rows", result.rows},
                        {"kept", result.records.size()},
                        {"excluded", result.excluded},
                        {"malformed", result.malformed}}
                       .dump()
                << "\n";
    };
  });

  ClassifierOptions label_classifier;
  auto* label_cmd = corpus->add_subcommand("label", "Label both sides of every pair with its dominant emotion");
  label_cmd->add_option("input", input, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  label_cmd->add_option("--out", out, "Output JSONL (default stdout)");
  add_classifier_flags(label_cmd, label_classifier);
  label_cmd->callback([&] {
    action = [&] {
      const auto classifier = make_classifier(label_classifier);
      auto records = gradient::label_pairs(read_records(input, global.verbose), *classifier, label_classifier.threshold);
      write_records(records, out);
    };
  });

  std::optional<double> pwi_threshold;
  bool require_majority = false;
  auto* filter_cmd = corpus->add_subcommand("filter", "Drop minority-vote, low-PWI, blank, neutral and same-emotion pairs");
  filter_cmd->add_option("input", input, "Labeled JSONL")->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--out", out, "Output JSONL (default stdout; stats then go to stderr)");
  filter_cmd->add_option("--pwi-threshold", pwi_threshold, "Keep pairs with PWI >= threshold")
      ->check(CLI::Range(0.0, 1.0));
  filter_cmd->add_flag("--require-majority", require_majority, "Keep only pairs most raters accepted");
  filter_cmd->callback([&] {
    action = [&] {
      const auto result =
          gradient::filter_pairs(read_records(input, global.verbose), {pwi_threshold, require_majority});
      const bool to_file = !out.empty() && out != "-";
      write_records(result.records, out);
      print_filter_stats(result.stats, to_file);
    };
  });

  double ratio = 0.75;
  bool presplit = false;
  bool limited = false;
  std::string train_out;
  std::string test_out;
  auto* split_cmd = corpus->add_subcommand("split", "Partition records into train and test sets");
  split_cmd->add_option("input", input, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  auto* ratio_opt = split_cmd->add_option("--ratio", ratio, "Training fraction")->capture_default_str();
  split_cmd->add_flag("--presplit", presplit, "Honor existing split tags")->excludes(ratio_opt);
  split_cmd->add_flag("--limited", limited, "Swap train and test for limited-data fine-tuning");
  split_cmd->add_option("--train-out", train_out, "Training JSONL")->required();
  split_cmd->add_option("--test-out", test_out, "Test JSONL")->required();
  split_cmd->callback([&] {
    action = [&] {
      const auto policy =
          presplit ? gradient::SplitPolicy::presplit() : gradient::SplitPolicy::random(ratio, global.seed);
      auto parts = gradient::split_pairs(read_records(input, global.verbose), policy);
      if (limited) parts = gradient::swap_for_limited_data(std::move(parts));
      gradient::export_jsonl(parts.train, train_out);
      gradient::export_jsonl(parts.test, test_out);
      std::cout << json{{"train", parts.train.size()}, {"test", parts.test.size()}, {"seed", global.seed},
                        {"limited", limited}}
                       .dump()
                << "\n";
    };
  });

  auto* restrict_cmd = corpus->add_subcommand("restrict", "Keep pairs whose emotion transition is a graph edge");
  restrict_cmd->add_option("input", input, "Labeled JSONL")->required()->check(CLI::ExistingFile);
  restrict_cmd->add_option("--out", out, "Output JSONL (default stdout)");
  restrict_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  restrict_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph_or_default(graph_path);
      const auto result = gradient::restrict_to_graph(read_records(input, global.verbose), graph);
      write_records(result.records, out);
      std::cerr << json{{"kept", result.records.size()}, {"kept_fraction", result.kept_fraction}}.dump() << "\n";
    };
  });

  auto* stats_cmd = corpus->add_subcommand("stats", "Summarize a canonical JSONL corpus");
  stats_cmd->add_option("input", input, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  stats_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph_or_default(graph_path);
      std::cout << gradient::corpus_stats(read_records(input, global.verbose), graph).dump() << "\n";
    };
  });

  // graph ------------------------------------------------------------------
  auto* graph_cmd = app.add_subcommand("graph", "Inspect the emotion transition graph");
  graph_cmd->require_subcommand(1);

  auto* export_cmd = graph_cmd->add_subcommand("export", "Print the active graph as a config document");
  export_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  export_cmd->add_option("--out", out, "Output file (default stdout)");
  export_cmd->callback([&] {
    action = [&] {
      const auto doc = load_graph_or_default(graph_path).to_json().dump(2) + "\n";
      if (out.empty() || out == "-") {
        std::cout << doc;
      } else {
        std::ofstream file(out);
        if (!(file << doc)) throw gradient::Error(gradient::ErrorKind::io, "cannot write " + out);
      }
    };
  });

  std::string validate_path;
  auto* validate_cmd = graph_cmd->add_subcommand("validate", "Check a graph config against the graph invariants");
  validate_cmd->add_option("config", validate_path, "Graph config")->required()->check(CLI::ExistingFile);
  validate_cmd->callback([&] {
    action = [&] {
      const auto graph = gradient::load_graph_file(validate_path);
      std::cout << json{{"valid", true}, {"nodes", gradient::kEmotionCount}, {"edges", graph.edge_count()}}.dump()
                << "\n";
    };
  });

  std::string suggest_emotion;
  auto* suggest_cmd = graph_cmd->add_subcommand("suggest", "List recommended target emotions");
  suggest_cmd->add_option("emotion", suggest_emotion, "Source emotion name or id")->required();
  suggest_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  suggest_cmd->callback([&] {
    action = [&] {
      const auto source = parse_emotion_arg(suggest_emotion);
      if (!source) throw gradient::Error(gradient::ErrorKind::not_found, "unknown emotion '" + suggest_emotion + "'");
      const auto graph = load_graph_or_default(graph_path);
      json list = json::array();
      for (const auto& s : graph.targets_of(*source)) {
        list.push_back({{"target", std::string(gradient::emotion_name(s.target))},
                        {"id", s.target.value},
                        {"hops", s.hops},
                        {"rationale", s.rationale}});
      }
      std::cout << json{{"source", std::string(gradient::emotion_name(*source))}, {"suggestions", list}}.dump()
                << "\n";
    };
  });

  // paraphrase -------------------------------------------------------------
  std::string text;
  std::string source_arg;
  std::string target_arg;
  ClassifierOptions para_classifier;
  GeneratorOptions para_generator;
  auto* para_cmd = app.add_subcommand("paraphrase", "Paraphrase one text toward a target emotion");
  para_cmd->add_option("--text", text, "Input text")->required();
  para_cmd->add_option("--source", source_arg, "Source emotion (default: classified)");
  para_cmd->add_option("--target", target_arg, "Target emotion name or id")->required();
  para_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  add_classifier_flags(para_cmd, para_classifier);
  add_generator_flags(para_cmd, para_generator);
  para_cmd->callback([&] {
    action = [&] {
      const auto target = parse_emotion_arg(target_arg);
      if (!target) throw gradient::Error(gradient::ErrorKind::usage, "unknown target emotion '" + target_arg + "'");
      gradient::EmotionId source;
      if (!source_arg.empty()) {
        const auto given = parse_emotion_arg(source_arg);
        if (!given) throw gradient::Error(gradient::ErrorKind::usage, "unknown source emotion '" + source_arg + "'");
        source = *given;
      } else {
        const auto classifier = make_classifier(para_classifier);
        const auto label = gradient::classify_one(*classifier, text, para_classifier.threshold);
        if (!label.emotion) {
          throw gradient::Error(gradient::ErrorKind::not_found, "no dominant emotion in the text; pass --source");
        }
        source = *label.emotion;
      }
      const auto graph = load_graph_or_default(graph_path);
      const auto line = gradient::encode({source, *target, gradient::PrefixMode::by_id}, text);
      const auto generator = make_generator(para_generator);
      const auto result = generator->generate({line, para_generator.max_length});
      std::cout << json{{"output", result.output},
                        {"prefix", line},
                        {"source", std::string(gradient::emotion_name(source))},
                        {"target", std::string(gradient::emotion_name(*target))},
                        {"graph_valid", graph.is_valid_transition(source, *target)}}
                       .dump()
                << "\n";
    };
  });

  // metrics ----------------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "Paraphrase and emotion metrics");
  metrics_cmd->require_subcommand(1);
  std::string pred_path;
  std::string ref_path;
  bool with_emotions = false;
  bool smoothing = false;
  auto* score_cmd = metrics_cmd->add_subcommand("score", "Score hypotheses against references");
  score_cmd->add_option("--pred", pred_path, "JSONL rows {id, hypothesis, reference?, pred_emotion?}")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--ref", ref_path, "JSONL rows {id, reference, target_emotion?} joined by id")
      ->check(CLI::ExistingFile);
  score_cmd->add_flag("--emotions", with_emotions, "Also report exact_match over emotion labels");
  score_cmd->add_flag("--smoothing", smoothing, "Add-one smoothing for BLEU n>=2 precisions");
  score_cmd->callback([&] {
    action = [&] {
      auto rows = read_jsonl_objects(pred_path);
      if (!ref_path.empty()) {
        std::map<std::string, json> refs;
        for (auto& r : read_jsonl_objects(ref_path)) refs[string_field(r, "id", ref_path)] = r;
        for (auto& row : rows) {
          const auto id = string_field(row, "id", pred_path);
          const auto it = refs.find(id);
          if (it == refs.end()) throw gradient::Error(gradient::ErrorKind::parse, "no reference row for id '" + id + "'");
          for (const auto& [k, v] : it->second.items()) {
            if (!row.contains(k)) row[k] = v;
          }
        }
      }
      std::vector<gradient::TokenPair> corpus_pairs;
      std::vector<gradient::EmotionLabel> predicted;
      std::vector<gradient::EmotionLabel> targets;
      for (const auto& row : rows) {
        corpus_pairs.push_back(gradient::tokenize_pair(string_field(row, "hypothesis", pred_path),
                                                       string_field(row, "reference", pred_path)));
        predicted.push_back(label_field(row, "pred_emotion"));
        targets.push_back(label_field(row, "target_emotion"));
      }
      gradient::MetricOptions options;
      options.bleu.smoothing = smoothing;
      std::vector<gradient::MetricValue> values;
      if (with_emotions) values.push_back(gradient::exact_match(predicted, targets));
      for (const auto& v : gradient::paraphrase_metrics(corpus_pairs, options)) values.push_back(v);
      std::cout << gradient::metrics_to_json(values).dump() << "\n";
    };
  });

  // evaluate ---------------------------------------------------------------
  std::string dataset_path;
  std::string model_name;
  std::string dataset_name = "custom";
  bool restricted = false;
  std::string reference = "target";
  std::string out_dir;
  std::string timestamp;
  bool append = false;
  bool no_cache = false;
  ClassifierOptions eval_classifier;
  GeneratorOptions eval_generator;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run the evaluation protocol and write report.{csv,json,txt}");
  eval_cmd->add_option("--dataset", dataset_path, "Labeled JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--model-name", model_name, "Model label for the report")->required();
  eval_cmd->add_option("--dataset-name", dataset_name, "Dataset label, e.g. mix, twit0.825, combined")
      ->capture_default_str();
  eval_cmd->add_flag("--restricted", restricted, "Evaluate only graph-valid transitions");
  eval_cmd->add_option("--reference", reference, "Paraphrase metric reference")
      ->check(CLI::IsMember({"target", "input"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", out_dir, "Output directory")->required();
  eval_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  eval_cmd->add_option("--timestamp", timestamp, "Run timestamp recorded in report.json (default: now, UTC)");
  eval_cmd->add_flag("--append", append, "Merge with runs already in DIR/report.json");
  eval_cmd->add_flag("--no-cache", no_cache, "Do not read or write the prediction cache");
  add_classifier_flags(eval_cmd, eval_classifier);
  add_generator_flags(eval_cmd, eval_generator);
  eval_cmd->callback([&] {
    action = [&] {
      const auto dataset = read_records(dataset_path, global.verbose);
      const auto classifier = make_classifier(eval_classifier);
      const auto generator = make_generator(eval_generator, &dataset);
      const auto graph = load_graph_or_default(graph_path);
      fs::create_directories(out_dir);

      gradient::EvalOptions options;
      options.model_name = model_name;
      options.dataset_name = dataset_name;
      options.restricted = restricted;
      options.reference = gradient::parse_reference_mode(reference);
      options.threshold = eval_classifier.threshold;
      options.max_length = eval_generator.max_length;
      options.timestamp = timestamp.empty() ? utc_timestamp() : timestamp;
      if (!no_cache) options.cache_path = fs::path(out_dir) / "predictions.cache.jsonl";

      const auto outcome = gradient::evaluate(dataset, *generator, *classifier, graph, options);
      if (global.verbose) {
        std::cerr << "evaluated " << outcome.run.pair_count << " pairs (" << outcome.cache_hits << " cached)\n";
      }

      std::vector<gradient::EvalRun> runs;
      const auto json_path = fs::path(out_dir) / "report.json";
      if (append && fs::exists(json_path)) {
        const auto previous = read_json_file(json_path.string());
        for (const auto& r : previous.at("runs")) {
          gradient::EvalRun run;
          run.model_name = r.at("model").get<std::string>();
          run.dataset_name = r.at("dataset").get<std::string>();
          run.restricted = r.at("restricted").get<bool>();
          run.reference = gradient::parse_reference_mode(r.at("reference").get<std::string>());
          run.pair_count = r.at("pair_count").get<std::size_t>();
          run.timestamp = r.at("timestamp").get<std::string>();
          for (const auto metric : gradient::kAllMetrics) {
            const auto key = std::string(gradient::to_string(metric));
            if (r.at("metrics").contains(key)) run.metrics.push_back({metric, r.at("metrics").at(key).get<double>()});
          }
          runs.push_back(std::move(run));
        }
      }
      runs.push_back(outcome.run);
      const auto report = gradient::compare(runs);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

      auto write = [&](const char* name, const std::string& content) {
        std::ofstream file(fs::path(out_dir) / name, std::ios::binary | std::ios::trunc);
        if (!(file << content)) throw gradient::Error(gradient::ErrorKind::io, std::string("cannot write ") + name);
      };
      write("report.csv", report.to_csv());
      write("report.json", report.to_json().dump(2) + "\n");
      write("report.txt", report.to_text());
      std::cout << gradient::metrics_to_json(outcome.run.metrics).dump() << "\n";
    };
  });

  // serve ------------------------------------------------------------------
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string cors_origin = "*";
  ClassifierOptions serve_classifier;
  GeneratorOptions serve_generator;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API for the moderation UI");
  serve_cmd->add_option("--port", port, "Listen port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--graph", graph_path, "Graph config (default: built-in graph)")->check(CLI::ExistingFile);
  serve_cmd->add_option("--cors-origin", cors_origin, "Access-Control-Allow-Origin value")->capture_default_str();
  add_classifier_flags(serve_cmd, serve_classifier);
  add_generator_flags(serve_cmd, serve_generator);
  serve_cmd->callback([&] {
    action = [&] {
      const auto classifier = make_classifier(serve_classifier);
      const auto generator = make_generator(serve_generator);
      const auto graph = load_graph_or_default(graph_path);
      gradient::Service service(*classifier, *generator, graph,
                                {serve_classifier.threshold, serve_generator.max_length, cors_origin});
      httplib::Server server;
      service.mount(server);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        throw gradient::Error(gradient::ErrorKind::io, "cannot listen on " + host + ":" + std::to_string(port));
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::cerr << "seed: " << global.seed << "\n";
  if (!action) return kExitUsage;
  try {
    action();
  } catch (const gradient::Error& e) {
    report_error(e.what());
    if (e.kind() == gradient::ErrorKind::usage) return kExitUsage;
    return gradient::is_backend_error(e.kind()) ? kExitBackend : kExitData;
  } catch (const std::exception& e) {
    report_error(e.what());
    return kExitData;
  }
  return kExitOk;
}
