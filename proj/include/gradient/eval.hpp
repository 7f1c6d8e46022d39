#pragma once

// Evaluation protocol: prefix each source with its (source id, target id)
// transition, generate, re-classify the prediction, then score Exact Match
// against the target emotions and the paraphrase metrics against a reference.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient/classifier.hpp"
#include "gradient/corpus.hpp"
#include "gradient/error.hpp"
#include "gradient/generator.hpp"
#include "gradient/graph.hpp"
#include "gradient/metrics.hpp"
#include "gradient/prefix.hpp"

namespace gradient {

enum class ReferenceMode { target, input };

inline std::string_view to_string(ReferenceMode mode) { return mode == ReferenceMode::target ? "target" : "input"; }

inline ReferenceMode parse_reference_mode(std::string_view text) {
  if (text == "target") return ReferenceMode::target;
  if (text == "input") return ReferenceMode::input;
  throw Error(ErrorKind::usage, "reference mode must be 'target' or 'input'");
}

struct EvalOptions {
  std::string model_name = "model";
  std::string dataset_name = "custom";
  bool restricted = false;
  ReferenceMode reference = ReferenceMode::target;
  double threshold = kDefaultThreshold;
  int max_length = kDefaultMaxLength;
  std::size_t batch_size = 64;
  MetricOptions metrics;
  /// JSONL file of finished predictions; existing entries are reused.
  std::optional<std::filesystem::path> cache_path;
  std::string timestamp;
};

struct EvalRun {
  std::string model_name;
  std::string dataset_name;
  bool restricted = false;
  ReferenceMode reference = ReferenceMode::target;
  std::vector<MetricValue> metrics;
  std::size_t pair_count = 0;
  std::string timestamp;

  std::optional<double> metric(MetricName name) const {
    for (const auto& m : metrics) {
      if (m.name == name) return m.value;
    }
    return std::nullopt;
  }
};

struct PairPrediction {
  std::string id;
  std::string input_line;
  std::string prediction;
  EmotionLabel prediction_emotion;
};

struct EvalOutcome {
  EvalRun run;
  std::vector<PairPrediction> predictions;
  std::size_t cache_hits = 0;
};

namespace detail {

struct CacheKey {
  std::string model;
  std::string id;
  std::string reference;
  friend auto operator<=>(const CacheKey&, const CacheKey&) = default;
};

inline std::map<CacheKey, PairPrediction> load_prediction_cache(const std::filesystem::path& path) {
  std::map<CacheKey, PairPrediction> cache;
  std::ifstream in(path);
  if (!in) return cache;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PairPrediction p{j.at("id").get<std::string>(), j.at("input").get<std::string>(),
                       j.at("prediction").get<std::string>(), label_from_json(j.at("prediction_emotion"))};
      cache[{j.at("model").get<std::string>(), p.id, j.at("reference").get<std::string>()}] = std::move(p);
    } catch (const std::exception&) {
      // A torn final line from an interrupted run is expected; skip it.
    }
  }
  return cache;
}

inline nlohmann::json prediction_to_json(const PairPrediction& p) {
  return {{"id", p.id},
          {"input", p.input_line},
          {"prediction", p.prediction},
          {"prediction_emotion", label_to_json(p.prediction_emotion)}};
}

}  // namespace detail

inline EvalOutcome evaluate(const std::vector<PairRecord>& dataset, const Generator& generator,
                            const Classifier& classifier, const TransitionGraph& graph, const EvalOptions& options) {
  for (const auto& r : dataset) {
    if (!r.source_emotion.present() || !r.target_emotion.present()) {
      throw Error(ErrorKind::invariant_violation, "pair '" + r.id + "' lacks an emotion label");
    }
  }
  std::vector<PairRecord> pairs = dataset;
  if (options.restricted) {
    pairs = restrict_to_graph(dataset, graph).records;
    if (pairs.empty()) throw Error(ErrorKind::empty_after_restriction, "no pair follows the transition graph");
  }
  if (pairs.empty()) throw Error(ErrorKind::empty_corpus, "evaluation dataset is empty");

  const std::string reference_name(to_string(options.reference));
  std::map<detail::CacheKey, PairPrediction> cache;
  std::ofstream cache_out;
  if (options.cache_path) {
    cache = detail::load_prediction_cache(*options.cache_path);
    bool torn = false;
    if (std::ifstream existing(*options.cache_path, std::ios::binary | std::ios::ate); existing && existing.tellg() > 0) {
      existing.seekg(-1, std::ios::end);
      torn = existing.get() != '\n';
    }
    cache_out.open(*options.cache_path, std::ios::app);
    if (!cache_out) throw Error(ErrorKind::io, "cannot append to " + options.cache_path->string());
    if (torn) cache_out << '\n';
  }

  EvalOutcome outcome;
  outcome.predictions.resize(pairs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& r = pairs[i];
    const auto line = encode({*r.source_emotion.emotion, *r.target_emotion.emotion, PrefixMode::by_id}, r.source);
    const auto hit = cache.find({options.model_name, r.id, reference_name});
    if (hit != cache.end() && hit->second.input_line == line) {
      outcome.predictions[i] = hit->second;
      ++outcome.cache_hits;
    } else {
      outcome.predictions[i] = PairPrediction{r.id, line, {}, {}};
      pending.push_back(i);
    }
  }

  const std::size_t step = std::max<std::size_t>(1, options.batch_size);
  std::size_t completed = outcome.cache_hits;
  for (std::size_t begin = 0; begin < pending.size(); begin += step) {
    const std::size_t end = std::min(pending.size(), begin + step);
    std::vector<GenerationRequest> requests;
    for (std::size_t k = begin; k < end; ++k) {
      requests.push_back({outcome.predictions[pending[k]].input_line, options.max_length});
    }
    try {
      const auto results = generator.generate_batch(requests);
      std::vector<std::string> outputs;
      for (const auto& res : results) outputs.push_back(res.output);
      const auto labels = classify_label(classifier, outputs, options.threshold);
      for (std::size_t k = begin; k < end; ++k) {
        auto& p = outcome.predictions[pending[k]];
        p.prediction = outputs[k - begin];
        p.prediction_emotion = labels[k - begin];
        if (cache_out.is_open()) {
          auto j = detail::prediction_to_json(p);
          j["model"] = options.model_name;
          j["reference"] = reference_name;
          cache_out << j.dump() << '\n';
        }
      }
      if (cache_out.is_open()) cache_out.flush();
      completed += end - begin;
    } catch (const Error& e) {
      throw Error(e.kind(), "evaluation aborted after " + std::to_string(completed) + " of " +
                                std::to_string(pairs.size()) + " pairs: " + e.detail());
    }
  }

  std::vector<EmotionLabel> predicted;
  std::vector<EmotionLabel> targets;
  std::vector<TokenPair> corpus;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    predicted.push_back(outcome.predictions[i].prediction_emotion);
    targets.push_back(pairs[i].target_emotion);
    const auto& reference = options.reference == ReferenceMode::target ? pairs[i].target : pairs[i].source;
    corpus.push_back(tokenize_pair(outcome.predictions[i].prediction, reference));
  }

  auto& run = outcome.run;
  run.model_name = options.model_name;
  run.dataset_name = options.dataset_name;
  run.restricted = options.restricted;
  run.reference = options.reference;
  run.pair_count = pairs.size();
  run.timestamp = options.timestamp;
  run.metrics.push_back(exact_match(predicted, targets));
  for (const auto& m : paraphrase_metrics(corpus, options.metrics)) run.metrics.push_back(m);
  return outcome;
}

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  std::vector<EvalRun> runs;
  std::vector<std::string> models;
  /// Column labels: dataset name, suffixed "/restricted" for restricted runs.
  std::vector<std::string> datasets;
  std::vector<std::string> warnings;

  static std::string column_label(const EvalRun& run) {
    return run.restricted ? run.dataset_name + "/restricted" : run.dataset_name;
  }

  const EvalRun* find(const std::string& model, const std::string& column) const {
    for (const auto& r : runs) {
      if (r.model_name == model && column_label(r) == column) return &r;
    }
    return nullptr;
  }

  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const auto& r : runs) n += r.metrics.size();
    return n;
  }

  std::string to_csv() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Groups runs into a metric x model x dataset grid. A repeated
/// (model, dataset, restricted) run replaces the earlier one.
inline EvalReport compare(const std::vector<EvalRun>& runs) {
  EvalReport report;
  for (const auto& run : runs) {
    auto same = [&](const EvalRun& r) {
      return r.model_name == run.model_name && r.dataset_name == run.dataset_name && r.restricted == run.restricted;
    };
    if (auto it = std::find_if(report.runs.begin(), report.runs.end(), same); it != report.runs.end()) {
      report.warnings.push_back("duplicate run for model '" + run.model_name + "' on '" +
                                EvalReport::column_label(run) + "'; keeping the latest");
      *it = run;
    } else {
      report.runs.push_back(run);
    }
    if (std::find(report.models.begin(), report.models.end(), run.model_name) == report.models.end()) {
      report.models.push_back(run.model_name);
    }
    const auto column = EvalReport::column_label(run);
    if (std::find(report.datasets.begin(), report.datasets.end(), column) == report.datasets.end()) {
      report.datasets.push_back(column);
    }
  }
  return report;
}

namespace detail {

inline std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "metric,model,dataset,restricted,reference,pair_count,value\n";
  for (const auto metric : kAllMetrics) {
    for (const auto& model : models) {
      for (const auto& column : datasets) {
        const auto* run = find(model, column);
        if (run == nullptr) continue;
        const auto value = run->metric(metric);
        if (!value) continue;
        out << to_string(metric) << ',' << detail::csv_field(model) << ',' << detail::csv_field(run->dataset_name)
            << ',' << (run->restricted ? "true" : "false") << ',' << to_string(run->reference) << ','
            << run->pair_count << ',' << detail::format_value(*value) << '\n';
      }
    }
  }
  return out.str();
}

inline nlohmann::json EvalReport::to_json() const {
  nlohmann::json doc;
  doc["models"] = models;
  doc["datasets"] = datasets;
  doc["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    doc["runs"].push_back({{"model", r.model_name},
                           {"dataset", r.dataset_name},
                           {"restricted", r.restricted},
                           {"reference", std::string(to_string(r.reference))},
                           {"pair_count", r.pair_count},
                           {"timestamp", r.timestamp},
                           {"metrics", metrics_to_json(r.metrics)}});
  }
  doc["metadata"] = {{"rouge_aggregation", "mean of per-pair F1"},
                     {"bleu", "corpus-level, n=1..4, uniform weights"},
                     {"meteor_stages", {"exact", "porter_stem"}},
                     {"tokenizer", "lowercase, whitespace split, trailing .,!?;: detached"}};
  doc["warnings"] = warnings;
  return doc;
}

inline std::string EvalReport::to_text() const {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"metric", "model"};
  header.insert(header.end(), datasets.begin(), datasets.end());
  rows.push_back(header);
  for (const auto metric : kAllMetrics) {
    for (const auto& model : models) {
      std::vector<std::string> row{std::string(to_string(metric)), model};
      bool any = false;
      for (const auto& column : datasets) {
        const auto* run = find(model, column);
        const auto value = run ? run->metric(metric) : std::nullopt;
        row.push_back(value ? detail::format_value(*value) : "-");
        any = any || value.has_value();
      }
      if (any) rows.push_back(std::move(row));
    }
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace gradient
