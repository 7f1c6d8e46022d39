#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient/error.hpp"
#include "gradient/lexicon.hpp"
#include "gradient/taxonomy.hpp"

namespace gradient {

inline constexpr double kDefaultThreshold = 0.5;

/// Per-emotion sigmoid likelihoods indexed by EmotionId. Values are independent
/// and need not sum to one.
struct ScoreVector {
  std::array<double, kEmotionCount> scores{};

  double& operator[](EmotionId id) { return scores.at(id.index()); }
  double operator[](EmotionId id) const { return scores.at(id.index()); }

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

  /// Builds from an arbitrary-length list, enforcing the length and range contract.
  static ScoreVector from_values(std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(kEmotionCount)) {
      throw Error(ErrorKind::malformed_response, "score vector has " + std::to_string(values.size()) +
                                                     " entries, expected " + std::to_string(kEmotionCount));
    }
    ScoreVector v;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0 || values[i] > 1.0) {
        throw Error(ErrorKind::malformed_response, "score " + std::to_string(values[i]) + " outside [0,1]");
      }
      v.scores[i] = values[i];
    }
    return v;
  }
};

struct EmotionLabel {
  std::optional<EmotionId> emotion;
  std::optional<double> score;

  static EmotionLabel none() { return {}; }
  bool present() const noexcept { return emotion.has_value(); }

  friend bool operator==(const EmotionLabel&, const EmotionLabel&) = default;
};

/// Returns the emotion whose score is strictly greater than `threshold`, or
/// none. Ties on the maximum go to the lowest id.
inline EmotionLabel dominant_emotion(const ScoreVector& v, double threshold = kDefaultThreshold) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.scores.size(); ++i) {
    if (v.scores[i] > v.scores[best]) best = i;
  }
  if (!(v.scores[best] > threshold)) return EmotionLabel::none();
  return {EmotionId{static_cast<int>(best)}, v.scores[best]};
}

enum class ClassifierBackend { remote, lexicon, fixed };

struct ClassifierConfig {
  ClassifierBackend backend = ClassifierBackend::lexicon;
  std::string endpoint;
  double threshold = kDefaultThreshold;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
      throw Error(ErrorKind::usage, "threshold must lie strictly between 0 and 1");
    }
    if (backend == ClassifierBackend::remote && endpoint.empty()) {
      throw Error(ErrorKind::usage, "remote classifier requires an endpoint");
    }
  }
};

class Classifier {
 public:
  virtual ~Classifier() = default;

  /// One vector per input text, in input order.
  virtual std::vector<ScoreVector> classify_scores(std::span<const std::string> texts) const = 0;
  virtual std::string_view name() const = 0;
};

inline std::vector<EmotionLabel> classify_label(const Classifier& classifier, std::span<const std::string> texts,
                                                double threshold = kDefaultThreshold) {
  const auto vectors = classifier.classify_scores(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorKind::malformed_response, "classifier returned " + std::to_string(vectors.size()) +
                                                   " vectors for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<EmotionLabel> labels;
  labels.reserve(vectors.size());
  for (const auto& v : vectors) labels.push_back(dominant_emotion(v, threshold));
  return labels;
}

inline EmotionLabel classify_one(const Classifier& classifier, const std::string& text,
                                 double threshold = kDefaultThreshold) {
  return classify_label(classifier, std::span<const std::string>(&text, 1), threshold).front();
}

/// Stub backend that returns a seeded vector per exact text and zeros otherwise.
class FixedClassifier final : public Classifier {
 public:
  FixedClassifier() = default;
  explicit FixedClassifier(std::map<std::string, ScoreVector> seed) : seed_(std::move(seed)) {}

  void set(const std::string& text, ScoreVector v) { seed_[text] = v; }

  void set(const std::string& text, EmotionId id, double score) {
    ScoreVector v;
    v[id] = score;
    seed_[text] = v;
  }

  /// Seed map document: {"<text>": {"<emotion name>": score, ...}, ...}.
  static FixedClassifier from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::parse, "fixed classifier map must be a JSON object");
    FixedClassifier out;
    for (const auto& [text, entry] : doc.items()) {
      if (!entry.is_object()) throw Error(ErrorKind::parse, "seed entry for '" + text + "' must be an object");
      ScoreVector v;
      for (const auto& [name, score] : entry.items()) {
        const auto e = emotion_by_name(name);
        if (!e) throw Error(ErrorKind::parse, "unknown emotion '" + name + "' in fixed map");
        if (!score.is_number()) throw Error(ErrorKind::parse, "score for '" + name + "' must be a number");
        const double s = score.get<double>();
        if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::parse, "score for '" + name + "' outside [0,1]");
        v[e->id] = s;
      }
      out.seed_[text] = v;
    }
    return out;
  }

  std::vector<ScoreVector> classify_scores(std::span<const std::string> texts) const override {
    std::vector<ScoreVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      const auto it = seed_.find(t);
      out.push_back(it == seed_.end() ? ScoreVector{} : it->second);
    }
    return out;
  }

  std::string_view name() const override { return "fixed"; }

 private:
  std::map<std::string, ScoreVector> seed_;
};

/// Deterministic keyword backend. Each emotion's score is the capped sum of the
/// weights of distinct keywords found in the text.
class LexiconClassifier final : public Classifier {
 public:
  struct Entry {
    std::vector<std::string> phrase;
    EmotionId emotion;
    double weight = 0.0;
  };

  LexiconClassifier() : LexiconClassifier(builtin_entries()) {}
  explicit LexiconClassifier(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  static std::vector<Entry> builtin_entries() {
    std::vector<Entry> out;
    for (const auto& row : detail::kBuiltinLexicon) {
      out.push_back({word_tokens(row.keyword), require_emotion(row.emotion), row.weight});
    }
    return out;
  }

  /// Lexicon document: {"<keyword or phrase>": {"<emotion name>": weight, ...}, ...}.
  static LexiconClassifier from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::parse, "lexicon must be a JSON object");
    std::vector<Entry> entries;
    for (const auto& [keyword, entry] : doc.items()) {
      auto phrase = word_tokens(keyword);
      if (phrase.empty()) throw Error(ErrorKind::parse, "lexicon keyword '" + keyword + "' has no word characters");
      if (!entry.is_object()) throw Error(ErrorKind::parse, "lexicon entry for '" + keyword + "' must be an object");
      for (const auto& [name, weight] : entry.items()) {
        const auto e = emotion_by_name(name);
        if (!e) throw Error(ErrorKind::parse, "unknown emotion '" + name + "' in lexicon");
        if (!weight.is_number() || weight.get<double>() < 0.0) {
          throw Error(ErrorKind::parse, "weight for '" + keyword + "' must be a non-negative number");
        }
        entries.push_back({phrase, e->id, weight.get<double>()});
      }
    }
    return LexiconClassifier(std::move(entries));
  }

  /// Lowercased runs of letters, digits, apostrophes and non-ASCII bytes.
  static std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (unsigned char c : text) {
      const bool word = std::isalnum(c) || c == '\'' || c >= 0x80;
      if (word) {
        current.push_back(static_cast<char>(std::tolower(c)));
      } else if (!current.empty()) {
        out.push_back(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
  }

  ScoreVector score(std::string_view text) const {
    const auto words = word_tokens(text);
    ScoreVector v;
    for (const auto& entry : entries_) {
      if (contains_phrase(words, entry.phrase)) v[entry.emotion] += entry.weight;
    }
    for (auto& s : v.scores) s = std::min(1.0, s);
    return v;
  }

  std::vector<ScoreVector> classify_scores(std::span<const std::string> texts) const override {
    std::vector<ScoreVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(score(t));
    return out;
  }

  std::string_view name() const override { return "lexicon"; }

 private:
  static bool contains_phrase(const std::vector<std::string>& words, const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > words.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
      bool hit = true;
      for (std::size_t k = 0; k < phrase.size() && hit; ++k) hit = words[i + k] == phrase[k];
      if (hit) return true;
    }
    return false;
  }

  std::vector<Entry> entries_;
};

}  // namespace gradient
