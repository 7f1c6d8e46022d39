#pragma once

// Twenty labeled pairs shared by the evaluation tests and the acceptance run.

#include <string>
#include <utility>
#include <vector>

#include "gradient/gradient.hpp"

namespace e2e {

using namespace gradient;

struct Dataset {
  std::vector<PairRecord> records;
  FixedClassifier classifier;
};

/// Twenty labeled pairs whose targets the classifier recognizes as the target emotion.
inline Dataset twenty_pairs() {
  const std::vector<std::pair<const char*, const char*>> transitions{
      {"anger", "annoyance"}, {"fear", "nervousness"}, {"love", "joy"},       {"grief", "sadness"},
      {"surprise", "curiosity"}, {"pride", "admiration"}, {"joy", "neutral"}, {"desire", "optimism"},
      {"remorse", "embarrassment"}, {"gratitude", "relief"}, {"anger", "disgust"}, {"excitement", "amusement"},
      {"approval", "realization"}, {"confusion", "curiosity"}, {"disgust", "disapproval"}, {"caring", "optimism"},
      {"sadness", "disappointment"}, {"annoyance", "anger"}, {"joy", "anger"}, {"neutral", "joy"}};
  Dataset d;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    PairRecord r;
    r.id = "e2e-" + std::to_string(i + 1);
    r.source = "source text number " + std::to_string(i + 1) + " says something plain";
    r.target = "target text number " + std::to_string(i + 1) + " says something else";
    r.source_emotion = {require_emotion(transitions[i].first), 0.9};
    r.target_emotion = {require_emotion(transitions[i].second), 0.9};
    d.classifier.set(r.source, *r.source_emotion.emotion, 0.9);
    d.classifier.set(r.target, *r.target_emotion.emotion, 0.9);
    d.records.push_back(r);
  }
  return d;
}

inline double meteor_identity_mean(const std::vector<PairRecord>& records, bool use_target) {
  double sum = 0.0;
  for (const auto& r : records) {
    const auto m = static_cast<double>(tokenize(use_target ? r.target : r.source).size());
    sum += 1.0 - 0.5 / (m * m * m);
  }
  return sum / static_cast<double>(records.size());
}

inline TargetOracleGenerator oracle_for(const std::vector<PairRecord>& records) {
  TargetOracleGenerator g;
  for (const auto& r : records) g.add(r.source, r.target);
  return g;
}

}  // namespace e2e
