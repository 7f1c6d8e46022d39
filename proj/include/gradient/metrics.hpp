#pragma once

// Paraphrase evaluation metrics: emotion Exact Match, corpus BLEU, Google BLEU,
// ROUGE-1/2/L and METEOR (exact + Porter-stem alignment stages).
//
// All metrics take pre-tokenized hypothesis/reference pairs and a single
// reference per hypothesis. Reductions run in input order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient/classifier.hpp"
#include "gradient/error.hpp"
#include "gradient/porter.hpp"

namespace gradient {

using TokenSeq = std::vector<std::string>;

struct TokenPair {
  TokenSeq hypothesis;
  TokenSeq reference;
};

// ---------------------------------------------------------------------------
// Tokenizer

namespace detail {

/// Length of the UTF-8 whitespace sequence starting at `i`, or 0.
inline std::size_t utf8_space_length(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char c = byte(i);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return 1;
  if (c == 0xC2 && i + 1 < s.size() && (byte(i + 1) == 0x85 || byte(i + 1) == 0xA0)) return 2;
  if (i + 2 >= s.size()) return 0;
  const unsigned char c1 = byte(i + 1);
  const unsigned char c2 = byte(i + 2);
  if (c == 0xE1 && c1 == 0x9A && c2 == 0x80) return 3;  // U+1680
  if (c == 0xE2 && c1 == 0x80 && (c2 <= 0x8A || c2 == 0xA8 || c2 == 0xA9 || c2 == 0xAF)) return 3;
  if (c == 0xE2 && c1 == 0x81 && c2 == 0x9F) return 3;  // U+205F
  if (c == 0xE3 && c1 == 0x80 && c2 == 0x80) return 3;  // U+3000
  return 0;
}

inline bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

inline void push_chunk(std::string chunk, TokenSeq& out) {
  std::size_t cut = chunk.size();
  while (cut > 0 && is_terminal_punct(chunk[cut - 1])) --cut;
  if (cut > 0) out.push_back(chunk.substr(0, cut));
  for (std::size_t i = cut; i < chunk.size(); ++i) out.emplace_back(1, chunk[i]);
}

}  // namespace detail

/// Lowercases ASCII letters, splits on Unicode whitespace and detaches trailing
/// .,!?;: characters as standalone tokens. Apostrophes stay inside words.
inline TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string chunk;
  std::size_t i = 0;
  while (i < text.size()) {
    if (const auto n = detail::utf8_space_length(text, i); n > 0) {
      if (!chunk.empty()) detail::push_chunk(std::move(chunk), out);
      chunk.clear();
      i += n;
      continue;
    }
    const char c = text[i];
    chunk.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    ++i;
  }
  if (!chunk.empty()) detail::push_chunk(std::move(chunk), out);
  return out;
}

inline TokenPair tokenize_pair(std::string_view hypothesis, std::string_view reference) {
  return {tokenize(hypothesis), tokenize(reference)};
}

// ---------------------------------------------------------------------------
// Shared n-gram machinery

enum class MetricName { exact_match, bleu, gleu, rouge1, rouge2, rougeL, meteor };

inline constexpr std::array<MetricName, 7> kAllMetrics{MetricName::exact_match, MetricName::bleu,   MetricName::gleu,
                                                       MetricName::rouge1,      MetricName::rouge2, MetricName::rougeL,
                                                       MetricName::meteor};

inline constexpr std::string_view to_string(MetricName name) {
  switch (name) {
    case MetricName::exact_match: return "exact_match";
    case MetricName::bleu: return "bleu";
    case MetricName::gleu: return "gleu";
    case MetricName::rouge1: return "rouge1";
    case MetricName::rouge2: return "rouge2";
    case MetricName::rougeL: return "rougeL";
    case MetricName::meteor: return "meteor";
  }
  return "unknown";
}

struct MetricValue {
  MetricName name;
  double value = 0.0;

  friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

namespace detail {

inline void require_corpus(std::span<const TokenPair> corpus) {
  if (corpus.empty()) throw Error(ErrorKind::empty_corpus, "metric needs at least one hypothesis/reference pair");
}

/// Both sides of a pair mapped to dense ids over their joint vocabulary.
struct IdPair {
  std::vector<std::uint32_t> hyp;
  std::vector<std::uint32_t> ref;

  explicit IdPair(const TokenPair& pair) {
    std::vector<std::string_view> vocab;
    vocab.reserve(pair.hypothesis.size() + pair.reference.size());
    for (const auto& t : pair.hypothesis) vocab.emplace_back(t);
    for (const auto& t : pair.reference) vocab.emplace_back(t);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    if (vocab.size() >= (1u << 16)) throw Error(ErrorKind::usage, "pair vocabulary exceeds 65535 distinct tokens");
    auto id_of = [&](const std::string& t) {
      return static_cast<std::uint32_t>(std::lower_bound(vocab.begin(), vocab.end(), std::string_view(t)) -
                                        vocab.begin());
    };
    for (const auto& t : pair.hypothesis) hyp.push_back(id_of(t));
    for (const auto& t : pair.reference) ref.push_back(id_of(t));
  }
};

/// Sorted packed n-grams (16 bits per token, n <= 4).
inline std::vector<std::uint64_t> packed_ngrams(const std::vector<std::uint32_t>& ids, int n) {
  std::vector<std::uint64_t> out;
  const auto len = static_cast<int>(ids.size());
  for (int i = 0; i + n <= len; ++i) {
    std::uint64_t key = 0;
    for (int k = 0; k < n; ++k) key = (key << 16) | ids[static_cast<std::size_t>(i + k)];
    out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Overlap {
  std::uint64_t matches = 0;  // clipped: sum over n-grams of min(hyp count, ref count)
  std::uint64_t hyp = 0;
  std::uint64_t ref = 0;
};

inline Overlap ngram_overlap(const IdPair& pair, int n) {
  const auto h = packed_ngrams(pair.hyp, n);
  const auto r = packed_ngrams(pair.ref, n);
  Overlap o{0, h.size(), r.size()};
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < h.size() && j < r.size()) {
    if (h[i] < r[j]) {
      ++i;
    } else if (r[j] < h[i]) {
      ++j;
    } else {
      ++o.matches;
      ++i;
      ++j;
    }
  }
  return o;
}

inline double f1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact Match

/// Fraction of positions where both labels are present and equal.
inline MetricValue exact_match(std::span<const EmotionLabel> predicted, std::span<const EmotionLabel> target) {
  if (predicted.size() != target.size()) {
    throw Error(ErrorKind::length_mismatch, std::to_string(predicted.size()) + " predictions vs " +
                                                std::to_string(target.size()) + " targets");
  }
  if (predicted.empty()) throw Error(ErrorKind::empty_corpus, "exact match over zero labels");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].present() && target[i].present() && *predicted[i].emotion == *target[i].emotion) ++hits;
  }
  return {MetricName::exact_match, static_cast<double>(hits) / static_cast<double>(predicted.size())};
}

// ---------------------------------------------------------------------------
// BLEU

struct BleuOptions {
  /// Add-one smoothing on n >= 2 precisions.
  bool smoothing = false;
};

struct BleuDetail {
  std::array<std::uint64_t, 4> matches{};
  std::array<std::uint64_t, 4> totals{};
  std::array<double, 4> precisions{};
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;
  double brevity_penalty = 0.0;
  double score = 0.0;
};

inline BleuDetail bleu_detail(std::span<const TokenPair> corpus, const BleuOptions& options = {}) {
  detail::require_corpus(corpus);
  BleuDetail d;
  for (const auto& pair : corpus) {
    const detail::IdPair ids(pair);
    d.hyp_length += ids.hyp.size();
    d.ref_length += ids.ref.size();
    for (int n = 1; n <= 4; ++n) {
      const auto o = detail::ngram_overlap(ids, n);
      d.matches[static_cast<std::size_t>(n - 1)] += o.matches;
      d.totals[static_cast<std::size_t>(n - 1)] += o.hyp;
    }
  }
  if (d.hyp_length == 0) return d;
  d.brevity_penalty = d.hyp_length > d.ref_length
                          ? 1.0
                          : std::exp(1.0 - static_cast<double>(d.ref_length) / static_cast<double>(d.hyp_length));
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t k = 0; k < 4; ++k) {
    double m = static_cast<double>(d.matches[k]);
    double t = static_cast<double>(d.totals[k]);
    if (options.smoothing && k > 0) {
      m += 1.0;
      t += 1.0;
    }
    d.precisions[k] = t > 0.0 ? m / t : 0.0;
    if (d.precisions[k] <= 0.0) {
      zero = true;
    } else {
      log_sum += 0.25 * std::log(d.precisions[k]);
    }
  }
  d.score = zero ? 0.0 : d.brevity_penalty * std::exp(log_sum);
  return d;
}

inline MetricValue bleu(std::span<const TokenPair> corpus, const BleuOptions& options = {}) {
  return {MetricName::bleu, bleu_detail(corpus, options).score};
}

// ---------------------------------------------------------------------------
// Google BLEU

/// min(precision, recall) of n-gram matches (n = 1..4) aggregated over the corpus.
inline MetricValue gleu(std::span<const TokenPair> corpus) {
  detail::require_corpus(corpus);
  std::uint64_t matches = 0;
  std::uint64_t hyp = 0;
  std::uint64_t ref = 0;
  for (const auto& pair : corpus) {
    const detail::IdPair ids(pair);
    for (int n = 1; n <= 4; ++n) {
      const auto o = detail::ngram_overlap(ids, n);
      matches += o.matches;
      hyp += o.hyp;
      ref += o.ref;
    }
  }
  const auto denominator = std::max(hyp, ref);
  return {MetricName::gleu, denominator == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(denominator)};
}

// ---------------------------------------------------------------------------
// ROUGE

inline double rouge_n_pair(const TokenPair& pair, int n) {
  if (n < 1 || n > 4) throw Error(ErrorKind::usage, "ROUGE-N supports n in 1..4");
  const detail::IdPair ids(pair);
  const auto o = detail::ngram_overlap(ids, n);
  if (o.hyp == 0 || o.ref == 0) return 0.0;
  return detail::f1(static_cast<double>(o.matches) / static_cast<double>(o.hyp),
                    static_cast<double>(o.matches) / static_cast<double>(o.ref));
}

/// Mean of per-pair F1.
inline MetricValue rouge_n(std::span<const TokenPair> corpus, int n) {
  detail::require_corpus(corpus);
  double sum = 0.0;
  for (const auto& pair : corpus) sum += rouge_n_pair(pair, n);
  return {n == 1 ? MetricName::rouge1 : MetricName::rouge2, sum / static_cast<double>(corpus.size())};
}

inline std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

inline double rouge_l_pair(const TokenPair& pair) {
  if (pair.hypothesis.empty() || pair.reference.empty()) return 0.0;
  const auto lcs = static_cast<double>(lcs_length(pair.hypothesis, pair.reference));
  return detail::f1(lcs / static_cast<double>(pair.hypothesis.size()),
                    lcs / static_cast<double>(pair.reference.size()));
}

inline MetricValue rouge_l(std::span<const TokenPair> corpus) {
  detail::require_corpus(corpus);
  double sum = 0.0;
  for (const auto& pair : corpus) sum += rouge_l_pair(pair);
  return {MetricName::rougeL, sum / static_cast<double>(corpus.size())};
}

// ---------------------------------------------------------------------------
// METEOR

struct MeteorOptions {
  bool stem_stage = true;
  /// Search budget for the chunk-minimizing alignment; past it the best
  /// alignment found so far is used.
  std::size_t max_search_nodes = 200000;
};

struct MeteorDetail {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
  /// (hypothesis index, reference index), sorted by hypothesis index.
  std::vector<std::pair<std::size_t, std::size_t>> alignment;
  bool optimal = true;
};

namespace detail {

/// Porter stems memoized per thread; the table is dropped once it grows large.
inline const std::string& cached_stem(std::string_view word) {
  thread_local std::unordered_map<std::string, std::string> cache;
  if (cache.size() > 65536) cache.clear();
  auto it = cache.find(std::string(word));
  if (it == cache.end()) it = cache.emplace(std::string(word), porter_stem(word)).first;
  return it->second;
}

/// Finds an alignment with the maximal number of exact matches, then the
/// maximal number of stem matches among the remaining words, and among those
/// the fewest chunks. Minimizing chunks equals maximizing the number of
/// diagonal neighbours (i, j), (i + 1, j + 1) inside the alignment.
class MeteorAligner {
 public:
  MeteorAligner(const TokenPair& pair, const MeteorOptions& options) : options_(options) {
    std::vector<std::string_view> vocab;
    for (const auto& t : pair.hypothesis) vocab.emplace_back(t);
    for (const auto& t : pair.reference) vocab.emplace_back(t);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    auto word_id = [&](const std::string& t) {
      return static_cast<int>(std::lower_bound(vocab.begin(), vocab.end(), std::string_view(t)) - vocab.begin());
    };
    std::vector<std::string> stems;
    for (const auto& w : vocab) stems.push_back(options.stem_stage ? cached_stem(w) : std::string(w));
    std::vector<std::string> stem_vocab = stems;
    std::sort(stem_vocab.begin(), stem_vocab.end());
    stem_vocab.erase(std::unique(stem_vocab.begin(), stem_vocab.end()), stem_vocab.end());
    stem_of_word_.resize(vocab.size());
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      stem_of_word_[w] =
          static_cast<int>(std::lower_bound(stem_vocab.begin(), stem_vocab.end(), stems[w]) - stem_vocab.begin());
    }

    for (const auto& t : pair.hypothesis) hyp_.push_back(word_id(t));
    for (const auto& t : pair.reference) ref_.push_back(word_id(t));

    const std::size_t words = vocab.size();
    std::vector<int> hyp_count(words, 0);
    std::vector<int> ref_count(words, 0);
    for (int w : hyp_) ++hyp_count[static_cast<std::size_t>(w)];
    for (int w : ref_) ++ref_count[static_cast<std::size_t>(w)];
    exact_quota_.assign(words, 0);
    hyp_left_.assign(words, 0);
    ref_left_.assign(words, 0);
    stem_quota_.assign(stem_vocab.size(), 0);
    std::vector<int> stem_hyp(stem_vocab.size(), 0);
    std::vector<int> stem_ref(stem_vocab.size(), 0);
    for (std::size_t w = 0; w < words; ++w) {
      exact_quota_[w] = std::min(hyp_count[w], ref_count[w]);
      hyp_left_[w] = hyp_count[w] - exact_quota_[w];
      ref_left_[w] = ref_count[w] - exact_quota_[w];
      stem_hyp[static_cast<std::size_t>(stem_of_word_[w])] += hyp_left_[w];
      stem_ref[static_cast<std::size_t>(stem_of_word_[w])] += ref_left_[w];
    }
    total_matches_ = 0;
    for (std::size_t w = 0; w < words; ++w) total_matches_ += exact_quota_[w];
    if (options.stem_stage) {
      for (std::size_t s = 0; s < stem_vocab.size(); ++s) {
        stem_quota_[s] = std::min(stem_hyp[s], stem_ref[s]);
        total_matches_ += stem_quota_[s];
      }
    }
    // Hypothesis occurrences of each word at positions >= i, for quota feasibility.
    remaining_of_word_.assign(hyp_.size() + 1, std::vector<int>());
    std::vector<int> counts(words, 0);
    remaining_of_word_[hyp_.size()] = counts;
    for (std::size_t i = hyp_.size(); i-- > 0;) {
      ++counts[static_cast<std::size_t>(hyp_[i])];
      remaining_of_word_[i] = counts;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> solve(bool& optimal) {
    if (total_matches_ == 0) return {};
    ref_used_.assign(ref_.size(), false);
    exact_used_.assign(exact_quota_.size(), 0);
    stem_hyp_used_.assign(exact_quota_.size(), 0);
    stem_ref_used_.assign(exact_quota_.size(), 0);
    stem_used_.assign(stem_quota_.size(), 0);
    current_.assign(hyp_.size(), -1);
    search(0, 0, 0);
    optimal = nodes_ <= options_.max_search_nodes;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < best_.size(); ++i) {
      if (best_[i] >= 0) out.emplace_back(i, static_cast<std::size_t>(best_[i]));
    }
    return out;
  }

 private:
  void search(std::size_t i, int placed, int adjacent) {
    ++nodes_;
    if (found_ && nodes_ > options_.max_search_nodes) return;
    if (found_) {
      const int remaining = total_matches_ - placed;
      const int bound = adjacent + std::min(remaining, static_cast<int>(hyp_.size() - i));
      if (bound <= best_adjacent_) return;
    }
    if (i == hyp_.size()) {
      if (placed == total_matches_ && (!found_ || adjacent > best_adjacent_)) {
        found_ = true;
        best_adjacent_ = adjacent;
        best_ = current_;
      }
      return;
    }

    const auto w = static_cast<std::size_t>(hyp_[i]);
    const auto s = static_cast<std::size_t>(stem_of_word_[w]);
    const int prev = i > 0 ? current_[i - 1] : -1;

    // Candidate reference positions, the diagonal continuation first (k = -1).
    const int n = static_cast<int>(ref_.size());
    const int diagonal = prev >= 0 && prev + 1 < n ? prev + 1 : -1;
    for (int k = -1; k < n; ++k) {
      const int j = k < 0 ? diagonal : k;
      if (j < 0 || (k >= 0 && j == diagonal)) continue;
      const auto ju = static_cast<std::size_t>(j);
      if (ref_used_[ju]) continue;
      const auto v = static_cast<std::size_t>(ref_[ju]);
      const int gain = prev >= 0 && j == prev + 1 ? 1 : 0;
      if (v == w) {
        if (exact_used_[w] >= exact_quota_[w]) continue;
        ++exact_used_[w];
        place(i, j, placed, adjacent + gain);
        --exact_used_[w];
      } else if (options_.stem_stage && stem_of_word_[v] == stem_of_word_[w]) {
        if (stem_used_[s] >= stem_quota_[s] || stem_hyp_used_[w] >= hyp_left_[w] ||
            stem_ref_used_[v] >= ref_left_[v]) {
          continue;
        }
        ++stem_used_[s];
        ++stem_hyp_used_[w];
        ++stem_ref_used_[v];
        place(i, j, placed, adjacent + gain);
        --stem_used_[s];
        --stem_hyp_used_[w];
        --stem_ref_used_[v];
      }
      if (found_ && nodes_ > options_.max_search_nodes) return;
    }

    // Leave position i unmatched only if the exact quota of its word can still be met.
    if (exact_used_[w] + remaining_of_word_[i + 1][w] >= exact_quota_[w]) {
      current_[i] = -1;
      search(i + 1, placed, adjacent);
    }
  }

  void place(std::size_t i, int j, int placed, int adjacent) {
    ref_used_[static_cast<std::size_t>(j)] = true;
    current_[i] = j;
    search(i + 1, placed + 1, adjacent);
    current_[i] = -1;
    ref_used_[static_cast<std::size_t>(j)] = false;
  }

  MeteorOptions options_;
  std::vector<int> hyp_;
  std::vector<int> ref_;
  std::vector<int> stem_of_word_;
  std::vector<int> exact_quota_;
  std::vector<int> hyp_left_;
  std::vector<int> ref_left_;
  std::vector<int> stem_quota_;
  std::vector<std::vector<int>> remaining_of_word_;
  int total_matches_ = 0;

  std::vector<bool> ref_used_;
  std::vector<int> exact_used_;
  std::vector<int> stem_hyp_used_;
  std::vector<int> stem_ref_used_;
  std::vector<int> stem_used_;
  std::vector<int> current_;
  std::vector<int> best_;
  int best_adjacent_ = -1;
  bool found_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Chunks in an alignment sorted by hypothesis index: maximal runs that are
/// contiguous in both the hypothesis and the reference.
inline std::size_t count_chunks(const std::vector<std::pair<std::size_t, std::size_t>>& alignment) {
  if (alignment.empty()) return 0;
  std::size_t chunks = 1;
  for (std::size_t k = 1; k < alignment.size(); ++k) {
    const bool contiguous = alignment[k].first == alignment[k - 1].first + 1 &&
                            alignment[k].second == alignment[k - 1].second + 1;
    if (!contiguous) ++chunks;
  }
  return chunks;
}

inline MeteorDetail meteor_pair(const TokenPair& pair, const MeteorOptions& options = {}) {
  MeteorDetail d;
  if (pair.hypothesis.empty() || pair.reference.empty()) return d;
  detail::MeteorAligner aligner(pair, options);
  d.alignment = aligner.solve(d.optimal);
  d.matches = d.alignment.size();
  if (d.matches == 0) return d;
  d.chunks = count_chunks(d.alignment);
  const auto m = static_cast<double>(d.matches);
  d.precision = m / static_cast<double>(pair.hypothesis.size());
  d.recall = m / static_cast<double>(pair.reference.size());
  d.fmean = 10.0 * d.precision * d.recall / (d.recall + 9.0 * d.precision);
  const double fragmentation = static_cast<double>(d.chunks) / m;
  d.penalty = 0.5 * fragmentation * fragmentation * fragmentation;
  d.score = d.fmean * (1.0 - d.penalty);
  return d;
}

inline MetricValue meteor(std::span<const TokenPair> corpus, const MeteorOptions& options = {}) {
  detail::require_corpus(corpus);
  double sum = 0.0;
  for (const auto& pair : corpus) sum += meteor_pair(pair, options).score;
  return {MetricName::meteor, sum / static_cast<double>(corpus.size())};
}

// ---------------------------------------------------------------------------
// Full metric table

struct MetricOptions {
  BleuOptions bleu;
  MeteorOptions meteor;
};

/// The six paraphrase metrics over the corpus.
inline std::vector<MetricValue> paraphrase_metrics(std::span<const TokenPair> corpus,
                                                   const MetricOptions& options = {}) {
  return {bleu(corpus, options.bleu), gleu(corpus),  rouge_n(corpus, 1), rouge_n(corpus, 2),
          rouge_l(corpus),            meteor(corpus, options.meteor)};
}

inline nlohmann::json metrics_to_json(std::span<const MetricValue> values) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& v : values) j[std::string(to_string(v.name))] = v.value;
  return j;
}

}  // namespace gradient
