#pragma once

// Paraphrase-corpus preparation: ingest the supported corpus layouts, label
// both sides with emotions, drop unusable pairs, split and restrict.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient/classifier.hpp"
#include "gradient/error.hpp"
#include "gradient/graph.hpp"
#include "gradient/prefix.hpp"
#include "gradient/taxonomy.hpp"

namespace gradient {

enum class Origin { paws, mrpc, qqp, twitter_url, generic };
enum class Split { train, test, unsplit };

inline std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::paws: return "paws";
    case Origin::mrpc: return "mrpc";
    case Origin::qqp: return "qqp";
    case Origin::twitter_url: return "twitter-url";
    case Origin::generic: return "generic";
  }
  return "generic";
}

inline std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::unsplit: return "unsplit";
  }
  return "unsplit";
}

inline Origin parse_origin(std::string_view text) {
  for (auto o : {Origin::paws, Origin::mrpc, Origin::qqp, Origin::twitter_url, Origin::generic}) {
    if (to_string(o) == text) return o;
  }
  throw Error(ErrorKind::unknown_format, "unknown corpus format '" + std::string(text) + "'");
}

inline Split parse_split(std::string_view text) {
  for (auto s : {Split::train, Split::test, Split::unsplit}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorKind::parse, "unknown split '" + std::string(text) + "'");
}

struct RaterVotes {
  int yes = 0;
  int total = 0;

  bool majority() const noexcept { return yes * 2 > total; }
  friend bool operator==(const RaterVotes&, const RaterVotes&) = default;
};

struct PairRecord {
  std::string id;
  std::string source;
  std::string target;
  EmotionLabel source_emotion;
  EmotionLabel target_emotion;
  std::optional<double> pwi;
  std::optional<RaterVotes> rater_votes;
  Origin origin = Origin::generic;
  Split split = Split::unsplit;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

// ---------------------------------------------------------------------------
// Canonical JSON form

inline nlohmann::json label_to_json(const EmotionLabel& label) {
  nlohmann::json j;
  if (label.emotion) {
    j["emotion"] = std::string(emotion_name(*label.emotion));
    j["id"] = label.emotion->value;
  } else {
    j["emotion"] = nullptr;
    j["id"] = nullptr;
  }
  j["score"] = label.score ? nlohmann::json(*label.score) : nlohmann::json(nullptr);
  return j;
}

inline EmotionLabel label_from_json(const nlohmann::json& j) {
  if (j.is_null()) return EmotionLabel::none();
  if (!j.is_object()) throw Error(ErrorKind::parse, "emotion label must be an object or null");
  EmotionLabel label;
  if (j.contains("emotion") && !j.at("emotion").is_null()) {
    label.emotion = detail::emotion_ref_from_json(j.at("emotion"));
  } else if (j.contains("id") && !j.at("id").is_null()) {
    label.emotion = detail::emotion_ref_from_json(j.at("id"));
  }
  if (j.contains("score") && !j.at("score").is_null()) {
    if (!j.at("score").is_number()) throw Error(ErrorKind::parse, "label score must be a number");
    label.score = j.at("score").get<double>();
  }
  return label;
}

inline nlohmann::json to_json(const PairRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["source"] = r.source;
  j["target"] = r.target;
  j["source_emotion"] = label_to_json(r.source_emotion);
  j["target_emotion"] = label_to_json(r.target_emotion);
  j["pwi"] = r.pwi ? nlohmann::json(*r.pwi) : nlohmann::json(nullptr);
  if (r.rater_votes) {
    j["rater_votes"] = {{"yes", r.rater_votes->yes}, {"total", r.rater_votes->total}};
  } else {
    j["rater_votes"] = nullptr;
  }
  j["origin"] = std::string(to_string(r.origin));
  j["split"] = std::string(to_string(r.split));
  return j;
}

inline PairRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "pair record must be a JSON object");
  auto text_field = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw Error(ErrorKind::parse, std::string("pair record needs string field '") + key + "'");
    }
    return j.at(key).get<std::string>();
  };
  PairRecord r;
  r.id = text_field("id");
  r.source = text_field("source");
  r.target = text_field("target");
  if (detail::is_blank(r.source) || detail::is_blank(r.target)) {
    throw Error(ErrorKind::parse, "pair record '" + r.id + "' has an empty side");
  }
  if (j.contains("source_emotion")) r.source_emotion = label_from_json(j.at("source_emotion"));
  if (j.contains("target_emotion")) r.target_emotion = label_from_json(j.at("target_emotion"));
  if (j.contains("pwi") && !j.at("pwi").is_null()) {
    if (!j.at("pwi").is_number()) throw Error(ErrorKind::parse, "pwi must be a number");
    const double pwi = j.at("pwi").get<double>();
    if (!(pwi >= 0.0 && pwi <= 1.0)) throw Error(ErrorKind::parse, "pwi outside [0,1]");
    r.pwi = pwi;
  }
  if (j.contains("rater_votes") && !j.at("rater_votes").is_null()) {
    const auto& v = j.at("rater_votes");
    if (!v.is_object() || !v.contains("yes") || !v.contains("total")) {
      throw Error(ErrorKind::parse, "rater_votes needs 'yes' and 'total'");
    }
    r.rater_votes = RaterVotes{v.at("yes").get<int>(), v.at("total").get<int>()};
  }
  if (j.contains("origin")) r.origin = parse_origin(j.at("origin").get<std::string>());
  if (j.contains("split")) r.split = parse_split(j.at("split").get<std::string>());
  return r;
}

inline void write_jsonl(std::ostream& out, const std::vector<PairRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

/// Writes one canonical record per line; returns the record count.
inline std::size_t export_jsonl(const std::vector<PairRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_jsonl(out, records);
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
  return records.size();
}

// ---------------------------------------------------------------------------
// Ingestion

struct IngestOptions {
  Split split = Split::unsplit;
};

struct IngestResult {
  std::vector<PairRecord> records;
  std::size_t rows = 0;
  /// Well-formed rows that are not positive paraphrase pairs.
  std::size_t excluded = 0;
  std::size_t malformed = 0;
};

namespace detail {

inline std::vector<std::string> split_tsv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

/// RFC 4180 records; quoted fields may span lines.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<std::vector<std::string>> parse_tsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) rows.push_back(split_tsv_line(line));
    start = end + 1;
  }
  return rows;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::unreadable_file, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::unreadable_file, "read failed for " + path.string());
  return buffer.str();
}

inline std::optional<int> parse_int(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    if (value > 100000000) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

inline std::optional<double> parse_unit_real(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v >= 0.0 && v <= 1.0)) return std::nullopt;
  return v;
}

/// Parses "(y, t)" rater votes.
inline std::optional<RaterVotes> parse_votes(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() < 5 || text.front() != '(' || text.back() != ')') return std::nullopt;
  text = text.substr(1, text.size() - 2);
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const auto yes = parse_int(text.substr(0, comma));
  const auto total = parse_int(text.substr(comma + 1));
  if (!yes || !total || *total <= 0 || *yes > *total) return std::nullopt;
  return RaterVotes{*yes, *total};
}

inline bool looks_like_csv(const std::filesystem::path& path, std::string_view text) {
  if (path.extension() == ".csv") return true;
  if (path.extension() == ".tsv") return false;
  const auto eol = text.find('\n');
  const auto first = text.substr(0, eol);
  return first.find('\t') == std::string_view::npos && first.find(',') != std::string_view::npos;
}

}  // namespace detail

/// Reads one corpus file. Only positive paraphrase pairs are returned;
/// malformed rows are counted and skipped.
inline IngestResult ingest(const std::filesystem::path& path, Origin format, const IngestOptions& options = {}) {
  const std::string text = detail::read_file(path);
  IngestResult result;

  auto emit = [&](std::string id, std::string source, std::string target) -> PairRecord* {
    if (detail::is_blank(source) || detail::is_blank(target)) {
      ++result.malformed;
      return nullptr;
    }
    PairRecord r;
    r.id = std::move(id);
    r.source = std::move(source);
    r.target = std::move(target);
    r.origin = format;
    r.split = options.split;
    result.records.push_back(std::move(r));
    return &result.records.back();
  };

  if (format == Origin::generic) {
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      const std::string_view line(text.data() + start, end - start);
      start = end + 1;
      if (detail::is_blank(line)) continue;
      ++result.rows;
      try {
        auto r = record_from_json(nlohmann::json::parse(line));
        if (options.split != Split::unsplit) r.split = options.split;
        result.records.push_back(std::move(r));
      } catch (const nlohmann::json::exception&) {
        ++result.malformed;
      } catch (const Error&) {
        ++result.malformed;
      }
    }
    return result;
  }

  const auto rows = format == Origin::qqp && detail::looks_like_csv(path, text) ? detail::parse_csv(text)
                                                                                : detail::parse_tsv(text);
  std::size_t line_no = 0;
  for (const auto& row : rows) {
    ++line_no;
    const bool header = line_no == 1 && (format == Origin::mrpc || (!row.empty() && row.front() == "id"));
    if (header) continue;
    ++result.rows;
    switch (format) {
      case Origin::paws: {
        if (row.size() != 4) {
          ++result.malformed;
          break;
        }
        const auto label = detail::parse_int(row[3]);
        if (!label || *label > 1) {
          ++result.malformed;
        } else if (*label != 1) {
          ++result.excluded;
        } else {
          emit("paws-" + row[0], row[1], row[2]);
        }
        break;
      }
      case Origin::mrpc: {
        if (row.size() != 5) {
          ++result.malformed;
          break;
        }
        const auto quality = detail::parse_int(row[0]);
        if (!quality || *quality > 1) {
          ++result.malformed;
        } else if (*quality != 1) {
          ++result.excluded;
        } else {
          emit("mrpc-" + row[1] + "-" + row[2], row[3], row[4]);
        }
        break;
      }
      case Origin::qqp: {
        if (row.size() != 6) {
          ++result.malformed;
          break;
        }
        const auto dup = detail::parse_int(row[5]);
        if (!dup || *dup > 1) {
          ++result.malformed;
        } else if (*dup != 1) {
          ++result.excluded;
        } else {
          emit("qqp-" + row[0], row[3], row[4]);
        }
        break;
      }
      case Origin::twitter_url: {
        if (row.size() < 3) {
          ++result.malformed;
          break;
        }
        const std::string id = "twitter-url-" + std::to_string(line_no);
        if (auto votes = detail::parse_votes(row[2])) {
          if (auto* r = emit(id, row[0], row[1])) r->rater_votes = votes;
        } else if (auto pwi = detail::parse_unit_real(row[2])) {
          if (auto* r = emit(id, row[0], row[1])) r->pwi = pwi;
        } else {
          ++result.malformed;
        }
        break;
      }
      case Origin::generic:
        break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Labeling

/// Populates both emotion labels. Classification runs in chunks so that
/// backend failures can name the records involved.
inline std::vector<PairRecord> label_pairs(std::vector<PairRecord> records, const Classifier& classifier,
                                           double threshold = kDefaultThreshold, std::size_t chunk = 256) {
  chunk = std::max<std::size_t>(1, chunk);
  for (std::size_t begin = 0; begin < records.size(); begin += chunk) {
    const std::size_t end = std::min(records.size(), begin + chunk);
    std::vector<std::string> texts;
    texts.reserve(2 * (end - begin));
    for (std::size_t i = begin; i < end; ++i) {
      texts.push_back(records[i].source);
      texts.push_back(records[i].target);
    }
    std::vector<EmotionLabel> labels;
    try {
      labels = classify_label(classifier, texts, threshold);
    } catch (const Error& e) {
      throw Error(e.kind(), "labeling records " + records[begin].id + " .. " + records[end - 1].id + ": " + e.detail());
    }
    for (std::size_t i = begin; i < end; ++i) {
      records[i].source_emotion = labels[2 * (i - begin)];
      records[i].target_emotion = labels[2 * (i - begin) + 1];
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Filtering

struct FilterOptions {
  std::optional<double> pwi_threshold;
  bool require_majority = false;
};

struct FilterStats {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t dropped_rater_minority = 0;
  std::size_t dropped_pwi = 0;
  std::size_t dropped_blank_emotion = 0;
  std::size_t dropped_neutral_neutral = 0;
  std::size_t dropped_matching_emotion = 0;

  std::size_t dropped_total() const noexcept {
    return dropped_rater_minority + dropped_pwi + dropped_blank_emotion + dropped_neutral_neutral +
           dropped_matching_emotion;
  }
  bool conserved() const noexcept { return input_count == kept_count + dropped_total(); }

  nlohmann::json to_json() const {
    return {{"input_count", input_count},
            {"kept_count", kept_count},
            {"dropped_rater_minority", dropped_rater_minority},
            {"dropped_pwi", dropped_pwi},
            {"dropped_blank_emotion", dropped_blank_emotion},
            {"dropped_neutral_neutral", dropped_neutral_neutral},
            {"dropped_matching_emotion", dropped_matching_emotion}};
  }

  friend bool operator==(const FilterStats&, const FilterStats&) = default;
};

enum class DropReason { none, rater_minority, pwi, blank_emotion, neutral_neutral, matching_emotion };

/// First rule that rejects the record, in the fixed order majority, PWI,
/// blank emotion, neutral-neutral, matching emotion.
inline DropReason drop_reason(const PairRecord& r, const FilterOptions& options) {
  if (options.require_majority && r.rater_votes && !r.rater_votes->majority()) return DropReason::rater_minority;
  if (options.pwi_threshold && r.pwi && *r.pwi < *options.pwi_threshold) return DropReason::pwi;
  if (!r.source_emotion.present() || !r.target_emotion.present()) return DropReason::blank_emotion;
  if (*r.source_emotion.emotion == kNeutral && *r.target_emotion.emotion == kNeutral) {
    return DropReason::neutral_neutral;
  }
  if (*r.source_emotion.emotion == *r.target_emotion.emotion) return DropReason::matching_emotion;
  return DropReason::none;
}

struct FilterResult {
  std::vector<PairRecord> records;
  FilterStats stats;
};

inline FilterResult filter_pairs(const std::vector<PairRecord>& records, const FilterOptions& options = {}) {
  FilterResult out;
  out.stats.input_count = records.size();
  for (const auto& r : records) {
    switch (drop_reason(r, options)) {
      case DropReason::none:
        out.records.push_back(r);
        ++out.stats.kept_count;
        break;
      case DropReason::rater_minority: ++out.stats.dropped_rater_minority; break;
      case DropReason::pwi: ++out.stats.dropped_pwi; break;
      case DropReason::blank_emotion: ++out.stats.dropped_blank_emotion; break;
      case DropReason::neutral_neutral: ++out.stats.dropped_neutral_neutral; break;
      case DropReason::matching_emotion: ++out.stats.dropped_matching_emotion; break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting

inline constexpr std::uint64_t kDefaultSeed = 42;

struct SplitPolicy {
  enum class Kind { presplit, random };
  Kind kind = Kind::random;
  double train_ratio = 0.75;
  std::uint64_t seed = kDefaultSeed;

  static SplitPolicy presplit() { return {Kind::presplit, 0.0, kDefaultSeed}; }
  static SplitPolicy random(double ratio, std::uint64_t seed = kDefaultSeed) { return {Kind::random, ratio, seed}; }
};

struct SplitResult {
  std::vector<PairRecord> train;
  std::vector<PairRecord> test;
};

namespace detail {

/// Uniform integer in [0, bound) by rejection, independent of the standard
/// library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace detail

/// Random splits keep each side in original input order. Under `presplit`,
/// records tagged unsplit join the training side.
inline SplitResult split_pairs(const std::vector<PairRecord>& records, const SplitPolicy& policy) {
  SplitResult out;
  if (policy.kind == SplitPolicy::Kind::presplit) {
    for (const auto& r : records) (r.split == Split::test ? out.test : out.train).push_back(r);
    return out;
  }
  if (!(policy.train_ratio > 0.0 && policy.train_ratio < 1.0)) {
    throw Error(ErrorKind::usage, "split ratio must lie strictly between 0 and 1");
  }
  const std::size_t n = records.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(policy.seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(detail::uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::floor(policy.train_ratio * static_cast<double>(n) + 1e-9));
  std::vector<bool> in_train(n, false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;
  for (std::size_t i = 0; i < n; ++i) {
    PairRecord r = records[i];
    r.split = in_train[i] ? Split::train : Split::test;
    (in_train[i] ? out.train : out.test).push_back(std::move(r));
  }
  return out;
}

/// Limited-data configuration: the small test side becomes the training side.
inline SplitResult swap_for_limited_data(SplitResult split) {
  std::swap(split.train, split.test);
  for (auto& r : split.train) r.split = Split::train;
  for (auto& r : split.test) r.split = Split::test;
  return split;
}

// ---------------------------------------------------------------------------
// Graph restriction

struct RestrictResult {
  std::vector<PairRecord> records;
  /// kept / input; 1.0 for empty input.
  double kept_fraction = 1.0;
};

inline bool follows_graph(const PairRecord& r, const TransitionGraph& g) {
  return r.source_emotion.present() && r.target_emotion.present() &&
         g.is_valid_transition(*r.source_emotion.emotion, *r.target_emotion.emotion);
}

inline RestrictResult restrict_to_graph(const std::vector<PairRecord>& records, const TransitionGraph& g) {
  RestrictResult out;
  for (const auto& r : records) {
    if (follows_graph(r, g)) out.records.push_back(r);
  }
  if (!records.empty()) {
    out.kept_fraction = static_cast<double>(out.records.size()) / static_cast<double>(records.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary

inline nlohmann::json corpus_stats(const std::vector<PairRecord>& records, const TransitionGraph& g) {
  std::map<std::string, std::size_t> by_origin;
  std::map<std::string, std::size_t> by_split;
  std::map<std::string, std::size_t> source_emotions;
  std::map<std::string, std::size_t> target_emotions;
  std::size_t labeled = 0;
  std::size_t graph_valid = 0;
  for (const auto& r : records) {
    ++by_origin[std::string(to_string(r.origin))];
    ++by_split[std::string(to_string(r.split))];
    ++source_emotions[r.source_emotion.present() ? std::string(emotion_name(*r.source_emotion.emotion)) : "none"];
    ++target_emotions[r.target_emotion.present() ? std::string(emotion_name(*r.target_emotion.emotion)) : "none"];
    if (r.source_emotion.present() && r.target_emotion.present()) ++labeled;
    if (follows_graph(r, g)) ++graph_valid;
  }
  return {{"records", records.size()},
          {"by_origin", by_origin},
          {"by_split", by_split},
          {"fully_labeled", labeled},
          {"graph_valid", graph_valid},
          {"source_emotions", source_emotions},
          {"target_emotions", target_emotions}};
}

}  // namespace gradient
