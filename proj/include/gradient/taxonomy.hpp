#pragma once

// The fixed 28-emotion vocabulary and its 11 intensity clusters.
//
// Ids follow the alphabetical convention of the upstream fine-grained emotion
// dataset (27 emotions in alphabetical order, then neutral = 27), so prefixes
// written by this library can be consumed by models trained on that labeling.

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradient/error.hpp"

namespace gradient {

inline constexpr int kEmotionCount = 28;
inline constexpr int kClusterCount = 11;
inline constexpr int kNeutralCluster = 1;

/// Dense index into the taxonomy, 0..27.
struct EmotionId {
  int value = 0;

  constexpr bool valid() const noexcept { return value >= 0 && value < kEmotionCount; }
  constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value); }

  friend constexpr auto operator<=>(EmotionId, EmotionId) = default;
};

inline constexpr EmotionId kNeutral{27};

struct Emotion {
  EmotionId id;
  std::string_view name;
  int cluster = 0;
  /// 0 is closest to neutral within the cluster; higher is more intense.
  int intensity_rank = 0;

  friend constexpr bool operator==(const Emotion&, const Emotion&) = default;
};

namespace detail {

inline constexpr std::array<Emotion, kEmotionCount> kEmotions{{
    {EmotionId{0}, "admiration", 4, 0},
    {EmotionId{1}, "amusement", 2, 0},
    {EmotionId{2}, "anger", 11, 3},
    {EmotionId{3}, "annoyance", 11, 1},
    {EmotionId{4}, "approval", 6, 1},
    {EmotionId{5}, "caring", 3, 1},
    {EmotionId{6}, "confusion", 7, 1},
    {EmotionId{7}, "curiosity", 7, 0},
    {EmotionId{8}, "desire", 3, 2},
    {EmotionId{9}, "disappointment", 10, 0},
    {EmotionId{10}, "disapproval", 11, 0},
    {EmotionId{11}, "disgust", 11, 2},
    {EmotionId{12}, "embarrassment", 9, 0},
    {EmotionId{13}, "excitement", 2, 2},
    {EmotionId{14}, "fear", 8, 1},
    {EmotionId{15}, "gratitude", 5, 1},
    {EmotionId{16}, "grief", 10, 2},
    {EmotionId{17}, "joy", 2, 1},
    {EmotionId{18}, "love", 2, 3},
    {EmotionId{19}, "nervousness", 8, 0},
    {EmotionId{20}, "optimism", 3, 0},
    {EmotionId{21}, "pride", 4, 1},
    {EmotionId{22}, "realization", 6, 0},
    {EmotionId{23}, "relief", 5, 0},
    {EmotionId{24}, "remorse", 9, 1},
    {EmotionId{25}, "sadness", 10, 1},
    {EmotionId{26}, "surprise", 7, 2},
    {EmotionId{27}, "neutral", 1, 0},
}};

inline std::string normalize_token(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

inline constexpr std::span<const Emotion, kEmotionCount> all_emotions() noexcept {
  return detail::kEmotions;
}

/// Case-insensitive, whitespace-trimmed lookup.
inline std::optional<Emotion> emotion_by_name(std::string_view name) {
  const std::string key = detail::normalize_token(name);
  for (const auto& e : detail::kEmotions) {
    if (e.name == key) return e;
  }
  return std::nullopt;
}

inline std::optional<Emotion> emotion_by_id(int id) {
  if (id < 0 || id >= kEmotionCount) return std::nullopt;
  return detail::kEmotions[static_cast<std::size_t>(id)];
}

inline std::optional<Emotion> emotion_by_id(EmotionId id) { return emotion_by_id(id.value); }

/// Unchecked accessor for ids already known to be valid.
inline const Emotion& emotion(EmotionId id) { return detail::kEmotions.at(id.index()); }

inline std::string_view emotion_name(EmotionId id) { return emotion(id).name; }

inline EmotionId require_emotion(std::string_view name) {
  if (auto e = emotion_by_name(name)) return e->id;
  throw Error(ErrorKind::not_found, "unknown emotion '" + std::string(name) + "'");
}

/// Members of a cluster, most intense first.
inline std::vector<Emotion> cluster_members(int cluster) {
  if (cluster < 1 || cluster > kClusterCount) {
    throw Error(ErrorKind::not_found, "cluster " + std::to_string(cluster) + " outside 1.." +
                                          std::to_string(kClusterCount));
  }
  std::vector<Emotion> members;
  for (const auto& e : detail::kEmotions) {
    if (e.cluster == cluster) members.push_back(e);
  }
  std::sort(members.begin(), members.end(),
            [](const Emotion& a, const Emotion& b) { return a.intensity_rank > b.intensity_rank; });
  return members;
}

}  // namespace gradient
