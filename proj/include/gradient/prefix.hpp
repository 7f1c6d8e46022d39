#pragma once

// Task prefix for the text-to-text generator: "<source> to <target>: <body>".

#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "gradient/error.hpp"
#include "gradient/taxonomy.hpp"

namespace gradient {

enum class PrefixMode { by_id, by_name };

struct TransitionPrefix {
  EmotionId source;
  EmotionId target;
  PrefixMode mode = PrefixMode::by_id;

  friend bool operator==(const TransitionPrefix&, const TransitionPrefix&) = default;
};

struct DecodedLine {
  TransitionPrefix prefix;
  std::string body;

  friend bool operator==(const DecodedLine&, const DecodedLine&) = default;
};

namespace detail {

inline bool is_blank(std::string_view text) {
  for (unsigned char c : text) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

inline std::string prefix_token(EmotionId id, PrefixMode mode) {
  return mode == PrefixMode::by_id ? std::to_string(id.value) : std::string(emotion_name(id));
}

struct PrefixToken {
  EmotionId id;
  PrefixMode mode;
};

inline PrefixToken parse_prefix_token(std::string_view token) {
  if (token.empty()) throw Error(ErrorKind::parse, "empty emotion token");
  bool digits = true;
  for (unsigned char c : token) digits = digits && std::isdigit(c);
  if (digits) {
    if (token.size() > 2 || (token.size() > 1 && token.front() == '0')) throw Error(ErrorKind::parse, "unknown emotion id '" + std::string(token) + "'");
    int value = 0;
    for (char c : token) value = value * 10 + (c - '0');
    if (auto e = emotion_by_id(value)) return {e->id, PrefixMode::by_id};
    throw Error(ErrorKind::parse, "unknown emotion id '" + std::string(token) + "'");
  }
  // Names are matched exactly so that decode stays the inverse of encode.
  for (const auto& e : all_emotions()) {
    if (e.name == token) return {e.id, PrefixMode::by_name};
  }
  throw Error(ErrorKind::parse, "unknown emotion token '" + std::string(token) + "'");
}

}  // namespace detail

inline std::string encode(const TransitionPrefix& prefix, std::string_view text) {
  if (detail::is_blank(text)) throw Error(ErrorKind::empty_text, "cannot encode an empty body");
  std::string line = detail::prefix_token(prefix.source, prefix.mode);
  line += " to ";
  line += detail::prefix_token(prefix.target, prefix.mode);
  line += ": ";
  line += text;
  return line;
}

/// Splits on the first " to ", then on the first ": " after it. The body is
/// returned byte-for-byte.
inline DecodedLine decode(std::string_view line) {
  constexpr std::string_view kTo = " to ";
  constexpr std::string_view kColon = ": ";
  const auto to_pos = line.find(kTo);
  if (to_pos == std::string_view::npos) throw Error(ErrorKind::parse, "missing ' to ' separator");
  const auto colon_pos = line.find(kColon, to_pos + kTo.size());
  if (colon_pos == std::string_view::npos) throw Error(ErrorKind::parse, "missing ': ' separator");

  const auto source = detail::parse_prefix_token(line.substr(0, to_pos));
  const auto target =
      detail::parse_prefix_token(line.substr(to_pos + kTo.size(), colon_pos - to_pos - kTo.size()));
  if (source.mode != target.mode) throw Error(ErrorKind::parse, "prefix mixes emotion ids and names");

  return {TransitionPrefix{source.id, target.id, source.mode}, std::string(line.substr(colon_pos + kColon.size()))};
}

}  // namespace gradient
