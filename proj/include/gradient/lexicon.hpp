#pragma once

// Built-in keyword table for the lexicon classifier. It exists so that the
// toolkit runs end to end without a model; it makes no accuracy claims.

#include <array>
#include <string_view>

namespace gradient::detail {

struct LexiconRow {
  std::string_view keyword;
  std::string_view emotion;
  double weight;
};

inline constexpr std::array<LexiconRow, 111> kBuiltinLexicon{{
    {"impressive", "admiration", 0.9},
    {"amazing work", "admiration", 0.9},
    {"brilliant", "admiration", 0.8},
    {"admire", "admiration", 0.9},
    {"respect", "admiration", 0.6},
    {"lol", "amusement", 0.9},
    {"haha", "amusement", 0.9},
    {"hilarious", "amusement", 0.9},
    {"funny", "amusement", 0.8},
    {"furious", "anger", 0.9},
    {"angry", "anger", 0.9},
    {"rage", "anger", 0.9},
    {"hate", "anger", 0.8},
    {"outraged", "anger", 0.9},
    {"livid", "anger", 0.9},
    {"annoying", "annoyance", 0.9},
    {"annoyed", "annoyance", 0.9},
    {"irritating", "annoyance", 0.8},
    {"bothered", "annoyance", 0.6},
    {"ugh", "annoyance", 0.7},
    {"agree", "approval", 0.8},
    {"sounds good", "approval", 0.8},
    {"approve", "approval", 0.9},
    {"makes sense", "approval", 0.7},
    {"take care", "caring", 0.9},
    {"hope you feel", "caring", 0.8},
    {"here for you", "caring", 0.9},
    {"careful", "caring", 0.6},
    {"confused", "confusion", 0.9},
    {"don't understand", "confusion", 0.9},
    {"what do you mean", "confusion", 0.8},
    {"unclear", "confusion", 0.7},
    {"wonder", "curiosity", 0.8},
    {"curious", "curiosity", 0.9},
    {"how does", "curiosity", 0.6},
    {"interested in", "curiosity", 0.7},
    {"wish", "desire", 0.8},
    {"want", "desire", 0.6},
    {"crave", "desire", 0.9},
    {"long for", "desire", 0.8},
    {"disappointed", "disappointment", 0.9},
    {"disappointing", "disappointment", 0.9},
    {"let down", "disappointment", 0.8},
    {"expected better", "disappointment", 0.8},
    {"disagree", "disapproval", 0.8},
    {"not okay", "disapproval", 0.8},
    {"shouldn't", "disapproval", 0.6},
    {"disapprove", "disapproval", 0.9},
    {"disgusting", "disgust", 0.9},
    {"gross", "disgust", 0.9},
    {"revolting", "disgust", 0.9},
    {"nasty", "disgust", 0.7},
    {"embarrassed", "embarrassment", 0.9},
    {"embarrassing", "embarrassment", 0.9},
    {"awkward", "embarrassment", 0.7},
    {"ashamed", "embarrassment", 0.6},
    {"excited", "excitement", 0.9},
    {"can't wait", "excitement", 0.9},
    {"thrilled", "excitement", 0.9},
    {"wow", "excitement", 0.6},
    {"terrified", "fear", 0.9},
    {"scared", "fear", 0.9},
    {"afraid", "fear", 0.9},
    {"horrified", "fear", 0.8},
    {"thank you", "gratitude", 0.9},
    {"thanks", "gratitude", 0.9},
    {"grateful", "gratitude", 0.9},
    {"appreciate", "gratitude", 0.8},
    {"devastated", "grief", 0.9},
    {"mourning", "grief", 0.9},
    {"passed away", "grief", 0.8},
    {"heartbroken", "grief", 0.8},
    {"happy", "joy", 0.9},
    {"glad", "joy", 0.8},
    {"delighted", "joy", 0.9},
    {"yay", "joy", 0.7},
    {"love", "love", 0.9},
    {"adore", "love", 0.9},
    {"beloved", "love", 0.7},
    {"nervous", "nervousness", 0.9},
    {"anxious", "nervousness", 0.9},
    {"worried", "nervousness", 0.8},
    {"uneasy", "nervousness", 0.7},
    {"hopefully", "optimism", 0.8},
    {"optimistic", "optimism", 0.9},
    {"will work out", "optimism", 0.8},
    {"looking up", "optimism", 0.7},
    {"proud", "pride", 0.9},
    {"accomplished", "pride", 0.7},
    {"realized", "realization", 0.9},
    {"turns out", "realization", 0.8},
    {"now i see", "realization", 0.8},
    {"relieved", "relief", 0.9},
    {"phew", "relief", 0.9},
    {"what a relief", "relief", 0.9},
    {"sorry", "remorse", 0.9},
    {"apologize", "remorse", 0.9},
    {"regret", "remorse", 0.8},
    {"my fault", "remorse", 0.8},
    {"sad", "sadness", 0.9},
    {"unhappy", "sadness", 0.8},
    {"miserable", "sadness", 0.8},
    {"crying", "sadness", 0.7},
    {"surprised", "surprise", 0.9},
    {"shocked", "surprise", 0.8},
    {"unexpected", "surprise", 0.7},
    {"omg", "surprise", 0.7},
    {"okay", "neutral", 0.6},
    {"noted", "neutral", 0.7},
    {"fine", "neutral", 0.6},
    {"the meeting", "neutral", 0.6},
}};

}  // namespace gradient::detail
