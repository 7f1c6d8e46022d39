#include <gtest/gtest.h>

#include <random>

#include "gradient/prefix.hpp"

using namespace gradient;

TEST(Prefix, EncodesIdsAndNames) {
  const TransitionPrefix by_id{EmotionId{2}, EmotionId{3}, PrefixMode::by_id};
  EXPECT_EQ(encode(by_id, "This is so slow."), "2 to 3: This is so slow.");
  const TransitionPrefix by_name{EmotionId{14}, EmotionId{19}, PrefixMode::by_name};
  EXPECT_EQ(encode(by_name, "I'm scared"), "fear to nervousness: I'm scared");
}

TEST(Prefix, DecodeSplitsOnFirstSeparators) {
  const auto d = decode("2 to 3: go to bed: now");
  EXPECT_EQ(d.prefix.source.value, 2);
  EXPECT_EQ(d.prefix.target.value, 3);
  EXPECT_EQ(d.prefix.mode, PrefixMode::by_id);
  EXPECT_EQ(d.body, "go to bed: now");
}

TEST(Prefix, BlankBodyIsRejected) {
  for (const char* body : {"", "   ", "\t\n"}) {
    try {
      encode({EmotionId{0}, kNeutral, PrefixMode::by_id}, body);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::empty_text);
    }
  }
}

TEST(Prefix, MalformedLinesAreParseErrors) {
  for (const char* line : {"no separators", "2 to 3 missing colon", "28 to 3: x", "02 to 3: x", "2 to anger: x",
                           "Anger to annoyance: x", "-1 to 3: x", " to 3: x", "2 to : x"}) {
    try {
      decode(line);
      ADD_FAILURE() << line;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parse) << line;
    }
  }
}

TEST(Prefix, EmptyBodyAfterSeparatorDecodes) {
  EXPECT_EQ(decode("2 to 3: ").body, "");
}

TEST(PrefixProperty, RoundTripRandomBodies) {
  std::mt19937 rng(1234);
  const std::vector<std::string> pieces{"to", " to ", ": ", ":", "anger", "2", "é", "\t", "x", "  ", "3 to 4: ", "."};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (int iter = 0; iter < 1000; ++iter) {
    std::string body;
    const auto parts = 1 + pick(8);
    for (std::size_t k = 0; k < parts; ++k) body += pieces[pick(pieces.size())];
    if (detail::is_blank(body)) body += "w";
    const TransitionPrefix p{EmotionId{static_cast<int>(pick(28))}, EmotionId{static_cast<int>(pick(28))},
                             pick(2) == 0 ? PrefixMode::by_id : PrefixMode::by_name};
    const auto decoded = decode(encode(p, body));
    EXPECT_EQ(decoded.prefix, p) << body;
    EXPECT_EQ(decoded.body, body);
  }
}
