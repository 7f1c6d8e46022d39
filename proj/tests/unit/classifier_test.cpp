#include <gtest/gtest.h>

#include <set>

#include "gradient/classifier.hpp"

using namespace gradient;

TEST(ScoreVector, FromValuesEnforcesLengthAndRange) {
  std::vector<double> ok(28, 0.1);
  EXPECT_NO_THROW(ScoreVector::from_values(ok));
  std::vector<double> short_row(27, 0.1);
  try {
    ScoreVector::from_values(short_row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::malformed_response);
  }
  ok[3] = 1.5;
  EXPECT_THROW(ScoreVector::from_values(ok), Error);
  ok[3] = -0.1;
  EXPECT_THROW(ScoreVector::from_values(ok), Error);
}

TEST(DominantEmotion, StrictlyAboveThreshold) {
  ScoreVector v;
  v[EmotionId{2}] = 0.5;
  EXPECT_FALSE(dominant_emotion(v).present());
  v[EmotionId{2}] = 0.5000001;
  const auto label = dominant_emotion(v);
  ASSERT_TRUE(label.present());
  EXPECT_EQ(label.emotion->value, 2);
  EXPECT_DOUBLE_EQ(*label.score, 0.5000001);
}

TEST(DominantEmotion, TiesGoToLowestId) {
  ScoreVector v;
  v[EmotionId{17}] = 0.9;
  v[EmotionId{3}] = 0.9;
  v[EmotionId{25}] = 0.9;
  EXPECT_EQ(dominant_emotion(v).emotion->value, 3);
}

TEST(DominantEmotion, CustomThreshold) {
  ScoreVector v;
  v[EmotionId{14}] = 0.3;
  EXPECT_FALSE(dominant_emotion(v).present());
  EXPECT_EQ(dominant_emotion(v, 0.2).emotion->value, 14);
}

TEST(ClassifierConfig, ValidatesThresholdAndEndpoint) {
  ClassifierConfig c;
  EXPECT_NO_THROW(c.validate());
  c.threshold = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c.threshold = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.threshold = 0.5;
  c.backend = ClassifierBackend::remote;
  EXPECT_THROW(c.validate(), Error);
  c.endpoint = "http://localhost:1";
  EXPECT_NO_THROW(c.validate());
}

TEST(FixedClassifier, SeededAndUnseenTexts) {
  FixedClassifier c;
  c.set("I am furious", require_emotion("anger"), 0.93);
  const std::vector<std::string> texts{"I am furious", "something else"};
  const auto labels = classify_label(c, texts);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0].emotion->value, 2);
  EXPECT_FALSE(labels[1].present());
  EXPECT_EQ(c.name(), "fixed");
}

TEST(FixedClassifier, FromJson) {
  const auto c = FixedClassifier::from_json(nlohmann::json::parse(R"({"hello": {"joy": 0.8, "love": 0.2}})"));
  const auto label = classify_one(c, "hello");
  EXPECT_EQ(label.emotion->value, 17);
  EXPECT_THROW(FixedClassifier::from_json(nlohmann::json::parse(R"({"x": {"wrath": 0.8}})")), Error);
  EXPECT_THROW(FixedClassifier::from_json(nlohmann::json::parse(R"({"x": {"joy": 1.8}})")), Error);
  EXPECT_THROW(FixedClassifier::from_json(nlohmann::json::parse("[1]")), Error);
}

TEST(LexiconClassifier, BuiltinCoversEveryEmotion) {
  std::set<int> covered;
  for (const auto& e : LexiconClassifier::builtin_entries()) covered.insert(e.emotion.value);
  EXPECT_EQ(covered.size(), 28u);
}

TEST(LexiconClassifier, WorkedExamples) {
  const LexiconClassifier c;
  EXPECT_EQ(classify_one(c, "I am FURIOUS about this!").emotion, require_emotion("anger"));
  EXPECT_EQ(classify_one(c, "This is a bit annoying.").emotion, require_emotion("annoyance"));
  EXPECT_EQ(classify_one(c, "I'm scared of the dark").emotion, require_emotion("fear"));
  EXPECT_EQ(classify_one(c, "the meeting is at noon").emotion, kNeutral);
  EXPECT_FALSE(classify_one(c, "purple elephants").present());
}

TEST(LexiconClassifier, WordBoundariesAndPhrases) {
  const LexiconClassifier c;
  // "sad" must not fire inside "sadly" nor "love" inside "glove".
  EXPECT_FALSE(classify_one(c, "a glove, sadly").present());
  EXPECT_EQ(classify_one(c, "thank you").emotion, require_emotion("gratitude"));
  EXPECT_FALSE(classify_one(c, "thank the cook, you").present());
}

TEST(LexiconClassifier, RepeatedKeywordCountsOnceAndScoresCap) {
  const LexiconClassifier c;
  EXPECT_DOUBLE_EQ(c.score("angry angry angry")[require_emotion("anger")], 0.9);
  EXPECT_DOUBLE_EQ(c.score("angry and furious")[require_emotion("anger")], 1.0);
}

TEST(LexiconClassifier, CustomTable) {
  const auto c = LexiconClassifier::from_json(nlohmann::json::parse(R"({"blue moon": {"surprise": 0.7}})"));
  EXPECT_EQ(classify_one(c, "Once in a Blue Moon").emotion, require_emotion("surprise"));
  EXPECT_FALSE(classify_one(c, "I am furious").present());
  EXPECT_THROW(LexiconClassifier::from_json(nlohmann::json::parse(R"({"!!": {"joy": 0.7}})")), Error);
  EXPECT_THROW(LexiconClassifier::from_json(nlohmann::json::parse(R"({"x": {"joy": -1}})")), Error);
}

TEST(ClassifyLabel, RejectsWrongVectorCount) {
  struct Broken final : Classifier {
    std::vector<ScoreVector> classify_scores(std::span<const std::string>) const override { return {}; }
    std::string_view name() const override { return "broken"; }
  } broken;
  const std::vector<std::string> texts{"a"};
  try {
    classify_label(broken, texts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::malformed_response);
  }
}
