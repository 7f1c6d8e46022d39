#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gradient/metrics.hpp"
#include "oracles/metric_oracle.hpp"

using namespace gradient;

namespace {

TokenPair pair(const char* hyp, const char* ref) { return tokenize_pair(hyp, ref); }

oracle::Pair to_oracle(const TokenPair& p) { return {p.hypothesis, p.reference}; }

std::vector<oracle::Pair> to_oracle(const std::vector<TokenPair>& corpus) {
  std::vector<oracle::Pair> out;
  for (const auto& p : corpus) out.push_back(to_oracle(p));
  return out;
}

std::string stem(const std::string& w) { return porter_stem(w); }

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("The cat sat."), (TokenSeq{"the", "cat", "sat", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \t\n").empty());
  EXPECT_EQ(tokenize("Don't stop"), (TokenSeq{"don't", "stop"}));
  EXPECT_EQ(tokenize("Wait...what?!"), (TokenSeq{"wait...what", "?", "!"}));
  EXPECT_EQ(tokenize("a\xC2\xA0" "b\xE3\x80\x80" "C"), (TokenSeq{"a", "b", "c"}));
  EXPECT_EQ(tokenize("!!"), (TokenSeq{"!", "!"}));
  EXPECT_EQ(tokenize("\xC3\x89t\xC3\xA9"), (TokenSeq{"\xC3\x89t\xC3\xA9"}));
}

TEST(ExactMatch, Examples) {
  auto L = [](int id) { return EmotionLabel{EmotionId{id}, 0.9}; };
  const std::vector<EmotionLabel> pred{L(2), L(5), L(2)};
  const std::vector<EmotionLabel> target{L(2), L(5), L(3)};
  EXPECT_DOUBLE_EQ(exact_match(pred, target).value, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(exact_match(pred, pred).value, 1.0);
  const std::vector<EmotionLabel> none{EmotionLabel::none()};
  EXPECT_DOUBLE_EQ(exact_match(none, none).value, 0.0);
  try {
    exact_match(pred, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::length_mismatch);
  }
  EXPECT_THROW(exact_match({}, {}), Error);
}

TEST(Bleu, ClippedUnigramPrecision) {
  const std::vector<TokenPair> corpus{pair("the the the the", "the cat")};
  const auto d = bleu_detail(corpus);
  EXPECT_EQ(d.matches[0], 1u);
  EXPECT_EQ(d.totals[0], 4u);
  EXPECT_DOUBLE_EQ(d.precisions[0], 0.25);
  EXPECT_DOUBLE_EQ(d.precisions[0], 1.0 / 4.0);
}

TEST(Bleu, BrevityPenalty) {
  const std::vector<TokenPair> corpus{pair("the cat", "the cat sat")};
  EXPECT_NEAR(bleu_detail(corpus).brevity_penalty, std::exp(1.0 - 3.0 / 2.0), 1e-15);
  EXPECT_NEAR(bleu_detail(corpus).brevity_penalty, 0.6065, 1e-4);
}

TEST(Bleu, IdentityAndZeroPrecision) {
  const std::vector<TokenPair> same{pair("the cat sat on the mat", "the cat sat on the mat")};
  EXPECT_DOUBLE_EQ(bleu(same).value, 1.0);
  const std::vector<TokenPair> short_pair{pair("the cat", "the cat")};
  EXPECT_DOUBLE_EQ(bleu(short_pair).value, 0.0);
  EXPECT_GT(bleu(short_pair, {true}).value, 0.0);
  EXPECT_THROW(bleu({}), Error);
}

TEST(Bleu, CorpusLevelAggregation) {
  const std::vector<TokenPair> corpus{pair("the cat sat on the mat", "the cat sat on a mat"),
                                      pair("a dog ran off", "the dog ran off")};
  EXPECT_NEAR(bleu(corpus).value, oracle::bleu(to_oracle(corpus)), 1e-12);
  EXPECT_NEAR(bleu(corpus, {true}).value, oracle::bleu(to_oracle(corpus), true), 1e-12);
}

TEST(Gleu, Examples) {
  const std::vector<TokenPair> corpus{pair("the cat", "the cat sat")};
  EXPECT_DOUBLE_EQ(gleu(corpus).value, 0.5);
  EXPECT_DOUBLE_EQ(gleu({{pair("a b c", "a b c")}}).value, 1.0);
  EXPECT_DOUBLE_EQ(gleu({{pair("a b", "c d")}}).value, 0.0);
}

TEST(Rouge, Examples) {
  EXPECT_NEAR(rouge_n({{pair("the cat", "the cat sat")}}, 1).value, 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(rouge_n({{pair("a b c", "a b c")}}, 2).value, 1.0);
  EXPECT_DOUBLE_EQ(rouge_n({{pair("a", "a b")}}, 2).value, 0.0);
  EXPECT_NEAR(rouge_l({{pair("the cat on mat", "the cat sat on the mat")}}).value, 0.8, 1e-15);
  EXPECT_EQ(lcs_length({"a", "b"}, {"b", "a"}), 1u);
  EXPECT_DOUBLE_EQ(rouge_l({{pair("x y z", "x y z")}}).value, 1.0);
}

TEST(Meteor, IdentityValue) {
  for (int m = 1; m <= 10; ++m) {
    TokenSeq seq;
    for (int i = 0; i < m; ++i) seq.push_back("w" + std::to_string(i));
    const auto d = meteor_pair({seq, seq});
    EXPECT_EQ(d.chunks, 1u);
    EXPECT_NEAR(d.score, 1.0 - 0.5 / (m * m * m), 1e-12) << m;
  }
  EXPECT_NEAR(meteor_pair(pair("the cat sat", "the cat sat")).score, 0.98148, 1e-5);
}

TEST(Meteor, StemStageAndNoMatch) {
  const auto d = meteor_pair(pair("cats", "cat"));
  EXPECT_EQ(d.matches, 1u);
  EXPECT_NEAR(d.score, 0.5, 1e-12);
  MeteorOptions exact_only;
  exact_only.stem_stage = false;
  EXPECT_DOUBLE_EQ(meteor_pair(pair("cats", "cat"), exact_only).score, 0.0);
  EXPECT_DOUBLE_EQ(meteor_pair(pair("a b", "c d")).score, 0.0);
  EXPECT_DOUBLE_EQ(meteor_pair(pair("", "c d")).score, 0.0);
}

TEST(Meteor, ChunkMinimizingAlignment) {
  // Greedy left-to-right would link the first "the" and split the run.
  const auto d = meteor_pair(pair("the cat the dog", "the dog"));
  EXPECT_EQ(d.matches, 2u);
  EXPECT_EQ(d.chunks, 1u);
  EXPECT_TRUE(d.optimal);
  EXPECT_EQ(count_chunks({{0, 0}, {1, 1}, {3, 2}}), 2u);
}

TEST(Meteor, SearchCapReportsNonOptimal) {
  TokenSeq many(40, "x");
  TokenSeq other;
  for (int i = 0; i < 40; ++i) other.push_back(i % 2 ? "x" : "y");
  MeteorOptions tiny;
  tiny.max_search_nodes = 10;
  const auto d = meteor_pair({many, other}, tiny);
  EXPECT_EQ(d.matches, 20u);
  EXPECT_GE(d.score, 0.0);
  EXPECT_LE(d.score, 1.0);
}

TEST(Metrics, EmptyCorpusErrors) {
  for (auto fn : {+[] { gleu({}); }, +[] { rouge_n({}, 1); }, +[] { rouge_l({}); }, +[] { meteor({}); }}) {
    try {
      fn();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::empty_corpus);
    }
  }
}

TEST(Metrics, TableNamesAndJson) {
  const std::vector<TokenPair> corpus{pair("the cat sat on the mat", "the cat sat on the mat")};
  const auto values = paraphrase_metrics(corpus);
  ASSERT_EQ(values.size(), 6u);
  const auto j = metrics_to_json(values);
  for (const char* key : {"bleu", "gleu", "rouge1", "rouge2", "rougeL", "meteor"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_DOUBLE_EQ(j.at("rougeL").get<double>(), 1.0);
}

// Randomized corpora over a small vocabulary: oracle agreement, range, and
// invariance under reordering.
TEST(MetricsProperty, RandomCorporaMatchOracleAndIgnoreOrder) {
  std::mt19937 rng(99);
  const std::vector<std::string> vocab{"the", "cat", "cats", "sat", "mat", "on"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto random_seq = [&] {
    TokenSeq s;
    const auto len = pick(9);
    for (std::size_t i = 0; i < len; ++i) s.push_back(vocab[pick(vocab.size())]);
    return s;
  };
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<TokenPair> corpus;
    const auto n = 1 + pick(5);
    for (std::size_t i = 0; i < n; ++i) corpus.push_back({random_seq(), random_seq()});
    const auto o = to_oracle(corpus);
    const auto values = paraphrase_metrics(corpus);
    EXPECT_NEAR(values[0].value, oracle::bleu(o), 1e-12);
    EXPECT_NEAR(values[1].value, oracle::gleu(o), 1e-12);
    EXPECT_NEAR(values[2].value, oracle::mean(o, [](const auto& p) { return oracle::rouge_n(p, 1); }), 1e-12);
    EXPECT_NEAR(values[3].value, oracle::mean(o, [](const auto& p) { return oracle::rouge_n(p, 2); }), 1e-12);
    EXPECT_NEAR(values[4].value, oracle::mean(o, [](const auto& p) { return oracle::rouge_l(p); }), 1e-12);
    EXPECT_NEAR(values[5].value, oracle::mean(o, [](const auto& p) { return oracle::meteor(p, stem).score; }), 1e-9);
    for (const auto& v : values) {
      EXPECT_GE(v.value, 0.0);
      EXPECT_LE(v.value, 1.0);
    }
    auto shuffled = corpus;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = paraphrase_metrics(shuffled);
    for (std::size_t k = 0; k < values.size(); ++k) EXPECT_NEAR(again[k].value, values[k].value, 1e-12);
    for (const auto& p : corpus) EXPECT_EQ(lcs_length(p.hypothesis, p.reference), lcs_length(p.reference, p.hypothesis));
  }
}

TEST(MetricsProperty, IdentityPairsScoreOne) {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    TokenSeq s;
    const int len = 4 + static_cast<int>(rng() % 8);
    for (int i = 0; i < len; ++i) s.push_back("t" + std::to_string(rng() % 5));
    const std::vector<TokenPair> corpus{{s, s}};
    const auto values = paraphrase_metrics(corpus);
    for (std::size_t k = 0; k + 1 < values.size(); ++k) EXPECT_DOUBLE_EQ(values[k].value, 1.0) << k;
    const auto d = meteor_pair({s, s});
    EXPECT_NEAR(d.score, 1.0 - 0.5 / std::pow(static_cast<double>(len), 3.0), 1e-12);
  }
}

TEST(MetricsProperty, BleuIsOneOnlyWithPerfectPrecisionsAndLength) {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    TokenSeq h;
    TokenSeq r;
    for (int i = 0; i < 4 + static_cast<int>(rng() % 4); ++i) h.push_back(rng() % 2 ? "a" : "b");
    for (int i = 0; i < 4 + static_cast<int>(rng() % 4); ++i) r.push_back(rng() % 2 ? "a" : "b");
    const std::vector<TokenPair> corpus{{h, r}};
    const auto d = bleu_detail(corpus);
    const bool perfect = std::all_of(d.precisions.begin(), d.precisions.end(), [](double p) { return p == 1.0; }) &&
                         d.hyp_length >= d.ref_length;
    EXPECT_EQ(d.score == 1.0, perfect);
    EXPECT_LE(d.score, 1.0);
  }
}
