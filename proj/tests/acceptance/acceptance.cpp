// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gradient/gradient.hpp"
#include "oracles/graph_oracle.hpp"
#include "oracles/metric_oracle.hpp"
#include "support/e2e_dataset.hpp"
#include "support/synthetic_corpus.hpp"

using namespace gradient;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kNgramTolerance = 1e-12;
constexpr double kMeteorTolerance = 1e-9;
constexpr double kOracleSuiteSeconds = 60.0;
constexpr double kEndToEndSeconds = 10.0;
constexpr std::size_t kMaxSequenceLength = 6;
constexpr int kPrefixCases = 1000;
constexpr int kGraphMutations = 2000;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")" << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

oracle::Stemmer cached_porter() {
  auto cache = std::make_shared<std::unordered_map<std::string, std::string>>();
  return [cache](const std::string& w) {
    auto it = cache->find(w);
    if (it == cache->end()) it = cache->emplace(w, porter_stem(w)).first;
    return it->second;
  };
}

void metric_oracle_suite() {
  const auto start = std::chrono::steady_clock::now();
  const auto sequences = oracle::all_sequences({"cat", "cats", "sat"}, kMaxSequenceLength);
  const auto stem = cached_porter();
  std::size_t pairs = 0;
  std::size_t ngram_bad = 0;
  std::size_t meteor_bad = 0;
  double worst_ngram = 0.0;
  double worst_meteor = 0.0;
  auto check = [&](double got, double want, double tol, double& worst, std::size_t& bad) {
    const double d = std::abs(got - want);
    worst = std::max(worst, d);
    if (!(d <= tol)) ++bad;
  };
  std::vector<oracle::Profile> profiles;
  std::vector<oracle::Tokens> stemmed;
  for (const auto& seq : sequences) {
    profiles.push_back(oracle::profile(seq));
    stemmed.push_back(oracle::stems(seq, stem));
  }
  for (std::size_t a = 0; a < sequences.size(); ++a) {
    for (std::size_t b = 0; b < sequences.size(); ++b) {
      const auto& hp = profiles[a];
      const auto& rp = profiles[b];
      const TokenPair pair{sequences[a], sequences[b]};
      const std::span<const TokenPair> corpus(&pair, 1);
      check(bleu(corpus).value, oracle::bleu(hp, rp), kNgramTolerance, worst_ngram, ngram_bad);
      check(gleu(corpus).value, oracle::gleu(hp, rp), kNgramTolerance, worst_ngram, ngram_bad);
      check(rouge_n_pair(pair, 1), oracle::rouge_n(hp, rp, 1), kNgramTolerance, worst_ngram, ngram_bad);
      check(rouge_n_pair(pair, 2), oracle::rouge_n(hp, rp, 2), kNgramTolerance, worst_ngram, ngram_bad);
      check(rouge_l_pair(pair), oracle::rouge_l(hp, rp), kNgramTolerance, worst_ngram, ngram_bad);
      const auto expected = oracle::meteor(sequences[a], sequences[b], stemmed[a], stemmed[b]);
      check(meteor_pair(pair).score, expected.score, kMeteorTolerance, worst_meteor, meteor_bad);
      ++pairs;
    }
  }
  const double elapsed = seconds_since(start);
  report("metric oracle suite",
         ngram_bad == 0 && meteor_bad == 0 && elapsed <= kOracleSuiteSeconds,
         std::to_string(pairs) + " pairs, n-gram/LCS mismatches " + std::to_string(ngram_bad) + " max |d| " +
             fmt(worst_ngram) + ", METEOR mismatches " + std::to_string(meteor_bad) + " max |d| " +
             fmt(worst_meteor) + ", " + fmt(elapsed) + " s of " + fmt(kOracleSuiteSeconds));
}

void hand_fixtures() {
  std::vector<std::string> bad;
  auto expect = [&](const std::string& name, double got, double oracle_value, double frozen) {
    if (std::abs(oracle_value - frozen) > kNgramTolerance || std::abs(got - frozen) > kNgramTolerance) {
      bad.push_back(name + " got " + fmt(got) + " oracle " + fmt(oracle_value));
    }
  };
  const auto clip = tokenize_pair("the the the the", "the cat");
  const std::vector<TokenPair> clip_corpus{clip};
  const auto clip_oracle = oracle::clipped(oracle::ngram_counts(clip.hypothesis, 1), oracle::ngram_counts(clip.reference, 1)) /
                           static_cast<double>(oracle::total(oracle::ngram_counts(clip.hypothesis, 1)));
  expect("bleu p1", bleu_detail(clip_corpus).precisions[0], clip_oracle, 0.25);

  const std::vector<TokenPair> short_corpus{tokenize_pair("the cat", "the cat sat")};
  const std::vector<oracle::Pair> short_oracle{{short_corpus[0].hypothesis, short_corpus[0].reference}};
  expect("gleu", gleu(short_corpus).value, oracle::gleu(short_oracle), 0.5);
  expect("rouge1", rouge_n(short_corpus, 1).value, oracle::rouge_n(short_oracle[0], 1), 0.8);

  const auto lcs_pair = tokenize_pair("the cat on mat", "the cat sat on the mat");
  expect("rougeL", rouge_l_pair(lcs_pair), oracle::rouge_l({lcs_pair.hypothesis, lcs_pair.reference}), 0.8);

  const auto stem = cached_porter();
  for (int m = 1; m <= 10; ++m) {
    TokenSeq words;
    for (int i = 0; i < m; ++i) words.push_back("w" + std::to_string(i));
    const double frozen = 1.0 - 0.5 / (static_cast<double>(m) * m * m);
    expect("meteor identity m=" + std::to_string(m), meteor_pair({words, words}).score,
           oracle::meteor({words, words}, stem).score, frozen);
  }
  std::string detail = "bleu p1, gleu, rouge1, rougeL, meteor identity m=1..10";
  for (const auto& b : bad) detail += "; " + b;
  report("hand-computed fixtures", bad.empty(), detail);
}

void graph_invariants() {
  const auto g = TransitionGraph::build_default();
  std::size_t to_neutral = 0;
  std::size_t cross = 0;
  oracle::EdgeSet edges;
  for (const auto& [s, d] : g.edges()) {
    edges.insert({s.value, d.value});
    if (d == kNeutral) {
      ++to_neutral;
    } else if (emotion(s).cluster != emotion(d).cluster) {
      ++cross;
    }
  }
  const bool shape = g.to_json().at("emotions").size() == 28 && g.edge_count() == 53 && to_neutral == 27 &&
                     cross == 0 && !oracle::violates(g.ranks(), edges);
  const bool example = g.is_valid_transition(require_emotion("anger"), require_emotion("annoyance"));

  std::mt19937 rng(20240601);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int wrong = 0;
  int rejected = 0;
  for (int iter = 0; iter < kGraphMutations; ++iter) {
    auto ranks = TransitionGraph::default_ranks();
    auto mutated = edges;
    for (int m = 1 + pick(3); m > 0; --m) {
      switch (pick(6)) {
        case 0: mutated.insert({pick(28), pick(28)}); break;
        case 1: mutated.insert({27, pick(27)}); break;
        case 2: mutated.erase({pick(27), 27}); break;
        case 3: {
          const int a = pick(27);
          const int b = pick(27);
          if (emotion(EmotionId{a}).cluster == emotion(EmotionId{b}).cluster) mutated.insert({a, b});
          break;
        }
        case 4: ranks[static_cast<std::size_t>(pick(27))] = pick(4); break;
        default: ranks[static_cast<std::size_t>(pick(28))] = -1; break;
      }
    }
    const bool bad = oracle::violates(ranks, mutated);
    std::vector<TransitionGraph::Edge> list;
    for (const auto& [s, d] : mutated) list.emplace_back(EmotionId{s}, EmotionId{d});
    bool accepted = true;
    try {
      (void)TransitionGraph::from_edges(ranks, list);
    } catch (const Error&) {
      accepted = false;
    }
    if (accepted == bad) ++wrong;
    if (!accepted) ++rejected;
  }
  report("graph invariants", shape && example && wrong == 0,
         "28 nodes, " + std::to_string(g.edge_count()) + " edges, " + std::to_string(to_neutral) + " to-neutral, " +
             std::to_string(cross) + " cross-cluster, anger->annoyance " + (example ? "valid" : "invalid") + ", " +
             std::to_string(rejected) + "/" + std::to_string(kGraphMutations) + " mutations rejected, " +
             std::to_string(wrong) + " misjudged");
}

std::set<std::string> ids_of(const std::vector<PairRecord>& records) {
  std::set<std::string> out;
  for (const auto& r : records) out.insert(r.id);
  return out;
}

void pipeline_conservation() {
  const auto cases = synthetic::cases();
  const auto labeled = synthetic::labeled();
  const auto options = synthetic::filter_options();
  std::size_t misplaced = 0;
  std::set<DropReason> buckets;
  std::set<std::string> graph_valid;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (drop_reason(labeled[i], options) != cases[i].expected) ++misplaced;
    buckets.insert(cases[i].expected);
    if (cases[i].expected == DropReason::none && cases[i].graph_valid) graph_valid.insert(cases[i].record.id);
  }
  const auto once = filter_pairs(labeled, options);
  const auto twice = filter_pairs(once.records, options);
  const bool idempotent = twice.records == once.records;
  const auto restricted = restrict_to_graph(once.records, TransitionGraph::build_default());
  const bool restrict_ok = ids_of(restricted.records) == graph_valid;

  std::vector<std::set<std::string>> kept;
  for (double t : {0.775, 0.8, 0.825}) kept.push_back(ids_of(filter_pairs(labeled, {t, true}).records));
  bool shrinking = true;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    if (kept[i].size() >= kept[i - 1].size()) shrinking = false;
    for (const auto& id : kept[i]) shrinking = shrinking && kept[i - 1].count(id) > 0;
  }
  const auto& s = once.stats;
  report("pipeline conservation",
         s.conserved() && s.input_count == 40 && misplaced == 0 && buckets.size() == 6 && idempotent && restrict_ok &&
             shrinking,
         std::to_string(s.input_count) + " = " + std::to_string(s.kept_count) + " kept + " +
             std::to_string(s.dropped_total()) + " dropped, " + std::to_string(misplaced) + " misplaced, idempotent " +
             (idempotent ? "yes" : "no") + ", restrict " + std::to_string(restricted.records.size()) + "/" +
             std::to_string(graph_valid.size()) + (restrict_ok ? " exact" : " differs") + ", PWI kept " +
             std::to_string(kept[0].size()) + " > " + std::to_string(kept[1].size()) + " > " +
             std::to_string(kept[2].size()));
}

void prefix_round_trip() {
  std::mt19937 rng(99);
  const std::vector<std::string> pieces{" to ", ": ", "to", ":", "anger", "7", "neutral", "é", "x", "3 to 4: ", " "};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  int bad = 0;
  int tricky = 0;
  for (int i = 0; i < kPrefixCases; ++i) {
    std::string body = "w";
    for (auto k = pick(7); k > 0; --k) body += pieces[pick(pieces.size())];
    if (i % 2 == 0) body += " to x: y";
    if (body.find(" to ") != std::string::npos || body.find(": ") != std::string::npos) ++tricky;
    const TransitionPrefix p{EmotionId{static_cast<int>(pick(28))}, EmotionId{static_cast<int>(pick(28))},
                             pick(2) == 0 ? PrefixMode::by_id : PrefixMode::by_name};
    try {
      const auto decoded = decode(encode(p, body));
      if (decoded.prefix != p || decoded.body != body) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  report("prefix round-trip", bad == 0,
         std::to_string(kPrefixCases) + " cases, " + std::to_string(tricky) + " with separators in body, " +
             std::to_string(bad) + " mismatches");
}

void end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const auto d = e2e::twenty_pairs();
  const auto graph = TransitionGraph::build_default();
  EvalOptions options;
  options.model_name = "oracle";
  const auto oracle_run = evaluate(d.records, e2e::oracle_for(d.records), d.classifier, graph, options).run;
  options.model_name = "echo";
  options.reference = ReferenceMode::input;
  const auto echo_run = evaluate(d.records, EchoGenerator{}, d.classifier, graph, options).run;
  const double elapsed = seconds_since(start);

  auto near = [](std::optional<double> v, double want) { return v && std::abs(*v - want) <= kNgramTolerance; };
  const bool oracle_ok = oracle_run.pair_count == 20 && near(oracle_run.metric(MetricName::exact_match), 1.0) &&
                         near(oracle_run.metric(MetricName::bleu), 1.0) &&
                         near(oracle_run.metric(MetricName::rouge1), 1.0) &&
                         near(oracle_run.metric(MetricName::rougeL), 1.0) &&
                         near(oracle_run.metric(MetricName::meteor), e2e::meteor_identity_mean(d.records, true));
  const bool echo_ok = near(echo_run.metric(MetricName::bleu), 1.0) && near(echo_run.metric(MetricName::gleu), 1.0) &&
                       near(echo_run.metric(MetricName::rouge1), 1.0) &&
                       near(echo_run.metric(MetricName::rouge2), 1.0) &&
                       near(echo_run.metric(MetricName::rougeL), 1.0) &&
                       near(echo_run.metric(MetricName::meteor), e2e::meteor_identity_mean(d.records, false));
  report("end-to-end identity", oracle_ok && echo_ok && elapsed <= kEndToEndSeconds,
         std::string("target mode ") + (oracle_ok ? "maximal" : "off") + ", input mode " + (echo_ok ? "maximal" : "off") +
             ", " + fmt(elapsed) + " s of " + fmt(kEndToEndSeconds));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  const auto dir = fs::temp_directory_path() / "gradient-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto dataset = dir / "pairs.jsonl";
  export_jsonl(e2e::twenty_pairs().records, dataset);

  auto run = [&](const std::string& out) {
    const std::string command = std::string(GRADIENT_CLI_PATH) + " --seed 42 evaluate --dataset " + dataset.string() +
                                " --model-name stub --dataset-name e2e --generator oracle --out " +
                                (dir / out).string() + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int a = run("first");
  const int b = run("second");
  const auto first = slurp(dir / "first" / "report.csv");
  const auto second = slurp(dir / "second" / "report.csv");
  report("determinism", a == 0 && b == 0 && !first.empty() && first == second,
         "exit codes " + std::to_string(a) + "/" + std::to_string(b) + ", report.csv " +
             std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "different"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> criteria{
      {"metric oracle suite", metric_oracle_suite}, {"hand-computed fixtures", hand_fixtures},
      {"graph invariants", graph_invariants},       {"pipeline conservation", pipeline_conservation},
      {"prefix round-trip", prefix_round_trip},     {"end-to-end identity", end_to_end},
      {"determinism", determinism}};
  for (const auto& [name, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(name, false, std::string("threw: ") + e.what());
    }
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
