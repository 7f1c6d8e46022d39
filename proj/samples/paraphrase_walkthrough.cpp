// Walks one message through classification, target suggestion, prefixing,
// generation and scoring with the offline backends.

#include <iostream>
#include <string>
#include <vector>

#include "gradient/gradient.hpp"

int main() {
  const gradient::LexiconClassifier classifier;
  const gradient::EchoGenerator generator;
  const auto graph = gradient::TransitionGraph::build_default();

  const std::string text = "I am furious that the meeting was moved again.";
  const auto label = gradient::classify_one(classifier, text);
  if (!label.emotion) {
    std::cout << "no dominant emotion\n";
    return 0;
  }
  std::cout << "source emotion: " << gradient::emotion_name(*label.emotion) << " (" << *label.score << ")\n";

  const auto suggestions = graph.targets_of(*label.emotion);
  for (const auto& s : suggestions) {
    std::cout << "  -> " << gradient::emotion_name(s.target) << " hops=" << s.hops << " (" << s.rationale << ")\n";
  }

  const auto target = suggestions.front().target;
  const auto line = gradient::encode({*label.emotion, target, gradient::PrefixMode::by_name}, text);
  const auto result = generator.generate({line});
  std::cout << "model input: " << line << "\n";
  std::cout << "output:      " << result.output << "\n";

  const std::vector<gradient::TokenPair> corpus{gradient::tokenize_pair(result.output, text)};
  std::cout << gradient::metrics_to_json(gradient::paraphrase_metrics(corpus)).dump(2) << "\n";
}
