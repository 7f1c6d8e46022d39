#pragma once

// Emotion transition graph: directed edges that lower emotional intensity inside
// a cluster, plus an edge from every non-neutral emotion to neutral.

#include <algorithm>
#include <array>
#include <bitset>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient/error.hpp"
#include "gradient/taxonomy.hpp"

namespace gradient {

struct TransitionSuggestion {
  EmotionId target;
  int hops = 1;
  std::string rationale;

  friend bool operator==(const TransitionSuggestion&, const TransitionSuggestion&) = default;
};

inline constexpr std::string_view kWithinClusterLowering = "within-cluster lowering";
inline constexpr std::string_view kWithinClusterRaising = "within-cluster raising";
inline constexpr std::string_view kToNeutral = "to-neutral";

class TransitionGraph {
 public:
  using Edge = std::pair<EmotionId, EmotionId>;

  /// Lowering closure over the given intensity ranks plus the universal to-neutral edges.
  static TransitionGraph build_default() { return build_default(default_ranks()); }

  static TransitionGraph build_default(const std::array<int, kEmotionCount>& ranks) {
    TransitionGraph g;
    g.ranks_ = ranks;
    for (const auto& a : all_emotions()) {
      if (a.id == kNeutral) continue;
      g.adjacency_[a.id.index()].set(kNeutral.index());
      for (const auto& b : all_emotions()) {
        if (b.id == kNeutral || b.cluster != a.cluster) continue;
        if (ranks[a.id.index()] > ranks[b.id.index()]) g.adjacency_[a.id.index()].set(b.id.index());
      }
    }
    g.validate();
    return g;
  }

  /// Builds from explicit ranks and edges; throws invariant_violation naming the
  /// first offending edge.
  static TransitionGraph from_edges(const std::array<int, kEmotionCount>& ranks, const std::vector<Edge>& edges) {
    TransitionGraph g;
    g.ranks_ = ranks;
    for (const auto& [src, dst] : edges) {
      if (!src.valid() || !dst.valid()) throw Error(ErrorKind::parse, "edge references an unknown emotion id");
      g.adjacency_[src.index()].set(dst.index());
    }
    g.validate();
    return g;
  }

  static std::array<int, kEmotionCount> default_ranks() {
    std::array<int, kEmotionCount> ranks{};
    for (const auto& e : all_emotions()) ranks[e.id.index()] = e.intensity_rank;
    return ranks;
  }

  bool has_edge(EmotionId src, EmotionId dst) const {
    if (!src.valid() || !dst.valid()) return false;
    return adjacency_[src.index()].test(dst.index());
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& row : adjacency_) n += row.count();
    return n;
  }

  std::size_t out_degree(EmotionId src) const { return adjacency_.at(src.index()).count(); }

  int intensity_rank(EmotionId id) const { return ranks_.at(id.index()); }

  const std::array<int, kEmotionCount>& ranks() const noexcept { return ranks_; }

  /// Edges sorted by (source id, target id).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int s = 0; s < kEmotionCount; ++s) {
      for (int d = 0; d < kEmotionCount; ++d) {
        if (adjacency_[static_cast<std::size_t>(s)].test(static_cast<std::size_t>(d))) out.emplace_back(EmotionId{s}, EmotionId{d});
      }
    }
    return out;
  }

  /// Within-cluster targets by ascending hops then id; the to-neutral edge last.
  std::vector<TransitionSuggestion> targets_of(EmotionId src) const {
    std::vector<TransitionSuggestion> within;
    std::optional<TransitionSuggestion> to_neutral;
    if (!src.valid()) return {};
    for (int d = 0; d < kEmotionCount; ++d) {
      const EmotionId dst{d};
      if (!has_edge(src, dst)) continue;
      if (dst == kNeutral) {
        to_neutral = TransitionSuggestion{dst, ranks_[src.index()] + 1, std::string(kToNeutral)};
        continue;
      }
      const int diff = ranks_[src.index()] - ranks_[dst.index()];
      within.push_back({dst, diff > 0 ? diff : -diff,
                        std::string(diff > 0 ? kWithinClusterLowering : kWithinClusterRaising)});
    }
    std::stable_sort(within.begin(), within.end(), [](const auto& a, const auto& b) {
      return a.hops != b.hops ? a.hops < b.hops : a.target < b.target;
    });
    if (to_neutral) within.push_back(*to_neutral);
    return within;
  }

  bool is_valid_transition(EmotionId src, EmotionId dst) const { return has_edge(src, dst); }

  /// Config document: {"emotions": [{name, cluster, intensity_rank}], "edges": [[src, dst]]}.
  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["emotions"] = nlohmann::json::array();
    for (const auto& e : all_emotions()) {
      doc["emotions"].push_back(
          {{"name", std::string(e.name)}, {"cluster", e.cluster}, {"intensity_rank", ranks_[e.id.index()]}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& [s, d] : edges()) {
      doc["edges"].push_back({std::string(emotion_name(s)), std::string(emotion_name(d))});
    }
    return doc;
  }

  static TransitionGraph from_json(const nlohmann::json& doc);

  friend bool operator==(const TransitionGraph& a, const TransitionGraph& b) {
    return a.ranks_ == b.ranks_ && a.adjacency_ == b.adjacency_;
  }

 private:
  TransitionGraph() = default;

  static std::string edge_label(EmotionId s, EmotionId d) {
    return std::string(emotion_name(s)) + "->" + std::string(emotion_name(d));
  }

  void validate() const {
    for (const auto& e : all_emotions()) {
      if (ranks_[e.id.index()] < 0) {
        throw Error(ErrorKind::invariant_violation, "negative intensity_rank for " + std::string(e.name));
      }
      for (const auto& o : all_emotions()) {
        if (o.id < e.id && o.cluster == e.cluster && ranks_[o.id.index()] == ranks_[e.id.index()]) {
          throw Error(ErrorKind::invariant_violation, "duplicate intensity_rank in cluster " +
                                                          std::to_string(e.cluster) + ": " +
                                                          std::string(o.name) + ", " + std::string(e.name));
        }
      }
    }
    for (const auto& a : all_emotions()) {
      for (const auto& b : all_emotions()) {
        if (!has_edge(a.id, b.id)) continue;
        if (a.id == b.id) throw Error(ErrorKind::invariant_violation, "self-edge " + edge_label(a.id, b.id));
        if (a.id == kNeutral) {
          throw Error(ErrorKind::invariant_violation, "neutral must be a sink: " + edge_label(a.id, b.id));
        }
        if (b.id != kNeutral && a.cluster != b.cluster) {
          throw Error(ErrorKind::invariant_violation, "cross-cluster edge " + edge_label(a.id, b.id));
        }
      }
      if (a.id != kNeutral && !has_edge(a.id, kNeutral)) {
        throw Error(ErrorKind::invariant_violation, "missing to-neutral edge " + edge_label(a.id, kNeutral));
      }
    }
    // Kahn's algorithm over the non-neutral edges.
    std::array<int, kEmotionCount> indegree{};
    for (const auto& [s, d] : edges()) {
      if (d != kNeutral) ++indegree[d.index()];
    }
    std::vector<int> ready;
    for (int i = 0; i < kEmotionCount; ++i) {
      if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    }
    int visited = 0;
    while (!ready.empty()) {
      const int n = ready.back();
      ready.pop_back();
      ++visited;
      for (int d = 0; d < kEmotionCount; ++d) {
        if (d == kNeutral.value || !adjacency_[static_cast<std::size_t>(n)].test(static_cast<std::size_t>(d))) continue;
        if (--indegree[static_cast<std::size_t>(d)] == 0) ready.push_back(d);
      }
    }
    if (visited != kEmotionCount) {
      for (const auto& [s, d] : edges()) {
        if (d != kNeutral && indegree[s.index()] > 0 && indegree[d.index()] > 0) {
          throw Error(ErrorKind::invariant_violation, "cycle involving edge " + edge_label(s, d));
        }
      }
      throw Error(ErrorKind::invariant_violation, "cycle in transition relation");
    }
  }

  std::array<int, kEmotionCount> ranks_{};
  std::array<std::bitset<kEmotionCount>, kEmotionCount> adjacency_{};
};

namespace detail {

inline EmotionId emotion_ref_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) {
    const auto id = v.get<int>();
    if (auto e = emotion_by_id(id)) return e->id;
    throw Error(ErrorKind::parse, "unknown emotion id " + std::to_string(id));
  }
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (auto e = emotion_by_name(name)) return e->id;
    throw Error(ErrorKind::parse, "unknown emotion '" + name + "'");
  }
  throw Error(ErrorKind::parse, "emotion reference must be a name or an id");
}

}  // namespace detail

inline TransitionGraph TransitionGraph::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "graph config must be a JSON object");
  auto ranks = default_ranks();
  if (doc.contains("emotions")) {
    const auto& list = doc.at("emotions");
    if (!list.is_array()) throw Error(ErrorKind::parse, "'emotions' must be an array");
    std::bitset<kEmotionCount> seen;
    for (const auto& item : list) {
      if (!item.is_object() || !item.contains("name")) throw Error(ErrorKind::parse, "emotion entry needs a 'name'");
      const EmotionId id = detail::emotion_ref_from_json(item.at("name"));
      if (seen.test(id.index())) {
        throw Error(ErrorKind::parse, "duplicate emotion entry '" + std::string(emotion_name(id)) + "'");
      }
      seen.set(id.index());
      if (item.contains("cluster")) {
        if (!item.at("cluster").is_number_integer()) throw Error(ErrorKind::parse, "'cluster' must be an integer");
        const int cluster = item.at("cluster").get<int>();
        if (cluster != emotion(id).cluster) {
          throw Error(ErrorKind::invariant_violation, "cluster mismatch for " + std::string(emotion_name(id)) +
                                                          ": expected " + std::to_string(emotion(id).cluster) +
                                                          ", got " + std::to_string(cluster));
        }
      }
      if (item.contains("intensity_rank")) {
        if (!item.at("intensity_rank").is_number_integer()) {
          throw Error(ErrorKind::parse, "'intensity_rank' must be an integer");
        }
        ranks[id.index()] = item.at("intensity_rank").get<int>();
      }
    }
  }
  if (!doc.contains("edges")) return build_default(ranks);

  const auto& list = doc.at("edges");
  if (!list.is_array()) throw Error(ErrorKind::parse, "'edges' must be an array");
  std::vector<Edge> edges;
  for (const auto& item : list) {
    if (!item.is_array() || item.size() != 2) throw Error(ErrorKind::parse, "edge must be a [src, dst] pair");
    edges.emplace_back(detail::emotion_ref_from_json(item[0]), detail::emotion_ref_from_json(item[1]));
  }
  return from_edges(ranks, edges);
}

inline TransitionGraph load_graph(std::string_view config_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  return TransitionGraph::from_json(doc);
}

inline TransitionGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::unreadable_file, "cannot open graph config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

}  // namespace gradient
