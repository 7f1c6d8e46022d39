#pragma once

// JSON-over-HTTP facade for the moderation UI:
//
//   POST /api/classify     {text}                   -> dominant emotion + 28 scores
//   GET  /api/graph        (also GET /graph)         -> active graph config document
//   POST /api/transitions  {emotion}                -> ordered suggestions
//   POST /api/paraphrase   {text, source?, target}  -> output and the prefix line used
//
// Errors are always {"code", "message"} with 400/404/503/500 statuses.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "gradient/classifier.hpp"
#include "gradient/error.hpp"
#include "gradient/generator.hpp"
#include "gradient/graph.hpp"
#include "gradient/prefix.hpp"

namespace gradient {

enum class ApiErrorCode { bad_request, backend_unavailable, not_found, internal };

constexpr std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::bad_request: return "bad_request";
    case ApiErrorCode::backend_unavailable: return "backend_unavailable";
    case ApiErrorCode::not_found: return "not_found";
    case ApiErrorCode::internal: return "internal";
  }
  return "internal";
}

constexpr int http_status(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::bad_request: return 400;
    case ApiErrorCode::backend_unavailable: return 503;
    case ApiErrorCode::not_found: return 404;
    case ApiErrorCode::internal: return 500;
  }
  return 500;
}

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;

  static ApiResponse error(ApiErrorCode code, std::string message) {
    if (message.empty()) message = std::string(to_string(code));
    return {http_status(code), {{"code", std::string(to_string(code))}, {"message", std::move(message)}}, {}};
  }
};

struct ServiceConfig {
  double threshold = kDefaultThreshold;
  int max_length = kDefaultMaxLength;
  std::string cors_origin = "*";
};

class Service {
 public:
  Service(const Classifier& classifier, const Generator& generator, const TransitionGraph& graph,
          ServiceConfig config = {})
      : classifier_(classifier), generator_(generator), graph_(graph), config_(std::move(config)) {
    graph_document_ = graph_.to_json().dump();
    etag_ = "\"" + fnv1a_hex(graph_document_) + "\"";
  }

  const std::string& graph_etag() const noexcept { return etag_; }

  ApiResponse classify(const std::string& request_body) const {
    return guarded([&] {
      const auto req = parse_object(request_body);
      const auto text = require_text(req, "text");
      const std::vector<std::string> texts{text};
      const auto vectors = classifier_.classify_scores(texts);
      if (vectors.size() != 1) throw Error(ErrorKind::malformed_response, "classifier returned no vector");
      const auto label = dominant_emotion(vectors.front(), config_.threshold);
      nlohmann::json out;
      out["emotion"] = label.emotion ? nlohmann::json(std::string(emotion_name(*label.emotion))) : nlohmann::json(nullptr);
      out["id"] = label.emotion ? nlohmann::json(label.emotion->value) : nlohmann::json(nullptr);
      out["score"] = label.score ? nlohmann::json(*label.score) : nlohmann::json(nullptr);
      out["scores"] = vectors.front().scores;
      return ApiResponse{200, std::move(out), {}};
    });
  }

  ApiResponse graph(std::string_view if_none_match = {}) const {
    ApiResponse res{200, nlohmann::json::parse(graph_document_), {{"ETag", etag_}}};
    if (!if_none_match.empty() && if_none_match == etag_) {
      res.status = 304;
      res.body = nullptr;
    }
    return res;
  }

  ApiResponse transitions(const std::string& request_body) const {
    return guarded([&] {
      const auto req = parse_object(request_body);
      if (!req.contains("emotion")) throw BadRequest("missing field 'emotion'");
      const auto source = resolve_emotion(req.at("emotion"));
      if (!source) throw NotFound("unknown emotion " + req.at("emotion").dump());
      nlohmann::json suggestions = nlohmann::json::array();
      for (const auto& s : graph_.targets_of(*source)) {
        suggestions.push_back({{"target", std::string(emotion_name(s.target))},
                               {"id", s.target.value},
                               {"hops", s.hops},
                               {"rationale", s.rationale}});
      }
      return ApiResponse{200,
                         {{"source", std::string(emotion_name(*source))},
                          {"source_id", source->value},
                          {"suggestions", std::move(suggestions)}},
                         {}};
    });
  }

  ApiResponse paraphrase(const std::string& request_body) const {
    return guarded([&] {
      const auto req = parse_object(request_body);
      const auto text = require_text(req, "text");
      if (!req.contains("target") || req.at("target").is_null()) throw BadRequest("missing field 'target'");
      const auto target = resolve_emotion(req.at("target"));
      if (!target) throw BadRequest("unknown target emotion " + req.at("target").dump());

      EmotionId source;
      if (req.contains("source") && !req.at("source").is_null()) {
        const auto given = resolve_emotion(req.at("source"));
        if (!given) throw BadRequest("unknown source emotion " + req.at("source").dump());
        source = *given;
      } else {
        const auto label = classify_one(classifier_, text, config_.threshold);
        if (!label.emotion) throw BadRequest("no dominant emotion found for the text; supply 'source'");
        source = *label.emotion;
      }

      const auto line = encode({source, *target, PrefixMode::by_id}, text);
      const auto result = generator_.generate({line, config_.max_length});
      return ApiResponse{200,
                         {{"output", result.output},
                          {"prefix", line},
                          {"source", std::string(emotion_name(source))},
                          {"source_id", source.value},
                          {"target", std::string(emotion_name(*target))},
                          {"target_id", target->value},
                          {"graph_valid", graph_.is_valid_transition(source, *target)},
                          {"backend", result.backend},
                          {"latency_ms", result.latency_ms}},
                         {}};
    });
  }

  /// Registers all routes on `server`.
  void mount(httplib::Server& server) const {
    auto send = [this](httplib::Response& res, const ApiResponse& api) {
      res.status = api.status;
      for (const auto& [k, v] : api.headers) res.set_header(k, v);
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
      if (!api.body.is_null()) res.set_content(api.body.dump(), "application/json");
    };
    server.Post("/api/classify", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, classify(req.body));
    });
    const auto graph_handler = [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, graph(req.get_header_value("If-None-Match")));
    };
    server.Get("/api/graph", graph_handler);
    server.Get("/graph", graph_handler);
    server.Post("/api/transitions", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, transitions(req.body));
    });
    server.Post("/api/paraphrase", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, paraphrase(req.body));
    });
    server.Options(R"(/.*)", [this](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, If-None-Match");
    });
    server.set_error_handler([this](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const auto code = res.status == 404 ? ApiErrorCode::not_found
                        : res.status >= 500 ? ApiErrorCode::internal
                                            : ApiErrorCode::bad_request;
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
      res.set_content(ApiResponse::error(code, "no route").body.dump(), "application/json");
    });
  }

 private:
  struct BadRequest : std::runtime_error {
    using std::runtime_error::runtime_error;
  };
  struct NotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  template <typename Fn>
  static ApiResponse guarded(Fn&& fn) {
    try {
      return fn();
    } catch (const BadRequest& e) {
      return ApiResponse::error(ApiErrorCode::bad_request, e.what());
    } catch (const NotFound& e) {
      return ApiResponse::error(ApiErrorCode::not_found, e.what());
    } catch (const Error& e) {
      if (is_backend_error(e.kind())) return ApiResponse::error(ApiErrorCode::backend_unavailable, e.what());
      if (e.kind() == ErrorKind::empty_text) return ApiResponse::error(ApiErrorCode::bad_request, e.what());
      return ApiResponse::error(ApiErrorCode::internal, e.what());
    } catch (const std::exception& e) {
      return ApiResponse::error(ApiErrorCode::internal, e.what());
    }
  }

  static nlohmann::json parse_object(const std::string& body) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw BadRequest(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  }

  static std::string require_text(const nlohmann::json& req, const char* key) {
    if (!req.contains(key) || !req.at(key).is_string()) {
      throw BadRequest(std::string("field '") + key + "' must be a string");
    }
    auto text = req.at(key).get<std::string>();
    if (detail::is_blank(text)) throw BadRequest(std::string("field '") + key + "' is empty");
    return text;
  }

  static std::optional<EmotionId> resolve_emotion(const nlohmann::json& v) {
    if (v.is_number_integer()) {
      if (auto e = emotion_by_id(v.get<int>())) return e->id;
      return std::nullopt;
    }
    if (v.is_string()) {
      if (auto e = emotion_by_name(v.get<std::string>())) return e->id;
      return std::nullopt;
    }
    throw BadRequest("emotion must be a name or an id");
  }

  static std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
    return buffer;
  }

  const Classifier& classifier_;
  const Generator& generator_;
  const TransitionGraph& graph_;
  ServiceConfig config_;
  std::string graph_document_;
  std::string etag_;
};

}  // namespace gradient
