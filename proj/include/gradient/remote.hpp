#pragma once

// HTTP-backed classifier and generator. Both speak JSON over POST:
//
//   POST {endpoint}/classify  {"texts": [...]}                    -> {"scores": [[28 floats], ...]}
//   POST {endpoint}/generate  {"inputs": [...], "max_length": n}  -> {"outputs": [...]}

#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "gradient/classifier.hpp"
#include "gradient/error.hpp"
#include "gradient/generator.hpp"

namespace gradient {

inline constexpr const char* kClassifierUrlEnv = "GRADIENT_CLASSIFIER_URL";
inline constexpr const char* kGeneratorUrlEnv = "GRADIENT_GENERATOR_URL";

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
};

struct RemoteOptions {
  std::string endpoint;
  RetryPolicy retry;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds timeout{30000};
};

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

inline SplitUrl split_url(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw Error(ErrorKind::usage, "endpoint '" + endpoint + "' lacks a scheme");
  const auto path = endpoint.find('/', scheme + 3);
  SplitUrl out;
  out.origin = endpoint.substr(0, path);
  out.base = path == std::string::npos ? "" : endpoint.substr(path);
  while (!out.base.empty() && out.base.back() == '/') out.base.pop_back();
  return out;
}

/// POSTs a JSON document, retrying transport failures and 5xx responses with
/// exponential backoff.
inline nlohmann::json post_json(const RemoteOptions& options, const std::string& route, const nlohmann::json& body) {
  const auto url = split_url(options.endpoint);
  const auto payload = body.dump();
  auto backoff = options.retry.initial_backoff;
  ErrorKind last_kind = ErrorKind::backend_unreachable;
  std::string last_message;
  const int attempts = std::max(1, options.retry.attempts);

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(url.origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - seconds);
    client.set_connection_timeout(seconds.count(), static_cast<time_t>(micros.count()));
    client.set_read_timeout(seconds.count(), static_cast<time_t>(micros.count()));
    client.set_write_timeout(seconds.count(), static_cast<time_t>(micros.count()));

    auto res = client.Post(url.base + route, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last_kind = err == httplib::Error::Read || err == httplib::Error::Write ? ErrorKind::timeout
                                                                              : ErrorKind::backend_unreachable;
      last_message = httplib::to_string(err);
      continue;
    }
    if (res->status >= 500) {
      last_kind = ErrorKind::backend_unreachable;
      last_message = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorKind::malformed_response,
                  options.endpoint + route + " answered HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::malformed_response, options.endpoint + route + " returned invalid JSON: " + e.what());
    }
  }
  throw Error(last_kind, options.endpoint + route + " failed after " + std::to_string(attempts) +
                             " attempts: " + last_message);
}

/// Runs `work` over contiguous batches with at most `max_in_flight` running at
/// once and concatenates the results in batch order.
template <typename Result>
std::vector<Result> run_batched(const std::vector<std::pair<std::size_t, std::size_t>>& batches,
                                std::size_t max_in_flight,
                                const std::function<std::vector<Result>(std::size_t, std::size_t)>& work) {
  std::vector<Result> out;
  std::deque<std::future<std::vector<Result>>> pending;
  auto drain_one = [&] {
    auto part = pending.front().get();
    pending.pop_front();
    for (auto& r : part) out.push_back(std::move(r));
  };
  try {
    for (const auto& [begin, end] : batches) {
      if (pending.size() >= std::max<std::size_t>(1, max_in_flight)) drain_one();
      pending.push_back(std::async(std::launch::async, work, begin, end));
    }
    while (!pending.empty()) drain_one();
  } catch (...) {
    for (auto& f : pending) {
      if (f.valid()) f.wait();
    }
    throw;
  }
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> even_batches(std::size_t n, std::size_t batch_size) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t step = std::max<std::size_t>(1, batch_size);
  for (std::size_t i = 0; i < n; i += step) out.emplace_back(i, std::min(n, i + step));
  return out;
}

inline std::string endpoint_from_env(const char* variable) {
  const char* value = std::getenv(variable);
  return value == nullptr ? std::string() : std::string(value);
}

}  // namespace detail

class RemoteClassifier final : public Classifier {
 public:
  explicit RemoteClassifier(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw Error(ErrorKind::usage, "remote classifier requires an endpoint");
  }

  std::vector<ScoreVector> classify_scores(std::span<const std::string> texts) const override {
    const std::function<std::vector<ScoreVector>(std::size_t, std::size_t)> work = [&](std::size_t begin,
                                                                                      std::size_t end) {
      nlohmann::json body;
      body["texts"] = nlohmann::json::array();
      for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);
      const auto reply = detail::post_json(options_, "/classify", body);
      if (!reply.is_object() || !reply.contains("scores") || !reply.at("scores").is_array()) {
        throw Error(ErrorKind::malformed_response, "classify response lacks a 'scores' array");
      }
      const auto& rows = reply.at("scores");
      if (rows.size() != end - begin) {
        throw Error(ErrorKind::malformed_response, "classify returned " + std::to_string(rows.size()) +
                                                       " rows for " + std::to_string(end - begin) + " texts");
      }
      std::vector<ScoreVector> out;
      for (const auto& row : rows) {
        if (!row.is_array()) throw Error(ErrorKind::malformed_response, "score row is not an array");
        std::vector<double> values;
        for (const auto& x : row) {
          if (!x.is_number()) throw Error(ErrorKind::malformed_response, "score row holds a non-number");
          values.push_back(x.get<double>());
        }
        out.push_back(ScoreVector::from_values(values));
      }
      return out;
    };
    return detail::run_batched(detail::even_batches(texts.size(), options_.batch_size), options_.max_in_flight,
                               work);
  }

  std::string_view name() const override { return "remote"; }

 private:
  RemoteOptions options_;
};

class RemoteGenerator final : public Generator {
 public:
  explicit RemoteGenerator(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw Error(ErrorKind::usage, "remote generator requires an endpoint");
  }

  std::vector<GenerationResult> generate_batch(std::span<const GenerationRequest> requests) const override {
    for (const auto& req : requests) decode(req.input);

    // Batches never mix max_length values since the wire format carries one per call.
    std::vector<std::pair<std::size_t, std::size_t>> batches;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= requests.size(); ++i) {
      const bool cut = i == requests.size() || i - begin >= std::max<std::size_t>(1, options_.batch_size) ||
                       requests[i].max_length != requests[begin].max_length;
      if (cut) {
        batches.emplace_back(begin, i);
        begin = i;
      }
    }

    const std::function<std::vector<GenerationResult>(std::size_t, std::size_t)> work = [&](std::size_t first,
                                                                                            std::size_t last) {
      const detail::Stopwatch clock;
      nlohmann::json body;
      body["inputs"] = nlohmann::json::array();
      for (std::size_t i = first; i < last; ++i) body["inputs"].push_back(requests[i].input);
      body["max_length"] = requests[first].max_length;
      const auto reply = detail::post_json(options_, "/generate", body);
      if (!reply.is_object() || !reply.contains("outputs") || !reply.at("outputs").is_array()) {
        throw Error(ErrorKind::malformed_response, "generate response lacks an 'outputs' array");
      }
      const auto& outputs = reply.at("outputs");
      if (outputs.size() != last - first) {
        throw Error(ErrorKind::malformed_response, "generate returned " + std::to_string(outputs.size()) +
                                                       " outputs for " + std::to_string(last - first) + " inputs");
      }
      const auto latency = clock.elapsed_ms();
      std::vector<GenerationResult> out;
      for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (!outputs[k].is_string()) throw Error(ErrorKind::malformed_response, "generate output is not a string");
        auto text = outputs[k].get<std::string>();
        if (detail::is_blank(text)) {
          throw Error(ErrorKind::empty_output, "empty output for '" + requests[first + k].input + "'");
        }
        out.push_back({std::move(text), "remote", latency});
      }
      return out;
    };
    return detail::run_batched(batches, options_.max_in_flight, work);
  }

  std::string_view name() const override { return "remote"; }

 private:
  RemoteOptions options_;
};

}  // namespace gradient
