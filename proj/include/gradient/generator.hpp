#pragma once

#include <chrono>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradient/error.hpp"
#include "gradient/prefix.hpp"

namespace gradient {

inline constexpr int kDefaultMaxLength = 128;

struct GenerationRequest {
  /// Prefix-encoded model input line.
  std::string input;
  int max_length = kDefaultMaxLength;
};

struct GenerationResult {
  std::string output;
  std::string backend;
  long long latency_ms = 0;
};

class Generator {
 public:
  virtual ~Generator() = default;

  GenerationResult generate(const GenerationRequest& request) const {
    return generate_batch(std::span<const GenerationRequest>(&request, 1)).front();
  }

  /// Results are returned in request order.
  virtual std::vector<GenerationResult> generate_batch(std::span<const GenerationRequest> requests) const = 0;
  virtual std::string_view name() const = 0;
};

namespace detail {

class Stopwatch {
 public:
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Returns the body of the prefixed input unchanged.
class EchoGenerator final : public Generator {
 public:
  std::vector<GenerationResult> generate_batch(std::span<const GenerationRequest> requests) const override {
    std::vector<GenerationResult> out;
    out.reserve(requests.size());
    for (const auto& req : requests) {
      const detail::Stopwatch clock;
      auto body = decode(req.input).body;
      out.push_back({std::move(body), "echo", clock.elapsed_ms()});
    }
    return out;
  }

  std::string_view name() const override { return "echo"; }
};

/// Test backend: looks up the reference target text for the request's body.
class TargetOracleGenerator final : public Generator {
 public:
  TargetOracleGenerator() = default;
  explicit TargetOracleGenerator(std::map<std::string, std::string> table) : table_(std::move(table)) {}

  void add(const std::string& source, const std::string& target) { table_[source] = target; }

  std::vector<GenerationResult> generate_batch(std::span<const GenerationRequest> requests) const override {
    std::vector<GenerationResult> out;
    out.reserve(requests.size());
    for (const auto& req : requests) {
      const detail::Stopwatch clock;
      const auto body = decode(req.input).body;
      const auto it = table_.find(body);
      if (it == table_.end() || it->second.empty()) {
        throw Error(ErrorKind::empty_output, "oracle has no target for '" + body + "'");
      }
      out.push_back({it->second, "oracle", clock.elapsed_ms()});
    }
    return out;
  }

  std::string_view name() const override { return "oracle"; }

 private:
  std::map<std::string, std::string> table_;
};

}  // namespace gradient
