#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradient {

enum class ErrorKind {
  usage,
  parse,
  invariant_violation,
  not_found,
  empty_text,
  length_mismatch,
  empty_corpus,
  empty_after_restriction,
  io,
  unreadable_file,
  unknown_format,
  backend_unreachable,
  malformed_response,
  empty_output,
  timeout,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::empty_text: return "empty-text";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::empty_corpus: return "empty-corpus";
    case ErrorKind::empty_after_restriction: return "empty-after-restriction";
    case ErrorKind::io: return "io-error";
    case ErrorKind::unreadable_file: return "unreadable-file";
    case ErrorKind::unknown_format: return "unknown-format";
    case ErrorKind::backend_unreachable: return "backend-unreachable";
    case ErrorKind::malformed_response: return "malformed-response";
    case ErrorKind::empty_output: return "empty-output";
    case ErrorKind::timeout: return "timeout";
  }
  return "unknown";
}

/// True for failures that originate in a remote model backend.
constexpr bool is_backend_error(ErrorKind kind) noexcept {
  return kind == ErrorKind::backend_unreachable || kind == ErrorKind::malformed_response ||
         kind == ErrorKind::empty_output || kind == ErrorKind::timeout;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace gradient
