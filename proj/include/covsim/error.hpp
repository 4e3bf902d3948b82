#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace covsim {

enum class ErrorCode {
  validation,         // a config or parameter value violates its range
  input,              // malformed or inconsistent input files / references
  not_found,          // unknown scenario, county or resource
  history_violation,  // a branch tried to rewrite days before its branch point
  out_of_range,       // day or metric outside the valid domain
  horizon_exceeded,   // a county was stepped past the end of its curve
  empty_curve,        // prevalence curve requested with horizon 0
  io,                 // file system failure
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::input: return "input_error";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::history_violation: return "history_violation";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::horizon_exceeded: return "horizon_exceeded";
    case ErrorCode::empty_curve: return "empty_curve";
    case ErrorCode::io: return "io_error";
  }
  return "unknown";
}

/// One field-level (or line-level) problem attached to an Error.
struct Diagnostic {
  std::string field;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// The single exception type thrown by the library. Validation style errors
/// carry every violated field in `details`, not just the first one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<Diagnostic> details = {})
      : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<Diagnostic>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<Diagnostic> details_;
};

// Collects diagnostics and throws them all at once.
class DiagnosticSink {
 public:
  void add(std::string field, std::string message) {
    items_.push_back({std::move(field), std::move(message)});
  }
  void merge(const std::vector<Diagnostic>& other) {
    items_.insert(items_.end(), other.begin(), other.end());
  }
  bool empty() const noexcept { return items_.empty(); }
  const std::vector<Diagnostic>& items() const noexcept { return items_; }

  void throw_if_any(ErrorCode code, std::string_view what) const {
    if (items_.empty()) return;
    std::string message(what);
    message += ": ";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (i) message += "; ";
      message += items_[i].field + ": " + items_[i].message;
    }
    throw Error(code, std::move(message), items_);
  }

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace covsim
