#pragma once

#include <stdexcept>
#include <string>

namespace sgce {

// Base class for all library failures. `kind()` is a stable machine-readable tag
// used in CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error("parse_error", message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error("validation_error", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config_error", message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message) : Error("numerical_error", message) {}
};

class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& message) : Error("inconsistency_error", message) {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& message) : Error("limit_error", message) {}
};

class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& message, double best_bound)
      : Error("timeout", message), best_bound_(best_bound) {}

  // Largest lower bound on the optimum proven before the deadline.
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

class MissingArtifactError : public Error {
 public:
  explicit MissingArtifactError(const std::string& path)
      : Error("missing_artifact", "missing artifact: " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace sgce
