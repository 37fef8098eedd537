#pragma once

#include <stdexcept>
#include <string>

namespace zerofolio {

enum class ErrorKind {
  MalformedArff,
  MalformedManifest,
  MissingFile,
  InconsistentScenario,
  UnknownInstance,
  Io,
  DimensionMismatch,
  LengthMismatch,
  ColumnMismatch,
  EmptyTrainingSet,
  InvalidAlpha,
  InvalidArgument,
  DegenerateGap,
  NoEmbeddableInstances,
  CacheCorrupt,
  AuthError,
  RateLimited,
  BackendError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the category
/// so callers (the CLI in particular) can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the ARFF reader; `line()` is 1-based.
class MalformedArff : public Error {
 public:
  MalformedArff(std::size_t line, const std::string& reason);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by the remote backend for non-retryable or exhausted HTTP failures.
class BackendError : public Error {
 public:
  BackendError(ErrorKind kind, int status, const std::string& body_excerpt);

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace zerofolio
