#include "zerofolio/error.hpp"

namespace zerofolio {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedArff: return "MalformedArff";
    case ErrorKind::MalformedManifest: return "MalformedManifest";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::InconsistentScenario: return "InconsistentScenario";
    case ErrorKind::UnknownInstance: return "UnknownInstance";
    case ErrorKind::Io: return "Io";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ColumnMismatch: return "ColumnMismatch";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::NoEmbeddableInstances: return "NoEmbeddableInstances";
    case ErrorKind::CacheCorrupt: return "CacheCorrupt";
    case ErrorKind::AuthError: return "AuthError";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::BackendError: return "BackendError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

MalformedArff::MalformedArff(std::size_t line, const std::string& reason)
    : Error(ErrorKind::MalformedArff, "line " + std::to_string(line) + ": " + reason), line_(line) {}

BackendError::BackendError(ErrorKind kind, int status, const std::string& body_excerpt)
    : Error(kind, "HTTP " + std::to_string(status) + ": " + body_excerpt), status_(status) {}

}  // namespace zerofolio
