#pragma once

#include <stdexcept>
#include <string>

namespace vardyn {

enum class ErrorKind {
  Dimension,
  Capacity,
  Parameter,
  Numeric,
  Consistency,
  Validation,
  Singularity,
  Accuracy,
  Integration,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Same kind, message prefixed with `context` (e.g. "step 42").
  Error with_context(const std::string& context) const {
    return Error(kind_, context + ": " + what());
  }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::Consistency: return "internal-consistency error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Singularity: return "singularity error";
    case ErrorKind::Accuracy: return "accuracy error";
    case ErrorKind::Integration: return "integration error";
    case ErrorKind::Config: return "config error";
  }
  return "error";
}

}  // namespace vardyn
