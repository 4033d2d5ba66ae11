#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fivebar {

enum class ErrorKind {
  Unreachable,
  ModeBoundary,
  NoAssembly,
  SingularSolve,
  UnknownAspect,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::ModeBoundary: return "ModeBoundary";
    case ErrorKind::NoAssembly: return "NoAssembly";
    case ErrorKind::SingularSolve: return "SingularSolve";
    case ErrorKind::UnknownAspect: return "UnknownAspect";
  }
  return "Unknown";
}

// Raised by the throwing entry points; the non-throwing try_* variants
// return the same kind through Result.
class KinematicError : public std::runtime_error {
 public:
  KinematicError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad construction arguments (non-positive lengths, malformed modes, ...).
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Minimal value-or-error holder for hot loops where exceptions are too costly.
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(ErrorKind kind, std::string detail = {}) : error_(kind), detail_(std::move(detail)) {}

  bool ok() const noexcept { return value_.has_value(); }
  explicit operator bool() const noexcept { return ok(); }

  ErrorKind error() const { return *error_; }
  const std::string& detail() const noexcept { return detail_; }

  const T& value() const& {
    if (!value_) throw KinematicError(*error_, detail_);
    return *value_;
  }
  T&& value() && {
    if (!value_) throw KinematicError(*error_, detail_);
    return std::move(*value_);
  }
  const T& operator*() const& { return *value_; }
  const T* operator->() const { return &*value_; }

 private:
  std::optional<T> value_;
  std::optional<ErrorKind> error_;
  std::string detail_;
};

}  // namespace fivebar
