#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stochform {

enum class ErrorKind {
  ZeroVector,
  NonFinite,
  ManifoldMismatch,
  DomainViolation,
  SingularProximity,
  SpecMismatch,
  NonClosedForm,
  EmptyAfterBurnIn,
  InvalidArgument,
  StepTooLarge,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library error. Carries the failing step and/or path index when the error
/// surfaced inside a simulation loop.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> step_index() const noexcept { return step_; }
  std::optional<std::size_t> path_index() const noexcept { return path_; }

  Error with_step(std::size_t step) const {
    Error e(kind_, detail() + " (step " + std::to_string(step) + ")", step, path_);
    return e;
  }
  Error with_path(std::size_t path) const {
    Error e(kind_, detail() + " (path " + std::to_string(path) + ")", step_, path);
    return e;
  }

 private:
  Error(ErrorKind kind, const std::string& detail, std::optional<std::size_t> step,
        std::optional<std::size_t> path)
      : Error(kind, detail) {
    step_ = step;
    path_ = path;
  }
  std::string detail() const {
    std::string s = what();
    auto prefix = std::string(to_string(kind_)) + ": ";
    return s.substr(prefix.size());
  }

  ErrorKind kind_;
  std::optional<std::size_t> step_;
  std::optional<std::size_t> path_;
};

}  // namespace stochform
