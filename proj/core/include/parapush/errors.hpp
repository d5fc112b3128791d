#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parapush {

/// A precondition on an argument was violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One violated SceneSpec invariant.
struct FieldIssue {
  std::string field;
  std::string message;
};

/// Scene validation failed; carries every violated invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues);

  [[nodiscard]] const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// The fine simulator produced a non-finite force or state.
class SimulationUnstable : public std::runtime_error {
 public:
  SimulationUnstable(std::size_t substep, const std::string& what)
      : std::runtime_error("simulation unstable at substep " + std::to_string(substep) + ": " +
                           what),
        substep_(substep) {}

  [[nodiscard]] std::size_t substep() const noexcept { return substep_; }

 private:
  std::size_t substep_;
};

/// A rollout failed at control index `step`; wraps the originating message.
class RolloutError : public std::runtime_error {
 public:
  RolloutError(std::size_t step, const std::string& what)
      : std::runtime_error("rollout failed at step " + std::to_string(step) + ": " + what),
        step_(step) {}

  [[nodiscard]] std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Every sampled rollout in an optimizer iteration failed.
class OptimizationFailed : public std::runtime_error {
 public:
  OptimizationFailed(std::string what, std::vector<std::string> diagnostics)
      : std::runtime_error(std::move(what)), diagnostics_(std::move(diagnostics)) {}

  [[nodiscard]] const std::vector<std::string>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace parapush
