#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roughiso {

enum class ErrorKind {
  ImageNotInCodomain,
  PreconditionViolated,
  HorizonTooSmall,
  BudgetExceeded,
  DomainMismatch,
  EmptyWindow,
  StreamExhausted,
  InsufficientGaps,
  NotFoundWithinBudget,
};

std::string_view to_string(ErrorKind kind);

/// Library error carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace roughiso
