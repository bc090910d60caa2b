#include "roughiso/errors.hpp"

namespace roughiso {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ImageNotInCodomain: return "ImageNotInCodomain";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::StreamExhausted: return "StreamExhausted";
    case ErrorKind::InsufficientGaps: return "InsufficientGaps";
    case ErrorKind::NotFoundWithinBudget: return "NotFoundWithinBudget";
  }
  return "Unknown";
}

}  // namespace roughiso
