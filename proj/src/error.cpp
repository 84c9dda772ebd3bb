#include "maxpart/error.hpp"

namespace maxpart {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::BoxCapExceeded: return "BoxCapExceeded";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TailBoundFailure: return "TailBoundFailure";
    case ErrorKind::SingularSigma: return "SingularSigma";
    case ErrorKind::MemoryCapExceeded: return "MemoryCapExceeded";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::MaxTriesExceeded: return "MaxTriesExceeded";
    case ErrorKind::WindowUncovered: return "WindowUncovered";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace maxpart
