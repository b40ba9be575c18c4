#include "uavr/errors.hpp"

namespace uavr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EndpointRetired: return "EndpointRetired";
    case ErrorKind::EmptyInstance: return "EmptyInstance";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace uavr
