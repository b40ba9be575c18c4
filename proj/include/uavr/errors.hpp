#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uavr {

enum class ErrorKind {
  EndpointRetired,
  EmptyInstance,
  InvalidInstance,
  InvalidSchedule,
  NonPositiveDistance,
  SamplingExhausted,
  InstanceTooLarge,
  DimensionMismatch,
  InvalidOrder,
  IoFailure,
  TooFewSamples,
  ConfigInvalid,
  SchemaViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace uavr
