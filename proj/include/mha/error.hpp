#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mha {

/// Error categories. The textual name of each code is part of the wire
/// protocol (`(ERR:<code>) <message>`), so renaming one is a protocol change.
enum class Errc {
  DuplicateName,
  PathThroughLeaf,
  UnknownPath,
  NotANamespace,
  NotAVariable,
  MonitorWrite,
  TypeMismatch,
  RangeViolation,
  SyntaxError,
  IoError,
  LoadError,
  PreparedStateError,
  InvalidTransition,
  DomainError,
  ConstraintViolation,
  VectorLengthMismatch,
  MissingACKey,
  NonIncreasingFrequencies,
  FrequencyOutOfRange,
  DivisibilityError,
  BadPairIndices,
  EmptyBins,
  UnsupportedFormat,
  CorruptHeader,
  ChannelMismatch,
  SampleRateMismatch,
  NotAMonitor,
  InternalError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mha
