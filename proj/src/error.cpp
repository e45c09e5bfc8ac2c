#include "mha/error.hpp"

namespace mha {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::PathThroughLeaf: return "PathThroughLeaf";
    case Errc::UnknownPath: return "UnknownPath";
    case Errc::NotANamespace: return "NotANamespace";
    case Errc::NotAVariable: return "NotAVariable";
    case Errc::MonitorWrite: return "MonitorWrite";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::IoError: return "IoError";
    case Errc::LoadError: return "LoadError";
    case Errc::PreparedStateError: return "PreparedStateError";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::DomainError: return "DomainError";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::VectorLengthMismatch: return "VectorLengthMismatch";
    case Errc::MissingACKey: return "MissingACKey";
    case Errc::NonIncreasingFrequencies: return "NonIncreasingFrequencies";
    case Errc::FrequencyOutOfRange: return "FrequencyOutOfRange";
    case Errc::DivisibilityError: return "DivisibilityError";
    case Errc::BadPairIndices: return "BadPairIndices";
    case Errc::EmptyBins: return "EmptyBins";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptHeader: return "CorruptHeader";
    case Errc::ChannelMismatch: return "ChannelMismatch";
    case Errc::SampleRateMismatch: return "SampleRateMismatch";
    case Errc::NotAMonitor: return "NotAMonitor";
    case Errc::InternalError: return "InternalError";
  }
  return "InternalError";
}

}  // namespace mha
