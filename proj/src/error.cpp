#include "homodyne/error.hpp"

namespace homodyne {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter: return "ParameterError";
    case ErrorKind::ModeOutOfRange: return "ModeOutOfRange";
    case ErrorKind::ZeroSignal: return "ZeroSignal";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::MixedState: return "MixedState";
    case ErrorKind::NoThreshold: return "NoThreshold";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace homodyne
