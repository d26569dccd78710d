#include "apcharge/error.hpp"

namespace apcharge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownFormat: return "UnknownFormat";
    case ErrorKind::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::NotCauchy: return "NotCauchy";
    case ErrorKind::NotCauchyL1: return "NotCauchyL1";
    case ErrorKind::NotCauchyLp: return "NotCauchyLp";
    case ErrorKind::NotCauchyLorentz: return "NotCauchyLorentz";
    case ErrorKind::TailNotConvergent: return "TailNotConvergent";
    case ErrorKind::TruncationBoundExceedsTol: return "TruncationBoundExceedsTol";
    case ErrorKind::IncommensurablePeriods: return "IncommensurablePeriods";
    case ErrorKind::IncommensurableUnsupported: return "IncommensurableUnsupported";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NotConverging: return "NotConverging";
    case ErrorKind::AmbiguousFrequency: return "AmbiguousFrequency";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::UnknownFormat:
      return false;
    default:
      return true;
  }
}

}  // namespace apcharge
