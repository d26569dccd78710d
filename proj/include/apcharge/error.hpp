#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apcharge {

enum class ErrorKind {
  InvalidArgument,
  ParseError,
  UnknownFormat,
  HorizonTooSmall,
  NotCauchy,
  NotCauchyL1,
  NotCauchyLp,
  NotCauchyLorentz,
  TailNotConvergent,
  TruncationBoundExceedsTol,
  IncommensurablePeriods,
  IncommensurableUnsupported,
  GridTooCoarse,
  QuadratureFailure,
  NotConverging,
  AmbiguousFrequency,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for failures of a numerical contract (limits, quadrature,
// commensurability) as opposed to malformed input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace apcharge
