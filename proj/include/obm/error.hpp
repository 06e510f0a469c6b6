#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace obm {

enum class Errc {
  InvalidParams,
  InvalidConfig,
  InvalidLambda,
  InvalidSigma,
  NotErgodic,
  NotN0,
  NotN1,
  UnsupportedRegime,
  NoOccupationPlus,
  NoOccupationMinus,
  DomainError,
  EmptySample,
  TooFewPoints,
  ScenarioMismatch,
  ParseError,
  NonUniformGrid,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace obm
