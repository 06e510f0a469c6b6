#include "obm/error.hpp"

namespace obm {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidLambda: return "InvalidLambda";
    case Errc::InvalidSigma: return "InvalidSigma";
    case Errc::NotErgodic: return "NotErgodic";
    case Errc::NotN0: return "NotN0";
    case Errc::NotN1: return "NotN1";
    case Errc::UnsupportedRegime: return "UnsupportedRegime";
    case Errc::NoOccupationPlus: return "NoOccupationPlus";
    case Errc::NoOccupationMinus: return "NoOccupationMinus";
    case Errc::DomainError: return "DomainError";
    case Errc::EmptySample: return "EmptySample";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::ScenarioMismatch: return "ScenarioMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::NonUniformGrid: return "NonUniformGrid";
  }
  return "Unknown";
}

}  // namespace obm
