#include "commonsys/error.hpp"

namespace commonsys {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotOddPrime: return "NotOddPrime";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NoFreeVariables: return "NoFreeVariables";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::NotCentered: return "NotCentered";
    case Errc::TooLarge: return "TooLarge";
    case Errc::MeanConstraintViolated: return "MeanConstraintViolated";
    case Errc::MissingL: return "MissingL";
    case Errc::LTooSmall: return "LTooSmall";
    case Errc::DegenerateT: return "DegenerateT";
    case Errc::InfeasibleMean: return "InfeasibleMean";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::NotExactlyOneRoot: return "NotExactlyOneRoot";
    case Errc::DepthExhausted: return "DepthExhausted";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::NoSuchL: return "NoSuchL";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace commonsys
