#include "bpblab/error.hpp"

namespace bpblab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Unsupported: return "Unsupported";
    case Errc::UnsupportedExponent: return "UnsupportedExponent";
    case Errc::BadExponent: return "BadExponent";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::MixedSpaces: return "MixedSpaces";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ZeroOperator: return "ZeroOperator";
    case Errc::DegenerateBasis: return "DegenerateBasis";
    case Errc::WrongSpaces: return "WrongSpaces";
    case Errc::NormNotOne: return "NormNotOne";
    case Errc::InfiniteGroup: return "InfiniteGroup";
    case Errc::NotRankOne: return "NotRankOne";
    case Errc::CodomainDimOne: return "CodomainDimOne";
    case Errc::NotAMidpoint: return "NotAMidpoint";
    case Errc::DegenerateWitness: return "DegenerateWitness";
    case Errc::NotComplementary: return "NotComplementary";
    case Errc::OrthogonalityFails: return "OrthogonalityFails";
    case Errc::ZeroOnX2: return "ZeroOnX2";
    case Errc::IsIsometry: return "IsIsometry";
    case Errc::ConditionFails: return "ConditionFails";
    case Errc::NoZeroRow: return "NoZeroRow";
    case Errc::NotInEnumeration: return "NotInEnumeration";
    case Errc::ObstructionFullNormOnComplement: return "ObstructionFullNormOnComplement";
    case Errc::BadIndex: return "BadIndex";
    case Errc::NotDiscrete: return "NotDiscrete";
    case Errc::UnsupportedPair: return "UnsupportedPair";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace bpblab
