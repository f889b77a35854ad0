#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bpblab {

enum class Errc {
  InvalidArgument,
  Unsupported,
  UnsupportedExponent,
  BadExponent,
  ZeroVector,
  MixedSpaces,
  OutOfRange,
  ZeroOperator,
  DegenerateBasis,
  WrongSpaces,
  NormNotOne,
  InfiniteGroup,
  NotRankOne,
  CodomainDimOne,
  NotAMidpoint,
  DegenerateWitness,
  NotComplementary,
  OrthogonalityFails,
  ZeroOnX2,
  IsIsometry,
  ConditionFails,
  NoZeroRow,
  NotInEnumeration,
  ObstructionFullNormOnComplement,
  BadIndex,
  NotDiscrete,
  UnsupportedPair,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bpblab
