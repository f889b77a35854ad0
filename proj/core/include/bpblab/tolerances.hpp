#pragma once

namespace bpblab::tol {

// Relative tolerance for norm equalities (attainment, unit-norm checks).
inline constexpr double kEq = 1e-9;
// Stopping width for one-dimensional convex/unimodal searches.
inline constexpr double kOpt = 1e-10;
// Step used to probe strong Birkhoff-James orthogonality.
inline constexpr double kProbe = 1e-6;
// Relative singular-value gap deciding the dimension of the attainment subspace.
inline constexpr double kGap = 1e-8;
// Two attaining points closer than this are merged.
inline constexpr double kDedup = 1e-5;
// Smallest delta tried by the certificate search, relative to the operator norm.
inline constexpr double kDeltaMin = 1e-6;

inline constexpr int kDefaultResolution = 4096;

}  // namespace bpblab::tol
