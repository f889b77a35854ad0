#pragma once

#include "bpblab/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bpblab {

/// Row i of the matrix has a single nonzero entry signs[i] in column perm[i].
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  int size() const noexcept { return static_cast<int>(perm.size()); }
  Eigen::MatrixXd matrix() const;
  SignedPermutation inverse() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

/// All 2^n n! signed permutations in a fixed order.
std::vector<SignedPermutation> signed_permutations(int n);

struct ExtremalityVerdict {
  enum class Status { Extreme, NotExtreme, NecessaryConditionOnly };
  Status status = Status::Extreme;
  std::string method;  // "lp" or "perturbation"
  /// For NotExtreme: D != 0 with ||T + D|| <= 1 and ||T - D|| <= 1.
  std::optional<Eigen::MatrixXd> witness;
  /// For NecessaryConditionOnly: whether the row/column necessary condition holds,
  /// when one applies to the pair.
  std::optional<bool> condition;
};

std::string_view to_string(ExtremalityVerdict::Status s);

/// Every row has exactly one nonzero entry, and it is +-1 (l_inf^n -> l_inf^n).
bool linf_row_condition(const OperatorMatrix& T);
/// Every column has exactly one nonzero entry, and it is +-1 (l_1^n -> l_1^n).
bool l1_column_condition(const OperatorMatrix& T);

ExtremalityVerdict is_extreme_contraction(const OperatorMatrix& T, std::uint64_t seed = 1);

bool is_signed_permutation(const Eigen::MatrixXd& a);
bool is_isometry(const OperatorMatrix& T);
std::vector<OperatorMatrix> enumerate_isometries(const SpaceSpec& s);

struct OrbitMember {
  OperatorMatrix matrix;
  SignedPermutation left;   // acts on the codomain
  SignedPermutation right;  // acts on the domain
};

/// {L A R} over signed permutations L, R, deduplicated after rounding to 12 digits.
std::vector<OrbitMember> equivalence_orbit(const OperatorMatrix& A);

struct ExtremeMember {
  OperatorMatrix matrix;
  int orbit;  // 0: rank-one orbit, 1: two-by-two block orbit
  SignedPermutation left;
  SignedPermutation right;
};

/// The two canonical extreme contractions of l_inf^3 -> l_1^3.
OperatorMatrix linf3_l13_rank_one_canonical();
OperatorMatrix linf3_l13_block_canonical();

/// All extreme contractions of l_inf^3 -> l_1^3: the two orbits joined, rank-one first.
std::vector<ExtremeMember> enumerate_extreme_linf3_l13();

/// The enumeration entry equal to T, if any.
std::optional<ExtremeMember> find_extreme_linf3_l13(const OperatorMatrix& T);

}  // namespace bpblab
