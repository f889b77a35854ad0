#pragma once

#include "bpblab/spaces.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace bpblab {

/// An m x n matrix acting from `domain` (dimension n) to `codomain` (dimension m).
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  SpaceSpec domain;
  SpaceSpec codomain;

  OperatorMatrix(Eigen::MatrixXd a, SpaceSpec dom, SpaceSpec cod);

  int rows() const noexcept { return static_cast<int>(entries.rows()); }
  int cols() const noexcept { return static_cast<int>(entries.cols()); }
  /// ||T x|| measured in the codomain.
  double image_norm(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  bool same_spaces(const OperatorMatrix& other) const noexcept {
    return domain == other.domain && codomain == other.codomain;
  }
};

struct NormResult {
  double value;
  Point witness;
};

NormResult op_norm(const OperatorMatrix& T);
/// ||A - B|| in the operator norm of the common pair of spaces.
double operator_distance(const OperatorMatrix& a, const OperatorMatrix& b);

/// M_T in one of three exact shapes.
struct AttainmentSet {
  enum class Kind { FaceUnion, PointPairs, Subspace };

  Kind kind = Kind::PointPairs;
  SpaceSpec space;
  double norm = 0.0;
  std::vector<Face> faces;    // maximal faces, sorted by pattern
  std::vector<Point> points;  // +x followed by -x, canonical representative first
  Eigen::MatrixXd basis;      // orthonormal columns
  /// For Subspace: relative gap between the last kept and first dropped singular value.
  double singular_gap = 0.0;

  bool full_sphere() const noexcept { return kind == Kind::Subspace && basis.cols() == space.n; }
  std::size_t pair_count() const noexcept { return points.size() / 2; }
  /// Finitely many unit vectors that lie in the set: face vertices and centres,
  /// the listed points, or +/- basis vectors.
  std::vector<Point> representatives() const;
};

AttainmentSet attainment_set(const OperatorMatrix& T);
double distance(const Point& x, const AttainmentSet& m);
bool same_attainment(const AttainmentSet& a, const AttainmentSet& b, double tol = 1e-6);

/// Resolution used when none is given; BPBLAB_DEFAULT_RESOLUTION overrides 4096.
int default_resolution();

/// A deterministic finite sample of the unit sphere of `s` with roughly `resolution` points.
std::vector<Point> sphere_samples(const SpaceSpec& s, int resolution, std::uint64_t seed = 0x5eed);

/// Sampled M_T(delta): unit vectors z with ||Tz|| > ||T|| - delta.
std::vector<Point> approx_attainment(const OperatorMatrix& T, double delta, int resolution);

/// Outcome of the geometric descent for delta.
struct DeltaSearch {
  bool found = false;
  double delta = 0.0;
  double worst_distance = 0.0;
  std::optional<Point> counterexample;
  int resolution = 0;
  std::size_t samples = 0;
};

/// Largest delta = ||T|| 2^-k with every sampled z in M_T(delta) within eps of `target`.
DeltaSearch delta_search(const OperatorMatrix& T, const AttainmentSet& target, double eps, int resolution);
DeltaSearch delta_for_epsilon(const OperatorMatrix& T, double eps, int resolution);

/// sup ||Tz|| over unit z in the column span of `basis`.
double restricted_norm(const OperatorMatrix& T, const Eigen::MatrixXd& basis);

bool is_smooth_operator(const OperatorMatrix& T);

}  // namespace bpblab
