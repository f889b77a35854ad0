#pragma once

#include "bpblab/approximants.hpp"
#include "bpblab/operators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bpblab {

/// Sampling-relative verdict on whether A is a uniform eps-BPB approximation of T.
struct BpbCertificate {
  enum class Status { Certified, Falsified, Inconclusive };

  Status status = Status::Inconclusive;
  double eps = 0.0;
  std::optional<double> delta_found;
  int resolution = 0;
  std::size_t samples = 0;
  double operator_distance = 0.0;  // ||T - A||
  double worst_distance = 0.0;     // max dist(z, M_A) over sampled z in M_T(delta)
  std::optional<Point> counterexample;
};

std::string_view to_string(BpbCertificate::Status s);

BpbCertificate verify_uniform_bpb(const OperatorMatrix& T, const OperatorMatrix& A, double eps, int resolution);

struct OnlyApproximationResult {
  bool counterexample_found = false;
  int trials_run = 0;
  std::optional<OperatorMatrix> approximant;
  std::optional<BpbCertificate> certificate;
};

/// Norm-one perturbations A of T with ||T - A|| < eps; the first certified one is returned.
/// When T is not extreme the first trial moves along its extremality witness, the rest
/// are random. Absence of a counterexample is evidence only.
OnlyApproximationResult is_only_approximation(const OperatorMatrix& T, double eps, int trials, std::uint64_t seed,
                                              int resolution);

/// Every point of M_A (representatives and samples) lies within `radius` of M_T.
bool check_ball_inclusion(const OperatorMatrix& T, const OperatorMatrix& A, double radius, int resolution);

struct PropertyPWitness {
  OperatorMatrix op;
  Point x_a;
  double r0;
  std::string strategy;  // "facet", "arc" or "complement"
  double distance_to_attainment;
  std::size_t attainment_size;  // |M_A| when finite, else 0
};

PropertyPWitness property_p_witness(const OperatorMatrix& A);

struct Epsilon0Report {
  long long p;
  double separation;  // 2^((p-1)/p), the minimal distance between distinct isometries
  double length;      // Euclidean length of the l_p circle
  double arc;         // L / (2(16p - 9))
  double delta1;      // arc-length constant at `arc`
  double eps0;
  int cells;          // arc table cells per octant, 0 when refined adaptively
};

/// With `cells` unset the arc table is refined until it settles.
Epsilon0Report epsilon0_lp2(long long p, std::optional<int> cells = std::nullopt);

struct HilbertChecks {
  int dim_h0 = 0;
  int dim_h = 0;
  bool dims_equal = false;
  bool intersections_trivial = false;
  bool disjunction = false;
  bool inclusion = false;
  int grid_points = 0;

  bool all() const noexcept { return dims_equal && intersections_trivial && disjunction && inclusion; }
};

HilbertChecks hilbert_necessary_checks(const OperatorMatrix& T, const OperatorMatrix& A, double eps, int resolution);

struct SweepCase {
  OperatorMatrix op;
  double eps;
  std::string route;
  bool certified = false;
  bool preserved = false;
  std::string failure;
};

struct SweepReport {
  SpaceSpec x;
  SpaceSpec y;
  std::size_t cases = 0;
  std::size_t certified = 0;
  std::size_t preserved = 0;
  std::size_t skipped_isometries = 0;
  std::size_t enumerated = 0;
  std::vector<SweepCase> failures;
};

/// Random norm-one non-isometries plus any known extreme-contraction enumeration,
/// each routed to a constructor and verified. Results do not depend on `threads`.
SweepReport pair_property_sweep(const SpaceSpec& x, const SpaceSpec& y, const std::vector<double>& eps_list,
                                int trials, std::uint64_t seed, int resolution, int threads = 1);

/// Routes a norm-one non-isometry to the constructor that applies to it.
ApproximantReport route_approximant(const OperatorMatrix& T, double eps, std::string* route = nullptr);

/// |M_A| >= |M_T| for finite M_T; requires eps below half the minimal gap of M_T.
bool attainment_cardinality_check(const OperatorMatrix& T, const OperatorMatrix& A, double eps);

/// Number of points of a finite attainment set, or nothing when it is a continuum.
std::optional<std::size_t> attainment_count(const AttainmentSet& m);

}  // namespace bpblab
