#pragma once

#include "bpblab/operators.hpp"

#include <optional>
#include <string>

namespace bpblab {

/// A constructed approximant A of T together with both attainment sets.
struct ApproximantReport {
  OperatorMatrix original;
  OperatorMatrix approximant;
  double eps;
  double distance;  // ||T - A||
  AttainmentSet attainment_original;
  AttainmentSet attainment_approximant;
  bool attainment_preserved;
  std::string construction;
};

/// T = w f^T of rank one; A = u f^T with u on the codomain sphere, ||u - w|| = eps/4.
ApproximantReport rank_one_approx(const OperatorMatrix& T, double eps);

/// T = (T1 + T2)/2; A = (1 - 1/n) T + T1/n for the smallest n > 1 with ||T - T1||/n < eps.
ApproximantReport convex_witness_approx(const OperatorMatrix& T, const OperatorMatrix& T1,
                                        const OperatorMatrix& T2, double eps);

/// Domain = X1 (+) X2 with M_T inside X1; A shrinks the X2 part by 1 - 1/n, 2/n < eps.
ApproximantReport direct_sum_shrink_approx(const OperatorMatrix& T, const Eigen::MatrixXd& x1,
                                           const Eigen::MatrixXd& x2, double eps);

/// l_inf^n -> l_inf^n operators with one +-1 per row that are not isometries.
ApproximantReport linf_extreme_approx(const OperatorMatrix& T, double eps);
/// l_1^n -> l_1^n operators with one +-1 per column that are not isometries.
ApproximantReport l1_extreme_approx(const OperatorMatrix& T, double eps);
/// The 90 extreme contractions of l_inf^3 -> l_1^3.
ApproximantReport linf3_l13_extreme_approx(const OperatorMatrix& T, double eps);

/// l_2 operators with M_T = S_{H0}. H0 defaults to the top singular subspace; a declared
/// H0 is used as given.
ApproximantReport hilbert_rotate_approx(const OperatorMatrix& T, double eps,
                                        const std::optional<Eigen::MatrixXd>& h0 = std::nullopt);

/// T = diag(1, 0) on l_2^2 against the rank-one projection onto (sin t, cos t).
/// Close to T, but its attainment set moves. Default sin t = 1 - eps^2/16.
ApproximantReport tilted_projection_demo(double eps, std::optional<double> theta = std::nullopt);

/// A norm-one functional f on l_p^2 (1 < p < inf), given as a 1 x 2 operator, and the
/// supporting functional of a sphere point near the one f attains at.
ApproximantReport functional_approx_lp2(const OperatorMatrix& f, double eps);

/// P + (1 - 1/n)(I - P) with P the orthogonal projection onto span{x0}.
OperatorMatrix sbpbp_counterexample_family(const Point& x0, long long n);

}  // namespace bpblab
