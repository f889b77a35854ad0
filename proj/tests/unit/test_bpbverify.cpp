#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>
#include <bpblab/error.hpp>

#include <gtest/gtest.h>

using namespace bpblab;

namespace {

SpaceSpec sp(const char* p, int n) { return SpaceSpec(Exponent::parse(p), n); }
OperatorMatrix op(Eigen::MatrixXd a, const char* p, const char* q = nullptr) {
  auto d = sp(p, static_cast<int>(a.cols()));
  auto c = sp(q ? q : p, static_cast<int>(a.rows()));
  return OperatorMatrix(std::move(a), d, c);
}
Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}
using S = BpbCertificate::Status;

}  // namespace

TEST(Certificate, ConstructedPairIsCertified) {
  auto r = linf_extreme_approx(op(m2(1, 0, 1, 0), "inf"), 0.2);
  auto c = verify_uniform_bpb(r.original, r.approximant, 0.2, 4096);
  EXPECT_EQ(c.status, S::Certified);
  ASSERT_TRUE(c.delta_found.has_value());
  EXPECT_GT(*c.delta_found, 0);
  EXPECT_NEAR(c.operator_distance, 0.1, 1e-12);
}

TEST(Certificate, SelfApproximation) {
  auto T = op(m2(1, 0, 0, 0.5), "2");
  auto c = verify_uniform_bpb(T, T, 0.1, 4096);
  EXPECT_EQ(c.status, S::Certified);
  EXPECT_EQ(c.operator_distance, 0.0);
}

// f = e1 on l_inf^2 attains on the whole edge x1 = 1; a nearby g attains only at a vertex.
TEST(Certificate, ExtremeFunctionalFalsified) {
  Eigen::MatrixXd f(1, 2), g(1, 2);
  f << 1, 0;
  g << 0.95, 0.05;
  auto F = OperatorMatrix(f, sp("inf", 2), sp("1", 1));
  auto G = OperatorMatrix(g, sp("inf", 2), sp("1", 1));
  auto c = verify_uniform_bpb(F, G, 0.2, 4096);
  EXPECT_EQ(c.status, S::Falsified);
  ASSERT_TRUE(c.counterexample.has_value());
  // The offending point sits near the vertex (1,-1), at l_inf distance 2 from (1,1).
  EXPECT_GT(c.worst_distance, 0.2);
}

TEST(Certificate, FarApproximantFalsified) {
  auto T = op(m2(1, 0, 0, 0.5), "2");
  auto A = op(m2(0.5, 0, 0, 1), "2");
  EXPECT_EQ(verify_uniform_bpb(T, A, 0.1, 1024).status, S::Falsified);
}

TEST(OnlyApproximation, SignedPermutationIsRigid) {
  auto r = is_only_approximation(op(m2(0, 1, -1, 0), "inf"), 0.1, 200, 42, 1024);
  EXPECT_FALSE(r.counterexample_found);
  EXPECT_EQ(r.trials_run, 200);
}

TEST(OnlyApproximation, NonExtremeHasAnotherApproximation) {
  auto r = is_only_approximation(op(m2(1, 0, 0, 0.5), "inf"), 0.3, 200, 42, 1024);
  EXPECT_TRUE(r.counterexample_found);
  ASSERT_TRUE(r.approximant.has_value());
  EXPECT_LT(operator_distance(op(m2(1, 0, 0, 0.5), "inf"), *r.approximant), 0.3);
  EXPECT_THROW(is_only_approximation(op(m2(1, 0, 0, 0.5), "inf"), 0.3, 0, 42, 1024), Error);
}

TEST(BallInclusion, Examples) {
  auto r = linf_extreme_approx(op(m2(1, 0, 1, 0), "inf"), 0.2);
  EXPECT_TRUE(check_ball_inclusion(r.original, r.approximant, 1e-3, 1024));
  auto t = tilted_projection_demo(0.2);
  const double s = 1 - 0.04 / 16, c = std::sqrt(1 - s * s);
  // M_T = {+-e1}, M_A = {+-(s, c)}; the gap between them is |(1,0) - (s,c)|.
  const double gap = std::hypot(1 - s, c);
  EXPECT_TRUE(check_ball_inclusion(t.original, t.approximant, 2 * gap, 1024));
  EXPECT_FALSE(check_ball_inclusion(t.original, t.approximant, gap / 10, 1024));
}

TEST(PropertyP, HilbertComplement) {
  auto w = property_p_witness(op(m2(1, 0, 0, 0.5), "2"));
  EXPECT_EQ(w.strategy, "complement");
  EXPECT_NEAR(std::abs(w.x_a.coords(1)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(w.r0, 1.0);
  EXPECT_GE(w.distance_to_attainment, 1.0);
}

TEST(PropertyP, LinfFacet) {
  auto A = op(m2(1, 0, 1, 0), "inf");
  auto w = property_p_witness(A);
  EXPECT_EQ(w.strategy, "facet");
  EXPECT_NEAR(w.x_a.norm(), 1.0, 1e-12);
  EXPECT_GE(w.distance_to_attainment, w.r0);
  EXPECT_GT(w.r0, 0);
  // The point lies in the relative interior of a facet disjoint from the faces x1 = +-1.
  EXPECT_NEAR(std::abs(w.x_a.coords(1)), 1.0, 1e-12);
  EXPECT_LT(std::abs(w.x_a.coords(0)), 1.0);
}

TEST(PropertyP, L3ArcWitness) {
  auto A = op(m2(1, 1, 1, -1), "3");
  auto n = op_norm(A).value;
  auto w = property_p_witness(op(A.entries / n, "3"));
  EXPECT_EQ(w.strategy, "arc");
  EXPECT_LE(w.attainment_size, 2u * (8 * 3 - 5));
  EXPECT_GT(w.r0, 0);
  EXPECT_GE(w.distance_to_attainment, w.r0);
}

TEST(PropertyP, IsometryRejected) {
  EXPECT_THROW(property_p_witness(op(Eigen::MatrixXd::Identity(2, 2), "3")), Error);
}

TEST(Epsilon0, P3) {
  auto r = epsilon0_lp2(3);
  EXPECT_NEAR(r.separation, std::pow(2.0, 2.0 / 3), 1e-15);
  EXPECT_NEAR(r.separation, 1.5874, 1e-4);
  EXPECT_GT(r.delta1, 0);
  EXPECT_NEAR(r.arc, r.length / 78, 1e-12);
  EXPECT_DOUBLE_EQ(r.eps0, std::min(r.separation, r.delta1));
}

// Pairwise isometry distances on l_4^2 computed by a grid norm scan.
TEST(Epsilon0, IsometryDistancesOnL4) {
  auto iso = enumerate_isometries(sp("4", 2));
  const double a = std::pow(2.0, 0.75);
  for (std::size_t i = 0; i < iso.size(); ++i)
    for (std::size_t j = i + 1; j < iso.size(); ++j) {
      const double d = operator_distance(iso[i], iso[j]);
      EXPECT_TRUE(std::abs(d - a) < 1e-8 || std::abs(d - 2) < 1e-8) << d;
    }
}

TEST(HilbertChecks, ConstructedPairPasses) {
  Eigen::MatrixXd d = Eigen::Vector3d(1, 1, 0.5).asDiagonal();
  auto r = hilbert_rotate_approx(op(d, "2"), 0.1);
  auto h = hilbert_necessary_checks(r.original, r.approximant, 0.1, 1024);
  EXPECT_TRUE(h.all());
  EXPECT_EQ(h.dim_h0, 2);
  EXPECT_EQ(h.dim_h, 2);
}

TEST(HilbertChecks, TiltedPairDimensions) {
  auto t = tilted_projection_demo(0.2);
  auto h = hilbert_necessary_checks(t.original, t.approximant, 0.2, 1024);
  EXPECT_TRUE(h.dims_equal);
  EXPECT_EQ(h.dim_h0, 1);
  EXPECT_EQ(h.dim_h, 1);
}

TEST(HilbertChecks, OrthogonalAttainmentFails) {
  auto T = op(m2(1, 0, 0, 0.95), "2");
  auto A = op(m2(0.95, 0, 0, 1), "2");
  auto h = hilbert_necessary_checks(T, A, 0.1, 1024);
  EXPECT_FALSE(h.all());
  EXPECT_FALSE(h.intersections_trivial && h.inclusion);
}

TEST(Sweep, SmallPairsAllCertified) {
  auto a = pair_property_sweep(sp("2", 2), sp("2", 2), {0.2}, 12, 5, 1024, 1);
  EXPECT_EQ(a.certified, a.cases);
  EXPECT_GT(a.cases, 0u);
  auto b = pair_property_sweep(sp("2", 2), sp("2", 2), {0.2}, 12, 5, 1024, 3);
  EXPECT_EQ(a.cases, b.cases);
  EXPECT_EQ(a.certified, b.certified);
  EXPECT_EQ(a.preserved, b.preserved);
}

TEST(Sweep, Linf3L13IncludesEnumeration) {
  auto r = pair_property_sweep(sp("inf", 3), sp("1", 3), {0.2}, 4, 1, 512, 1);
  EXPECT_EQ(r.enumerated, 90u);
  EXPECT_EQ(r.certified, r.cases);
}

TEST(Cardinality, FinitePointSets) {
  auto T = op(m2(1, 1, 1, -1) / std::pow(2.0, 0.75), "4");
  EXPECT_EQ(attainment_count(attainment_set(T)), std::optional<std::size_t>(4));
  EXPECT_TRUE(attainment_cardinality_check(T, T, 0.1));
  EXPECT_THROW(attainment_cardinality_check(op(Eigen::MatrixXd::Identity(2, 2), "2"),
                                            op(Eigen::MatrixXd::Identity(2, 2), "2"), 0.1),
               Error);
}
