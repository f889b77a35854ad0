#include <bpblab/approximants.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>
#include <bpblab/error.hpp>

#include <gtest/gtest.h>

#include <random>

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

void expect_contract(const ApproximantReport& r) {
  EXPECT_LT(r.distance, r.eps);
  EXPECT_NEAR(op_norm(r.approximant).value, 1.0, 1e-9);
  EXPECT_FALSE(r.approximant.entries.isApprox(r.original.entries, 1e-14));
  EXPECT_NEAR(operator_distance(r.original, r.approximant), r.distance, 1e-9);
}

}  // namespace

TEST(RankOne, HilbertRotation) {
  auto r = rank_one_approx(op(m2(1, 0, 0, 0), "2"), 0.1);
  expect_contract(r);
  EXPECT_NEAR(r.distance, 0.025, 1e-9);
  EXPECT_TRUE(r.attainment_preserved);
  // A = u e1^T with u a unit vector at Euclidean distance 0.025 from e1.
  EXPECT_NEAR(r.approximant.entries.col(0).norm(), 1.0, 1e-12);
  EXPECT_NEAR((r.approximant.entries.col(0) - Eigen::Vector2d(1, 0)).norm(), 0.025, 1e-9);
  EXPECT_TRUE(r.approximant.entries.col(1).isZero());
}

TEST(RankOne, LinfKeepsFace) {
  auto r = rank_one_approx(op(m2(1, 0, 0, 0), "inf"), 0.2);
  expect_contract(r);
  EXPECT_TRUE(r.attainment_preserved);
  ASSERT_EQ(r.attainment_approximant.kind, AttainmentSet::Kind::FaceUnion);
  EXPECT_EQ(r.attainment_approximant.faces.size(), 2u);
}

TEST(ConvexWitness, Example) {
  auto T = op(m2(1, 0, 0, 0), "inf");
  auto r = convex_witness_approx(T, op(m2(1, 0, 0, 0.5), "inf"), op(m2(1, 0, 0, -0.5), "inf"), 0.1);
  expect_contract(r);
  EXPECT_TRUE(r.approximant.entries.isApprox(m2(1, 0, 0, 1.0 / 12)));
  EXPECT_NEAR(r.distance, 0.5 / 6, 1e-12);
  EXPECT_TRUE(r.attainment_preserved);
}

TEST(ConvexWitness, RejectsNonMidpoint) {
  auto T = op(m2(1, 0, 0, 0), "inf");
  EXPECT_THROW(convex_witness_approx(T, op(m2(1, 0, 0, 0.5), "inf"), op(m2(1, 0, 0, 0.5), "inf"), 0.1), Error);
}

TEST(DirectSum, HilbertDiagonal) {
  auto T = op(m2(1, 0, 0, 0.5), "2");
  auto r = direct_sum_shrink_approx(T, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), 0.1);
  expect_contract(r);
  EXPECT_TRUE(r.attainment_preserved);
  EXPECT_NEAR(r.approximant.entries(0, 0), 1.0, 1e-15);
  const double n = 1 / (1 - r.approximant.entries(1, 1) / 0.5);
  EXPECT_NEAR(n, std::round(n), 1e-9);
  EXPECT_LT(2 / n, 0.1);
  auto Z = op(m2(1, 0, 0, 0), "2");
  EXPECT_THROW(direct_sum_shrink_approx(Z, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), 0.1), Error);
}

TEST(LinfExtreme, Example) {
  auto r = linf_extreme_approx(op(m2(1, 0, 1, 0), "inf"), 0.2);
  expect_contract(r);
  EXPECT_TRUE(r.approximant.entries.isApprox(m2(0.9, 0, 1, 0)));
  EXPECT_NEAR(r.distance, 0.1, 1e-12);
  EXPECT_TRUE(r.attainment_preserved);
  EXPECT_THROW(linf_extreme_approx(op(m2(0, 1, -1, 0), "inf"), 0.2), Error);
}

TEST(L1Extreme, Example) {
  auto r = l1_extreme_approx(op(m2(1, 1, 0, 0), "1"), 0.2);
  expect_contract(r);
  EXPECT_TRUE(r.approximant.entries.isApprox(m2(0.95, 1, 0.05, 0)));
  Eigen::Vector2d sums = r.approximant.entries.cwiseAbs().colwise().sum();
  EXPECT_NEAR(sums(0), 1, 1e-15);
  EXPECT_NEAR(sums(1), 1, 1e-15);
  EXPECT_TRUE(r.attainment_preserved);
}

TEST(Linf3L13, BlockCanonicalAndConjugates) {
  auto canon = linf3_l13_block_canonical();
  auto r = linf3_l13_extreme_approx(canon, 0.4);
  expect_contract(r);
  EXPECT_NEAR(r.distance, 0.2, 1e-9);
  EXPECT_TRUE(r.attainment_preserved);
  for (const auto& m : equivalence_orbit(canon)) {
    auto c = linf3_l13_extreme_approx(m.matrix, 0.4);
    EXPECT_NEAR(c.distance, r.distance, 1e-9);
    EXPECT_EQ(c.attainment_preserved, r.attainment_preserved);
  }
  auto one = linf3_l13_extreme_approx(linf3_l13_rank_one_canonical(), 0.4);
  expect_contract(one);
  EXPECT_EQ(one.construction, "rank-one");
}

TEST(Hilbert, RotationInTopSubspace) {
  Eigen::MatrixXd d = Eigen::Vector3d(1, 1, 0.5).asDiagonal();
  auto r = hilbert_rotate_approx(op(d, "2"), 0.1);
  expect_contract(r);
  EXPECT_TRUE(r.attainment_preserved);
  ASSERT_EQ(r.attainment_approximant.kind, AttainmentSet::Kind::Subspace);
  EXPECT_EQ(r.attainment_approximant.basis.cols(), 2);
  Eigen::MatrixXd b = r.attainment_approximant.basis;
  EXPECT_NEAR(b.row(2).norm(), 0.0, 1e-9);
}

TEST(Hilbert, ObstructionWhenComplementAttains) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(3, 3);
  p(2, 2) = 0;
  // Both e1 and e2 attain, but only e1 is declared.
  EXPECT_THROW(hilbert_rotate_approx(op(p, "2"), 0.1, Eigen::MatrixXd(Eigen::Vector3d(1, 0, 0))), Error);
}

TEST(Tilted, ExampleProjection) {
  auto r = tilted_projection_demo(0.2);
  const double s = 1 - 0.04 / 16, c = std::sqrt(1 - s * s);
  EXPECT_NEAR(r.distance, c, 1e-9);
  EXPECT_TRUE(r.approximant.entries.isApprox(m2(s * s, s * c, s * c, c * c), 1e-12));
  EXPECT_FALSE(r.attainment_preserved);
}

TEST(Functional, Lp2) {
  Eigen::MatrixXd f(1, 2);
  f << 1, 0;
  auto r = functional_approx_lp2(OperatorMatrix(f, sp("4", 2), sp("2", 1)), 0.3);
  expect_contract(r);
  // The new functional attains at a point within eps of e1.
  auto m = attainment_set(r.approximant);
  for (const auto& x : m.representatives()) {
    const double d = std::min((x.coords - Eigen::Vector2d(1, 0)).norm(), (x.coords + Eigen::Vector2d(1, 0)).norm());
    EXPECT_LT(d, 0.3);
  }
}

TEST(Sbpbp, Family) {
  auto A = sbpbp_counterexample_family(Point(Eigen::Vector2d(1, 0), sp("2", 2)), 10);
  EXPECT_TRUE(A.entries.isApprox(m2(1, 0, 0, 0.9)));
  auto m = attainment_set(A);
  ASSERT_EQ(m.kind, AttainmentSet::Kind::Subspace);
  EXPECT_EQ(m.basis.cols(), 1);
  EXPECT_NEAR(A.image_norm(Eigen::Vector2d(0, 1)), 0.9, 1e-15);
}

// Every routed constructor honours the contract on random non-isometries. General
// l_p^2 operators (p != 2) have no constructor and are left out.
TEST(Routing, RandomContracts) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  int built = 0;
  for (const char* p : {"2", "inf", "1"}) {
    for (int k = 0; k < 10; ++k) {
      auto a = m2(g(rng), g(rng), g(rng), g(rng));
      auto T0 = op(a, p);
      auto T = op(a / op_norm(T0).value, p);
      try {
        if (is_isometry(T)) continue;
      } catch (const Error&) {
      }
      try {
        auto r = route_approximant(T, 0.2);
        expect_contract(r);
        ++built;
      } catch (const Error& e) {
        ADD_FAILURE() << p << ": " << e.what() << "\n" << T.entries;
      }
    }
  }
  EXPECT_GE(built, 25);
  auto T = op(m2(1, 0.3, -0.2, 0.5), "3");
  EXPECT_THROW(route_approximant(op(T.entries / op_norm(T).value, "3"), 0.2), Error);
}
