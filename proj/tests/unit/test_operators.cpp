#include "oracles.hpp"

#include <bpblab/error.hpp>
#include <bpblab/operators.hpp>

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

}  // namespace

TEST(OperatorMatrix, Validation) {
  EXPECT_THROW(OperatorMatrix(Eigen::MatrixXd::Identity(2, 3), sp("2", 2), sp("2", 2)), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = NAN;
  EXPECT_THROW(op(bad, "2"), Error);
}

TEST(Norm, Examples) {
  auto n = op_norm(op(m2(1, 1, 1, -1), "4"));
  EXPECT_NEAR(n.value, std::pow(2.0, 0.75), 1e-10);
  EXPECT_NEAR(std::abs(n.witness.coords(0)), std::pow(2.0, -0.25), 1e-5);
  EXPECT_NEAR(std::abs(n.witness.coords(1)), std::pow(2.0, -0.25), 1e-5);
  EXPECT_DOUBLE_EQ(op_norm(op(Eigen::MatrixXd::Identity(3, 3), "inf")).value, 1.0);
  auto d = op_norm(op(m2(3, 0, 0, 4), "1"));
  EXPECT_DOUBLE_EQ(d.value, 4.0);
  EXPECT_DOUBLE_EQ(std::abs(d.witness.coords(1)), 1.0);
}

TEST(Norm, MatchesGridOracleOnPlanarPairs) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  const std::vector<std::pair<const char*, const char*>> pairs{
      {"3", "3"}, {"4", "4/3"}, {"inf", "1"}, {"1", "3"}, {"3/2", "inf"}, {"2", "2"}};
  for (auto [p, q] : pairs) {
    for (int k = 0; k < 6; ++k) {
      auto a = m2(g(rng), g(rng), g(rng), g(rng));
      const double ref = oracle::grid_norm_2d(a, Exponent::parse(p).value(), Exponent::parse(q).value(), 100000);
      auto r = op_norm(op(a, p, q));
      EXPECT_NEAR(r.value, ref, 1e-8 * ref) << p << "->" << q;
      EXPECT_GE(r.value, ref - 1e-12);
      EXPECT_NEAR(r.witness.norm(), 1.0, 1e-12);
      EXPECT_NEAR(op(a, p, q).image_norm(r.witness.coords), r.value, 1e-12);
    }
  }
}

TEST(Norm, LinfDomainVerticesBeatRandomSamples) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd a(3, 3);
    for (auto& v : a.reshaped()) v = g(rng);
    auto T = op(a, "inf", "2");
    const double n = op_norm(T).value;
    for (int s = 0; s < 2000; ++s) {
      Eigen::Vector3d x(u(rng), u(rng), u(rng));
      EXPECT_LE(T.image_norm(x), n + 1e-12);
    }
  }
}

TEST(Attainment, ClarksonPoints) {
  auto m = attainment_set(op(m2(1, 1, 1, -1), "4"));
  ASSERT_EQ(m.kind, AttainmentSet::Kind::PointPairs);
  ASSERT_EQ(m.points.size(), 4u);
  const double c = std::pow(2.0, -0.25);
  std::vector<Eigen::Vector2d> want{{c, c}, {c, -c}, {-c, -c}, {-c, c}};
  for (const auto& w : want) {
    double best = 1e9;
    for (const auto& p : m.points) best = std::min(best, (p.coords - w).norm());
    EXPECT_LT(best, 1e-6);
  }
}

TEST(Attainment, HilbertCases) {
  auto id = attainment_set(op(Eigen::MatrixXd::Identity(2, 2), "2"));
  EXPECT_TRUE(id.full_sphere());
  auto d = attainment_set(op(m2(1, 0, 0, 0.5), "2"));
  ASSERT_EQ(d.kind, AttainmentSet::Kind::Subspace);
  ASSERT_EQ(d.basis.cols(), 1);
  EXPECT_NEAR(std::abs(d.basis(0, 0)), 1.0, 1e-12);
}

TEST(Attainment, FaceUnionMatchesVertexScan) {
  auto m = attainment_set(op(m2(1, 0, 0, 0), "inf"));
  ASSERT_EQ(m.kind, AttainmentSet::Kind::FaceUnion);
  ASSERT_EQ(m.faces.size(), 2u);
  EXPECT_EQ(m.faces[0].to_string(), "-0");
  EXPECT_EQ(m.faces[1].to_string(), "+0");
  // Every listed face is attained on a dense grid of its points; every grid point of
  // the sphere that attains lies in some listed face.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int k = 0; k < 15; ++k) {
    Eigen::MatrixXd a(2, 3);
    for (auto& v : a.reshaped()) v = std::round(g(rng));
    if (a.isZero()) continue;
    auto T = op(a, "inf", "1");
    auto ms = attainment_set(T);
    const double n = op_norm(T).value;
    const int K = 20;
    for (int i = 0; i <= K; ++i)
      for (int j = 0; j <= K; ++j)
        for (int f = 0; f < 3; ++f)
          for (int s : {-1, 1}) {
            Eigen::Vector3d x;
            x(f) = s;
            x((f + 1) % 3) = -1 + 2.0 * i / K;
            x((f + 2) % 3) = -1 + 2.0 * j / K;
            const bool attains = T.image_norm(x) >= n - 1e-9;
            const bool listed = distance(Point(x, T.domain), ms) < 1e-9;
            EXPECT_EQ(attains, listed);
          }
  }
}

TEST(ApproxAttainment, VacuousAndCap) {
  auto T = op(m2(1, 0, 0, 0), "2");
  auto all = approx_attainment(T, 2.0, 1024);
  EXPECT_EQ(all.size(), sphere_samples(T.domain, 1024).size());
  auto cap = approx_attainment(T, 0.01, 4096);
  ASSERT_FALSE(cap.empty());
  for (const auto& z : cap) EXPECT_GT(std::abs(z.coords(0)), 0.99);
  // Closed form: |cos t| > 0.99 on the grid.
  std::size_t want = 0;
  for (const auto& z : sphere_samples(T.domain, 4096)) want += std::abs(z.coords(0)) > 0.99;
  EXPECT_EQ(cap.size(), want);
}

TEST(ApproxAttainment, ClarksonClusters) {
  auto T = op(m2(1, 1, 1, -1), "4");
  auto pts = approx_attainment(T, 1e-4, 4096);
  ASSERT_FALSE(pts.empty());
  const double c = std::pow(2.0, -0.25);
  bool hit[4] = {false, false, false, false};
  std::vector<Eigen::Vector2d> want{{c, c}, {c, -c}, {-c, -c}, {-c, c}};
  for (const auto& z : pts) {
    double best = 1e9;
    int arg = 0;
    for (int i = 0; i < 4; ++i)
      if ((z.coords - want[i]).norm() < best) best = (z.coords - want[i]).norm(), arg = i;
    EXPECT_LT(best, 0.1);
    hit[arg] = true;
  }
  for (bool h : hit) EXPECT_TRUE(h);
}

TEST(DeltaSearch, Examples) {
  auto id = delta_for_epsilon(op(Eigen::MatrixXd::Identity(2, 2), "2"), 0.1, 4096);
  ASSERT_TRUE(id.found);
  EXPECT_DOUBLE_EQ(id.delta, 0.5);
  auto cl = delta_for_epsilon(op(m2(1, 1, 1, -1), "4"), 0.2, 4096);
  EXPECT_TRUE(cl.found);
  EXPECT_GT(cl.delta, 0);
}

// ||Tz||^2 = 1 - (3/4) sin^2 t on the circle; the cap {||Tz|| > 1 - d} has half-angle
// asin(sqrt((1 - (1-d)^2) / (3/4))).
TEST(DeltaSearch, DiagonalMatchesClosedFormCap) {
  const double eps = 0.1;
  auto r = delta_for_epsilon(op(m2(1, 0, 0, 0.5), "2"), eps, 4096);
  ASSERT_TRUE(r.found);
  double want = 0;
  for (int k = 1; k < 40; ++k) {
    const double d = std::pow(2.0, -k);
    const double s2 = (1 - (1 - d) * (1 - d)) / 0.75;
    if (s2 >= 1) continue;
    if (2 * std::sin(std::asin(std::sqrt(s2)) / 2) < eps) {
      want = d;
      break;
    }
  }
  EXPECT_GE(r.delta, want);
  EXPECT_LE(r.delta, 2 * want);
}

TEST(RestrictedNorm, Examples) {
  auto T = op(m2(1, 0, 0, 0.5), "2");
  EXPECT_NEAR(restricted_norm(T, Eigen::Vector2d(0, 1)), 0.5, 1e-15);
  EXPECT_NEAR(restricted_norm(T, Eigen::MatrixXd::Identity(2, 2)), 1.0, 1e-12);
  auto C = op(m2(1, 1, 1, -1) / std::pow(2.0, 0.75), "4");
  Eigen::Vector2d z(1, -1);
  z /= std::pow(2.0, 0.25);
  EXPECT_NEAR(restricted_norm(C, Eigen::Vector2d(1, -1)), C.image_norm(z), 1e-12);
  EXPECT_THROW(restricted_norm(T, Eigen::MatrixXd::Zero(2, 1)), Error);
}

TEST(Smooth, Examples) {
  EXPECT_TRUE(is_smooth_operator(op(m2(1, 0, 0, 0.5), "2")));
  EXPECT_FALSE(is_smooth_operator(op(Eigen::MatrixXd::Identity(2, 2), "2")));
  EXPECT_FALSE(is_smooth_operator(op(m2(1, 0, 0, 0), "inf")));
}

TEST(Resolution, EnvironmentOverride) {
  setenv("BPBLAB_DEFAULT_RESOLUTION", "1000", 1);
  EXPECT_EQ(default_resolution(), 1000);
  unsetenv("BPBLAB_DEFAULT_RESOLUTION");
  EXPECT_EQ(default_resolution(), 4096);
}

TEST(Samples, OnTheSphereAndDeterministic) {
  for (const char* p : {"inf", "1", "2", "3"}) {
    for (int n : {2, 3}) {
      if (n == 3 && std::string(p) == "3") continue;
      auto s = sp(p, n);
      auto a = sphere_samples(s, 2000);
      auto b = sphere_samples(s, 2000);
      ASSERT_EQ(a.size(), b.size());
      EXPECT_GT(a.size(), 500u);
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].norm(), 1.0, 1e-12);
        EXPECT_EQ(a[i].coords, b[i].coords);
      }
    }
  }
}
