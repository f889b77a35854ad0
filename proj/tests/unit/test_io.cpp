#include "json_io.hpp"

#include <bpblab/approximants.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace bpblab;
using bpblab::io::json;

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

// Serialize, parse back into the type, serialize again: both documents must agree.
template <class T>
void round_trip(const T& value) {
  json a = value;
  T back = json::parse(a.dump()).get<T>();
  json b = back;
  EXPECT_EQ(a, b) << a.dump(2);
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(BPBLAB_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_tmp(const std::string& name, const json& j) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << j.dump();
  return path;
}

}  // namespace

TEST(Json, OperatorSchema) {
  auto T = op(m2(1, 0.5, 0, -1), "4/3", "inf");
  json j = T;
  EXPECT_EQ(j["domain"]["p"], "4/3");
  EXPECT_EQ(j["codomain"]["p"], "inf");
  EXPECT_EQ(j["rows"][0][1], 0.5);
  round_trip(T);
}

TEST(Json, AttainmentVariants) {
  auto faces = attainment_set(op(m2(1, 0, 0, 0), "inf"));
  json jf = faces;
  EXPECT_EQ(jf["kind"], "faces");
  EXPECT_EQ(jf["faces"], json({"-0", "+0"}));
  round_trip(faces);
  round_trip(attainment_set(op(m2(1, 1, 1, -1), "4")));
  round_trip(attainment_set(op(m2(1, 0, 0, 0.5), "2")));
}

TEST(Json, ReportsRoundTrip) {
  round_trip(op_norm(op(m2(1, 1, 1, -1), "4")));
  round_trip(is_extreme_contraction(op(m2(1, 0, 0, 0.5), "inf")));
  round_trip(is_extreme_contraction(op(m2(1, 0, 1, 0), "inf")));
  auto r = linf_extreme_approx(op(m2(1, 0, 1, 0), "inf"), 0.2);
  round_trip(r);
  round_trip(verify_uniform_bpb(r.original, r.approximant, 0.2, 1024));
  Eigen::MatrixXd f(1, 2), g(1, 2);
  f << 1, 0;
  g << 0.95, 0.05;
  round_trip(verify_uniform_bpb(OperatorMatrix(f, sp("inf", 2), sp("1", 1)),
                                OperatorMatrix(g, sp("inf", 2), sp("1", 1)), 0.2, 1024));
  round_trip(is_only_approximation(op(m2(1, 0, 0, 0.5), "inf"), 0.3, 20, 1, 512));
  round_trip(property_p_witness(op(m2(1, 0, 0, 0.5), "2")));
  round_trip(epsilon0_lp2(3, 1024));
  auto t = tilted_projection_demo(0.2);
  round_trip(hilbert_necessary_checks(t.original, t.approximant, 0.2, 512));
  round_trip(pair_property_sweep(sp("2", 2), sp("2", 2), {0.2}, 3, 1, 256));
  round_trip(signed_permutations(3)[17]);
  round_trip(Exponent::parse("5/2"));
}

TEST(Json, MalformedInputNamesField) {
  auto expect_field = [](const json& j, const std::string& field) {
    try {
      (void)io::operator_from_json(j, "T");
      ADD_FAILURE() << "accepted " << j.dump();
    } catch (const io::InputError& e) {
      EXPECT_EQ(e.field(), field) << e.what();
    }
  };
  const json dom{{"p", "2"}, {"n", 2}};
  expect_field(json{{"domain", dom}, {"codomain", dom}}, "T.rows");
  expect_field(json{{"rows", {{1, 0}, {0, "x"}}}, {"domain", dom}, {"codomain", dom}}, "T.rows[1][1]");
  expect_field(json{{"rows", {{1, 0}, {0}}}, {"domain", dom}, {"codomain", dom}}, "T.rows[1]");
  expect_field(json{{"rows", {{1, 0}, {0, 1}}}, {"domain", {{"p", "1/2"}, {"n", 2}}}, {"codomain", dom}},
               "T.domain.p");
  expect_field(json{{"rows", {{1, 0}, {0, 1}}}, {"domain", dom}, {"codomain", {{"p", "2"}}}}, "T.codomain.n");
  expect_field(json{{"rows", {{1, 0, 0}, {0, 1, 0}}}, {"domain", dom}, {"codomain", dom}}, "T.rows");
}

TEST(Cli, EnumerateExtreme) {
  auto r = run_cli("enumerate-ext --pair linf3-l13 --no-timestamp");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["result"]["count"], 90);
  EXPECT_EQ(j["result"]["orbits"], json({18, 72}));
}

TEST(Cli, Epsilon0) {
  auto r = run_cli("epsilon0 --p 3 --no-timestamp");
  ASSERT_EQ(r.code, 0) << r.out;
  auto rep = json::parse(r.out)["result"].get<Epsilon0Report>();
  EXPECT_NEAR(rep.separation, std::pow(2.0, 2.0 / 3), 1e-15);
  EXPECT_GT(rep.delta1, 0);
}

TEST(Cli, VerifyCertifiedAndFalsified) {
  auto r = linf_extreme_approx(op(m2(1, 0, 1, 0), "inf"), 0.2);
  auto t = write_tmp("t.json", json(r.original));
  auto a = write_tmp("a.json", json(r.approximant));
  auto ok = run_cli("verify --T " + t + " --A " + a + " --eps 0.2 --resolution 4096 --no-timestamp");
  ASSERT_EQ(ok.code, 0) << ok.out;
  auto cert = json::parse(ok.out)["result"]["certificate"].get<BpbCertificate>();
  EXPECT_EQ(cert.status, BpbCertificate::Status::Certified);

  Eigen::MatrixXd f(1, 2), g(1, 2);
  f << 1, 0;
  g << 0.95, 0.05;
  auto ft = write_tmp("f.json", json(OperatorMatrix(f, sp("inf", 2), sp("1", 1))));
  auto gt = write_tmp("g.json", json(OperatorMatrix(g, sp("inf", 2), sp("1", 1))));
  auto bad = run_cli("verify --T " + ft + " --A " + gt + " --eps 0.2 --no-timestamp");
  EXPECT_EQ(bad.code, 1) << bad.out;
}

TEST(Cli, MalformedInputExitsTwo) {
  auto path = write_tmp("bad.json", json{{"rows", {{1, "x"}}}});
  auto r = run_cli("norm --T " + path);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--T.rows[0][1]"), std::string::npos) << r.out;
  EXPECT_EQ(run_cli("norm").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("epsilon0 --p 3 --cells many").code, 2);
}

TEST(Cli, RandomizedCommandsNeedSeed) {
  auto r = run_cli("sweep --domain 2:2 --codomain 2:2 --eps 0.2 --trials 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--seed"), std::string::npos);
}

TEST(Cli, DeterministicWithSeed) {
  const std::string args = "sweep --domain inf:2 --codomain inf:2 --eps 0.1,0.2 --trials 4 --seed 9 --resolution 256 "
                           "--no-timestamp";
  auto a = run_cli(args);
  auto b = run_cli(args + " --threads 2");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  auto rep = json::parse(a.out)["result"].get<SweepReport>();
  EXPECT_EQ(rep.certified, rep.cases);
}

TEST(Cli, TimestampOnlyWhenRequested) {
  auto with = json::parse(run_cli("epsilon0 --p 4 --cells 512").out);
  auto without = json::parse(run_cli("epsilon0 --p 4 --cells 512 --no-timestamp").out);
  EXPECT_TRUE(with.contains("generated_at"));
  EXPECT_FALSE(without.contains("generated_at"));
}
