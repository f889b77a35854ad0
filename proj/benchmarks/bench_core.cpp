#include <bpblab/approximants.hpp>
#include <bpblab/arc_length.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>

#include <benchmark/benchmark.h>

using namespace bpblab;

namespace {

SpaceSpec sp(const char* p, int n) { return SpaceSpec(Exponent::parse(p), n); }

OperatorMatrix clarkson(const char* p) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, -1;
  OperatorMatrix t(a, sp(p, 2), sp(p, 2));
  return OperatorMatrix(a / op_norm(t).value, t.domain, t.codomain);
}

void BM_NormLp2(benchmark::State& st) {
  auto T = clarkson("3");
  for (auto _ : st) benchmark::DoNotOptimize(op_norm(T).value);
}
BENCHMARK(BM_NormLp2);

void BM_NormLinf3ToL1(benchmark::State& st) {
  auto T = linf3_l13_block_canonical();
  for (auto _ : st) benchmark::DoNotOptimize(op_norm(T).value);
}
BENCHMARK(BM_NormLinf3ToL1);

void BM_AttainmentFaces(benchmark::State& st) {
  auto T = linf3_l13_block_canonical();
  for (auto _ : st) benchmark::DoNotOptimize(attainment_set(T).faces.size());
}
BENCHMARK(BM_AttainmentFaces);

void BM_AttainmentPoints(benchmark::State& st) {
  auto T = clarkson("4");
  for (auto _ : st) benchmark::DoNotOptimize(attainment_set(T).points.size());
}
BENCHMARK(BM_AttainmentPoints);

void BM_LpExtremality(benchmark::State& st) {
  auto T = linf3_l13_block_canonical();
  for (auto _ : st) benchmark::DoNotOptimize(is_extreme_contraction(T).status);
}
BENCHMARK(BM_LpExtremality)->Unit(benchmark::kMicrosecond);

void BM_Orbit(benchmark::State& st) {
  auto T = linf3_l13_block_canonical();
  for (auto _ : st) benchmark::DoNotOptimize(equivalence_orbit(T).size());
}
BENCHMARK(BM_Orbit)->Unit(benchmark::kMicrosecond);

void BM_EnumerateExtreme(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_extreme_linf3_l13().size());
}
BENCHMARK(BM_EnumerateExtreme)->Unit(benchmark::kMillisecond);

void BM_VerifyLinf(benchmark::State& st) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 1, 0;
  auto r = linf_extreme_approx(OperatorMatrix(a, sp("inf", 2), sp("inf", 2)), 0.2);
  const int res = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(verify_uniform_bpb(r.original, r.approximant, 0.2, res).status);
}
BENCHMARK(BM_VerifyLinf)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_VerifyHilbert3(benchmark::State& st) {
  Eigen::MatrixXd d = Eigen::Vector3d(1, 1, 0.5).asDiagonal();
  auto r = hilbert_rotate_approx(OperatorMatrix(d, sp("2", 3), sp("2", 3)), 0.1);
  const int res = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(verify_uniform_bpb(r.original, r.approximant, 0.1, res).status);
}
BENCHMARK(BM_VerifyHilbert3)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ArcTable(benchmark::State& st) {
  const int cells = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(LpCircle(Exponent::integer(3), cells).length());
}
BENCHMARK(BM_ArcTable)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_Epsilon0(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(epsilon0_lp2(3).eps0);
}
BENCHMARK(BM_Epsilon0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
