#include <benchmark/benchmark.h>

#include "isopair/defect.hpp"
#include "isopair/koszul.hpp"
#include "isopair/models.hpp"
#include "isopair/random_gen.hpp"

using namespace isopair;

static void bm_defect_window(benchmark::State& state) {
  models::ModelPair neg = models::neg_pair();
  int grade = static_cast<int>(state.range(0));
  for (auto _ : state) {
    defect::DefectReport rep = defect::defect_window_matrix(neg.V1, neg.V2, grade);
    benchmark::DoNotOptimize(rep.eigenvalues.data());
  }
  state.SetComplexityN(grade);
}
BENCHMARK(bm_defect_window)->DenseRange(4, 12, 2)->Complexity();

static void bm_koszul_finite(benchmark::State& state) {
  std::mt19937_64 gen(1);
  int d = static_cast<int>(state.range(0));
  auto [a, b] = rng::random_commuting_pair(d, gen);
  for (auto _ : state) {
    auto rep = koszul::koszul_finite(a, b, Cplx(0.1, 0.2), Cplx(-0.3, 0.1));
    benchmark::DoNotOptimize(rep.rank_d2);
  }
}
BENCHMARK(bm_koszul_finite)->DenseRange(2, 10, 2);

static void bm_joint_spectrum(benchmark::State& state) {
  std::mt19937_64 gen(2);
  int d = static_cast<int>(state.range(0));
  auto [a, b] = rng::random_commuting_pair(d, gen);
  for (auto _ : state) {
    auto spec = koszul::joint_spectrum_finite(a, b);
    benchmark::DoNotOptimize(spec.size());
  }
}
BENCHMARK(bm_joint_spectrum)->DenseRange(2, 10, 2);

static void bm_psi_certificate(benchmark::State& state) {
  double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto s = koszul::psi_forward_certificate(Cplx(0.7, 0.2), Cplx(-0.4, 0.5), eps);
    benchmark::DoNotOptimize(s.residual);
  }
}
BENCHMARK(bm_psi_certificate)->DenseRange(6, 14, 2);

static void bm_stage2_certificate(benchmark::State& state) {
  int cap = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rep = koszul::stage2_certificate_neg(Cplx(0.3, 0.0), Cplx(0.0, 0.5), cap, 8);
    benchmark::DoNotOptimize(rep.max_pairing);
  }
}
BENCHMARK(bm_stage2_certificate)->DenseRange(20, 60, 20);

static void bm_sarkar(benchmark::State& state) {
  std::mt19937_64 gen(3);
  bcl::BclTriple t = rng::random_triple(static_cast<int>(state.range(0)), gen);
  auto [v1, v2] = bcl::multiplier_pair(t);
  for (auto _ : state) {
    auto res = bcl::sarkar_triple(v1, v2, 6);
    benchmark::DoNotOptimize(res.unitary_deviation);
  }
}
BENCHMARK(bm_sarkar)->DenseRange(2, 8, 2);

BENCHMARK_MAIN();
