#include <benchmark/benchmark.h>

#include "mdlvq/labeling.hpp"
#include "mdlvq/lattice.hpp"
#include "mdlvq/quantizer.hpp"
#include "mdlvq/sublattice.hpp"

using namespace mdlvq;

namespace {

Execution exec_of(const benchmark::State& st) { return st.range(0) ? Execution::Parallel : Execution::Serial; }

// Range 0 selects serial (0) or parallel (1).
void BM_Measure(benchmark::State& st) {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{3, 0});
  const Quantizer q(solve_labeling(sys, Rational(9), Rational(5)), 0.05);
  MeasureConfig c;
  c.samples = 200000;
  c.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(measure(q, c));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * c.samples));
}
BENCHMARK(BM_Measure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CostMatrix(benchmark::State& st) {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{7, 0});
  const EdgeSets sets = build_edge_sets(sys, true);
  const IntWeights w = integer_weights(Rational(9), Rational(5));
  for (auto _ : st) benchmark::DoNotOptimize(build_cost_matrix(sets, sys.base.form(), w, exec_of(st)));
}
BENCHMARK(BM_CostMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SecondMoment(benchmark::State& st) {
  const Lattice d4 = Lattice::d4();
  for (auto _ : st) benchmark::DoNotOptimize(second_moment(d4, 1u << 18, 1, exec_of(st)));
}
BENCHMARK(BM_SecondMoment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimilarSublattices(benchmark::State& st) {
  const Lattice d4 = Lattice::d4();
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_similar_sublattices(d4, 9, false, 1u << 20, exec_of(st)));
}
BENCHMARK(BM_SimilarSublattices)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
