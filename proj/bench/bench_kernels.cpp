// Serial reference vs OpenMP kernels. Thread count follows RBFPLAST_THREADS.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "rbfplast/execution.hpp"
#include "rbfplast/geometry.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/kernels.hpp"

using namespace rbfplast;

namespace {

struct Problem {
  NodeSet nodes;
  std::vector<std::size_t> stencils;
  SparseMatrix matrix;
};

const Problem& problem(int inv_density) {
  static std::map<int, Problem> cache;
  auto it = cache.find(inv_density);
  if (it != cache.end()) return it->second;
  Problem p;
  p.nodes = build_node_set({10.0, 5.0, true, WestSupport::clamped}, 10.0 / inv_density, 1);
  const NeighborIndex idx(p.nodes.positions);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const auto q = idx.query(p.nodes.positions[i], 50);
    p.stencils.insert(p.stencils.end(), q.begin(), q.end());
    for (std::size_t j : q) t.push_back({i, j, 1.0 / (1.0 + static_cast<double>(j % 7))});
  }
  p.matrix = SparseMatrix::from_triplets(p.nodes.size(), p.nodes.size(), std::move(t));
  return cache.emplace(inv_density, std::move(p)).first->second;
}

template <auto Spmv>
void bm_spmv(benchmark::State& state) {
  const Problem& p = problem(static_cast<int>(state.range(0)));
  std::vector<double> x(p.matrix.cols(), 1.0), y(p.matrix.rows());
  for (auto _ : state) {
    Spmv(p.matrix, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nodes"] = static_cast<double>(p.nodes.size());
}

template <auto Weights>
void bm_stencil_weights(benchmark::State& state) {
  const Problem& p = problem(static_cast<int>(state.range(0)));
  const RbfSettings s;
  WeightTable out;
  for (auto _ : state) {
    Weights(p.nodes.positions, p.stencils, kAllOps, s, out);
    benchmark::DoNotOptimize(out.weights.data());
  }
  state.counters["nodes"] = static_cast<double>(p.nodes.size());
}

template <auto Update>
void bm_constitutive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto params = make_params(10e9, 0.4);
  const YieldCurve curve({{0.0, 20e6}, {0.001, 25e6}, {0.005, 30e6}, {0.02, 40e6}});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6e-3, 6e-3);
  std::vector<Voigt> strain(n);
  for (auto& e : strain) e = {u(rng), u(rng), u(rng)};
  const std::vector<PointState> committed(n);
  std::vector<PointState> out(n);
  for (auto _ : state) {
    auto stats = Update(strain, committed, params, curve, ReturnMapOptions{}, out);
    benchmark::DoNotOptimize(stats.plastic_points);
  }
}

}  // namespace

BENCHMARK(bm_spmv<serial::spmv>)->Name("spmv/serial")->Arg(49)->Arg(149);
BENCHMARK(bm_spmv<omp::spmv>)->Name("spmv/omp")->Arg(49)->Arg(149);
BENCHMARK(bm_stencil_weights<serial::stencil_weights>)->Name("stencil_weights/serial")->Arg(49)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stencil_weights<omp::stencil_weights>)->Name("stencil_weights/omp")->Arg(49)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_constitutive<serial::constitutive_update>)->Name("constitutive_update/serial")->Arg(5000)->Arg(50000);
BENCHMARK(bm_constitutive<omp::constitutive_update>)->Name("constitutive_update/omp")->Arg(5000)->Arg(50000);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
