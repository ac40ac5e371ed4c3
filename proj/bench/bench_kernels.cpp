// Serial reference vs OpenMP pair kernels. Run with --benchmark_counters_tabular=true
// to line the two variants up; the OpenMP rows are swept over thread counts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "design_forge/pair_kernels.hpp"

using namespace design_forge;

namespace {

Configuration random_config(std::size_t d, std::size_t n_points) {
  std::mt19937_64 rng(2024);
  std::vector<UnitPoint> pts;
  for (std::size_t i = 0; i < n_points; ++i) pts.push_back(random_point(d, rng));
  return Configuration(pts);
}

constexpr int kDim = 2;
constexpr int kDegree = 12;

const KernelSpec& spec() {
  static const KernelSpec s(kDim, kDegree);
  return s;
}

void set_threads(const benchmark::State& state, bool parallel) {
  kernels::set_thread_count(parallel ? static_cast<int>(state.range(1)) : 1);
}

template <bool Parallel>
void gram_sum(benchmark::State& state) {
  set_threads(state, Parallel);
  const Configuration c = random_config(kDim, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? kernels::omp::gram_sum(spec(), c) : kernels::serial::gram_sum(spec(), c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void phi_gradient(benchmark::State& state) {
  set_threads(state, Parallel);
  const Configuration c = random_config(kDim, static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(c.coords().size());
  for (auto _ : state) {
    if (Parallel)
      kernels::omp::phi_gradient(spec(), c, out);
    else
      kernels::serial::phi_gradient(spec(), c, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void node_degree_sums(benchmark::State& state) {
  set_threads(state, Parallel);
  const Configuration c = random_config(kDim, static_cast<std::size_t>(state.range(0)));
  const SphereRule& rule = spec().rule();
  std::vector<double> out(rule.size() * kDegree);
  for (auto _ : state) {
    if (Parallel)
      kernels::omp::node_degree_sums(spec(), c, rule, out);
    else
      kernels::serial::node_degree_sums(spec(), c, rule, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(rule.size()));
}

void serial_args(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024, 4096}) b->Args({n, 1});
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

void parallel_args(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024, 4096})
    for (long t : {1, 2, 4, 8}) b->Args({n, t});
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(gram_sum<false>)->Name("gram_sum/serial")->Apply(serial_args);
BENCHMARK(gram_sum<true>)->Name("gram_sum/omp")->Apply(parallel_args);
BENCHMARK(phi_gradient<false>)->Name("phi_gradient/serial")->Apply(serial_args);
BENCHMARK(phi_gradient<true>)->Name("phi_gradient/omp")->Apply(parallel_args);
BENCHMARK(node_degree_sums<false>)->Name("node_degree_sums/serial")->Apply(serial_args);
BENCHMARK(node_degree_sums<true>)->Name("node_degree_sums/omp")->Apply(parallel_args);

BENCHMARK_MAIN();
