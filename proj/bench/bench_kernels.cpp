// Serial reference vs OpenMP kernels on synthetic graphs sized well past the
// test fixtures. Run: build/bench/wikirel_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>
#include <utility>
#include <vector>

#include "wikirel/ahits.hpp"
#include "wikirel/dag_union.hpp"

namespace {

using namespace wikirel;

// Wide, shallow DAG in contiguous layer blocks, the shape category
// taxonomies actually have. Parents sit in higher blocks than children.
Dag layered_random_dag(std::mt19937& rng, std::uint32_t n, std::uint32_t layers,
                       std::uint32_t avg_children) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  const std::uint32_t block = std::max(1u, n / layers);
  for (std::uint32_t p = block; p < n; ++p) {
    std::uint32_t below = (p / block) * block;  // nodes in strictly lower blocks
    std::uniform_int_distribution<std::uint32_t> pick(0, below - 1);
    for (std::uint32_t d = 0; d < avg_children; ++d) edges.push_back({pick(rng), p});
  }
  return Dag::from_child_parent_edges(n, edges);
}

std::vector<Bitset> singleton_seeds(std::uint32_t n) {
  std::vector<Bitset> seeds(n, Bitset(n));
  for (std::uint32_t i = 0; i < n; ++i) seeds[i].set(i);
  return seeds;
}

void BM_union_below_serial(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Dag dag = layered_random_dag(rng, n, 12, 4);
  for (auto _ : state) {
    auto result = serial::union_below(dag, singleton_seeds(n));
    benchmark::DoNotOptimize(result);
  }
}

void BM_union_below_parallel(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const int jobs = static_cast<int>(state.range(1));
  Dag dag = layered_random_dag(rng, n, 12, 4);
  for (auto _ : state) {
    auto result = union_below(dag, singleton_seeds(n), jobs);
    benchmark::DoNotOptimize(result);
  }
}

Subgraph random_link_graph(std::mt19937& rng, std::uint32_t n, std::uint32_t avg_degree) {
  Subgraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.nodes.push_back(i + 1);
  g.out.assign(n, {});
  g.in.assign(n, {});
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  for (std::uint64_t e = 0; e < static_cast<std::uint64_t>(n) * avg_degree; ++e) {
    std::uint32_t u = pick(rng);
    std::uint32_t v = pick(rng);
    if (u == v) continue;
    g.out[u].push_back(v);
    g.in[v].push_back(u);
    ++g.edge_count;
  }
  return g;
}

void BM_hits_serial(benchmark::State& state) {
  std::mt19937 rng(2);
  Subgraph g = random_link_graph(rng, static_cast<std::uint32_t>(state.range(0)), 16);
  for (auto _ : state) {
    auto scores = serial::run_hits(g, 1e-10, 100);
    benchmark::DoNotOptimize(scores);
  }
}

void BM_hits_parallel(benchmark::State& state) {
  std::mt19937 rng(2);
  Subgraph g = random_link_graph(rng, static_cast<std::uint32_t>(state.range(0)), 16);
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto scores = run_hits(g, 1e-10, 100, jobs);
    benchmark::DoNotOptimize(scores);
  }
}

}  // namespace

BENCHMARK(BM_union_below_serial)->Arg(2000)->Arg(8000);
BENCHMARK(BM_union_below_parallel)->Args({2000, 2})->Args({8000, 2})->Args({8000, 4});
BENCHMARK(BM_hits_serial)->Arg(8000)->Arg(32000);
BENCHMARK(BM_hits_parallel)->Args({8000, 2})->Args({32000, 2})->Args({32000, 4});

BENCHMARK_MAIN();
