// Serial reference vs OpenMP kernel, pairwise. Serial O(n^2) references run on
// smaller inputs than the graph-level kernels.
#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <numeric>

#include "astopo/cone.hpp"
#include "astopo/game.hpp"
#include "astopo/metrics.hpp"
#include "astopo/yeas.hpp"

using namespace astopo;

namespace {

YeasParams params(std::size_t n) {
  YeasParams p;
  p.n = n;
  p.radius = 2 * std::log(static_cast<double>(n)) - 2.7;  // keeps the degree near the default shape
  p.seed = 1;
  return p;
}

const YeasResult& graph(std::size_t n) {
  static std::map<std::size_t, YeasResult> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, generate(params(n))).first;
  return it->second;
}

template <auto Kernel>
void bm_cones(benchmark::State& st) {
  const auto& g = graph(static_cast<std::size_t>(st.range(0))).graph;
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(g));
}

template <auto Kernel>
void bm_predecessors(benchmark::State& st) {
  const YeasLayout layout(params(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(layout.points(), layout.order()));
}

template <auto Kernel>
void bm_phase2(benchmark::State& st) {
  const auto& r = graph(static_cast<std::size_t>(st.range(0)));
  const auto n = r.graph.node_count();
  std::vector<bool> in_clique(n, false);
  for (NodeId v : r.clique) in_clique[v] = true;
  std::vector<std::optional<NodeId>> provider(n);
  for (const auto& e : r.graph.cp_edges()) provider[e.customer] = e.provider;
  const auto p = params(n);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(r.coords, in_clique, provider, p.beta * p.radius));
}

template <auto Kernel>
void bm_distances(benchmark::State& st) {
  const auto& g = graph(static_cast<std::size_t>(st.range(0))).graph;
  std::vector<NodeId> sources(200);
  std::iota(sources.begin(), sources.end(), NodeId{0});
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(g.undirected(), sources));
}

template <auto Kernel>
void bm_clustering(benchmark::State& st) {
  const auto& g = graph(static_cast<std::size_t>(st.range(0))).graph;
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(g.undirected()));
}

template <auto Kernel>
void bm_enumerate(benchmark::State& st) {
  const GameParams p{0.5, 0.1};
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(static_cast<std::size_t>(st.range(0)), p, {}));
}

}  // namespace

BENCHMARK(bm_cones<cone_sizes_serial>)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cones<cone_sizes>)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_predecessors<nearest_predecessors_serial>)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_predecessors<nearest_predecessors>)->Arg(4000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_phase2<phase2_peer_edges_serial>)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_phase2<phase2_peer_edges>)->Arg(4000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_distances<distance_summary_serial>)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_distances<distance_summary>)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_clustering<local_clustering_serial>)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_clustering<local_clustering>)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enumerate<enumerate_equilibria_serial>)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enumerate<enumerate_equilibria>)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
