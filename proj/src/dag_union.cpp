#include "wikirel/dag_union.hpp"

#include <algorithm>
#include <omp.h>
#include <set>

namespace wikirel {

Dag Dag::from_child_parent_edges(
    std::uint32_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  Dag dag;
  dag.children.assign(n, {});
  std::vector<std::uint32_t> pending(n, 0);  // unprocessed children per node
  for (const auto& [child, parent] : edges) {
    if (child >= n || parent >= n) throw DataError("dag edge endpoint out of range");
    dag.children[parent].push_back(child);
    ++pending[parent];
  }
  for (auto& c : dag.children) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  // pending counted raw edges; recount after dedup
  for (std::uint32_t p = 0; p < n; ++p) pending[p] = static_cast<std::uint32_t>(dag.children[p].size());

  // Which parents wait on each node.
  std::vector<std::vector<std::uint32_t>> parents(n);
  for (std::uint32_t p = 0; p < n; ++p)
    for (std::uint32_t c : dag.children[p]) parents[c].push_back(p);

  std::set<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v)
    if (pending[v] == 0) ready.insert(v);

  dag.topo.reserve(n);
  std::vector<std::uint32_t> level_of(n, 0);
  while (!ready.empty()) {
    std::uint32_t v = *ready.begin();
    ready.erase(ready.begin());
    dag.topo.push_back(v);
    for (std::uint32_t p : parents[v]) {
      level_of[p] = std::max(level_of[p], level_of[v] + 1);
      if (--pending[p] == 0) ready.insert(p);
    }
  }
  if (dag.topo.size() != n) throw DataError("cycle detected in supposed DAG");

  std::uint32_t max_level = 0;
  for (std::uint32_t v = 0; v < n; ++v) max_level = std::max(max_level, level_of[v]);
  dag.levels.assign(n ? max_level + 1 : 0, {});
  for (std::uint32_t v : dag.topo) dag.levels[level_of[v]].push_back(v);
  return dag;
}

namespace serial {

std::vector<Bitset> union_below(const Dag& dag, std::vector<Bitset> seeds) {
  if (seeds.size() != dag.size()) throw DataError("seed count does not match dag size");
  for (std::uint32_t v : dag.topo) {
    for (std::uint32_t c : dag.children[v]) seeds[v] |= seeds[c];
  }
  return seeds;
}

}  // namespace serial

std::vector<Bitset> union_below(const Dag& dag, std::vector<Bitset> seeds, int jobs) {
  if (jobs <= 1) return serial::union_below(dag, std::move(seeds));
  if (seeds.size() != dag.size()) throw DataError("seed count does not match dag size");
  // Nodes within one level have no edges between them; bitwise OR leaves no
  // order dependence, so any schedule gives the serial result.
  for (const auto& level : dag.levels) {
    const std::int64_t k = static_cast<std::int64_t>(level.size());
#pragma omp parallel for num_threads(jobs) schedule(static)
    for (std::int64_t i = 0; i < k; ++i) {
      std::uint32_t v = level[static_cast<std::size_t>(i)];
      for (std::uint32_t c : dag.children[v]) seeds[v] |= seeds[c];
    }
  }
  return seeds;
}

}  // namespace wikirel
