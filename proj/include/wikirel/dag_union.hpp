#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wikirel/types.hpp"

namespace wikirel {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Acyclic child->parent graph in the layered form the union kernels consume.
// levels[l] holds nodes whose children all live in levels < l, so every
// level is a data-parallel batch.
struct Dag {
  std::vector<std::vector<std::uint32_t>> children;  // children[p]: nodes with an edge into p
  std::vector<std::uint32_t> topo;                   // children before parents
  std::vector<std::vector<std::uint32_t>> levels;

  std::size_t size() const { return children.size(); }

  // Kahn topological sort with ascending-index tie break.
  // Throws DataError if the edges contain a cycle.
  static Dag from_child_parent_edges(
      std::uint32_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);
};

// For every node: the union of the seed sets over the node itself and every
// node reachable below it through child edges. All seeds must have the same
// width. The OpenMP path processes one level at a time and produces results
// identical to the serial reference for any jobs value.
std::vector<Bitset> union_below(const Dag& dag, std::vector<Bitset> seeds, int jobs = 1);

namespace serial {
std::vector<Bitset> union_below(const Dag& dag, std::vector<Bitset> seeds);
}

}  // namespace wikirel
