#pragma once

// Internal helpers shared by the taxonomy builders: the raw category
// digraph and an iterative Tarjan SCC.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wikirel/graph_store.hpp"
#include "wikirel/types.hpp"

namespace wikirel::detail {

// Category-only subgraph of the kb, densely indexed in ascending page-id
// order. Edges run child -> parent; self-loops are kept.
struct CategoryGraph {
  std::vector<PageId> cats;  // ascending
  std::unordered_map<PageId, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> out;  // child -> parents, ascending, deduped
  std::vector<std::uint32_t> self_loops;        // local indices, ascending
};

CategoryGraph extract_category_graph(const KnowledgeBase& kb);

// Components as sorted member lists, ordered by smallest member.
std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj);

}  // namespace wikirel::detail
