#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikirel/graph_store.hpp"
#include "wikirel/types.hpp"

namespace wikirel {

struct AhitsParams {
  std::uint32_t root_set_size = 200;
  std::uint32_t increment = 17;
  std::uint32_t n_sought = 1000;
  // Cluster-weight cap. Accepted and stored so configurations round-trip,
  // but no pruning rule consumes it yet; build_neighborhood is the hook
  // point for one.
  std::optional<double> c_max;
  double epsilon = 1e-8;
  std::uint32_t max_iter = 200;
  std::vector<std::string> category_whitelist;  // empty = allow all
  std::vector<std::string> category_blacklist;
};

// Link neighborhood with locally indexed induced edges. nodes is ascending;
// out/in adjacency lists are ascending local indices.
struct Subgraph {
  std::vector<PageId> nodes;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::vector<std::uint32_t>> in;
  std::size_t edge_count = 0;

  std::size_t size() const { return nodes.size(); }
};

// Root set: the seed plus up to root_set_size-1 neighbors, out-links first
// then in-links, each ordered by ascending page id. Base set: for each root
// node (ascending id) up to `increment` in-link neighbors not yet present.
// Category white/blacklists filter every candidate; the seed is exempt.
Subgraph build_neighborhood(const KnowledgeBase& kb, PageId seed, const AhitsParams& params);

struct HubAuthScores {
  std::vector<double> hub;
  std::vector<double> authority;
  std::uint32_t iterations_used = 0;
  bool converged = false;
};

// Iterates a(v) = sum h(u) over u->v and h(u) = sum a(v) over u->v from an
// all-ones start, renormalizing to unit Euclidean norm after each update,
// until the largest component change drops below epsilon or max_iter is
// reached. An edgeless graph yields all-zero vectors. Results are identical
// for any jobs value: per-node sums run in a fixed order and the norms are
// reduced serially.
HubAuthScores run_hits(const Subgraph& g, double epsilon, std::uint32_t max_iter, int jobs = 1);

namespace serial {
HubAuthScores run_hits(const Subgraph& g, double epsilon, std::uint32_t max_iter);
}

struct RankedEntry {
  std::string title;
  double authority = 0.0;
};

// Related terms for a seed, descending authority, ties broken
// lexicographically by title, seed excluded, at most n_sought entries.
struct RankedList {
  PageId seed = 0;
  std::vector<RankedEntry> entries;
};

// Empty optional when the seed term does not resolve to an article.
std::optional<RankedList> related_terms(const KnowledgeBase& kb, std::string_view seed_term,
                                        const AhitsParams& params, int jobs = 1);

}  // namespace wikirel
