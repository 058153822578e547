#include "wikirel/ahits.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>
#include <unordered_set>

namespace wikirel {

namespace {

// Whitelist/blacklist of category titles resolved to id sets once per call.
// Titles that do not resolve are ignored; an empty whitelist allows all.
class CategoryFilter {
 public:
  CategoryFilter(const KnowledgeBase& kb, const AhitsParams& params) : kb_(kb) {
    for (const auto& title : params.category_whitelist) {
      if (auto id = kb.resolve_category(title)) allow_.insert(*id);
    }
    for (const auto& title : params.category_blacklist) {
      if (auto id = kb.resolve_category(title)) deny_.insert(*id);
    }
    use_allow_ = !params.category_whitelist.empty();
  }

  bool admits(PageId page) const {
    if (!use_allow_ && deny_.empty()) return true;
    bool allowed = !use_allow_;
    for (PageId cat : kb_.categories_of(page)) {
      if (deny_.contains(cat)) return false;
      if (use_allow_ && allow_.contains(cat)) allowed = true;
    }
    return allowed;
  }

 private:
  const KnowledgeBase& kb_;
  std::unordered_set<PageId> allow_;
  std::unordered_set<PageId> deny_;
  bool use_allow_ = false;
};

}  // namespace

Subgraph build_neighborhood(const KnowledgeBase& kb, PageId seed, const AhitsParams& params) {
  const Page& seed_page = kb.at(seed);
  if (seed_page.kind != PageKind::Article) {
    throw DataError("seed page '" + seed_page.title + "' is not an article");
  }
  CategoryFilter filter(kb, params);

  std::vector<PageId> members{seed};
  std::unordered_set<PageId> in_set{seed};
  auto take = [&](PageId candidate, std::size_t cap) {
    if (members.size() >= cap) return false;
    if (in_set.contains(candidate) || !filter.admits(candidate)) return true;
    members.push_back(candidate);
    in_set.insert(candidate);
    return true;
  };

  // Root set: out-links first, then in-links, ascending page id.
  for (PageId n : kb.out_links(seed)) {
    if (!take(n, params.root_set_size)) break;
  }
  for (PageId n : kb.in_links(seed)) {
    if (!take(n, params.root_set_size)) break;
  }

  // Base set: each root node (ascending id) contributes up to `increment`
  // in-link neighbors that are not yet present.
  std::vector<PageId> root_nodes = members;
  std::sort(root_nodes.begin(), root_nodes.end());
  for (PageId r : root_nodes) {
    std::uint32_t added = 0;
    for (PageId n : kb.in_links(r)) {
      if (added >= params.increment) break;
      if (in_set.contains(n) || !filter.admits(n)) continue;
      members.push_back(n);
      in_set.insert(n);
      ++added;
    }
  }

  Subgraph g;
  g.nodes = std::move(members);
  std::sort(g.nodes.begin(), g.nodes.end());
  std::unordered_map<PageId, std::uint32_t> local;
  local.reserve(g.nodes.size());
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) local.emplace(g.nodes[i], i);

  g.out.assign(g.nodes.size(), {});
  g.in.assign(g.nodes.size(), {});
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) {
    for (PageId v : kb.out_links(g.nodes[u])) {
      auto it = local.find(v);
      if (it == local.end()) continue;
      g.out[u].push_back(it->second);
      g.in[it->second].push_back(u);
      ++g.edge_count;
    }
  }
  for (auto& v : g.in) std::sort(v.begin(), v.end());
  return g;
}

namespace {

// Scales to unit Euclidean norm; all-zero vectors are left alone. The norm
// is accumulated serially in index order so parallel callers reproduce the
// serial result bit for bit.
void normalize(std::vector<double>& v) {
  double sum_sq = 0.0;
  for (double x : v) sum_sq += x * x;
  if (sum_sq <= 0.0) return;
  double norm = std::sqrt(sum_sq);
  for (double& x : v) x /= norm;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

template <typename AccumulateFn>
HubAuthScores run_hits_impl(const Subgraph& g, double epsilon, std::uint32_t max_iter,
                            AccumulateFn&& accumulate) {
  const std::size_t n = g.size();
  if (n == 0) throw DataError("empty subgraph");
  if (epsilon <= 0.0) throw DataError("epsilon must be positive");
  if (max_iter < 1) throw DataError("max_iter must be at least 1");

  HubAuthScores scores;
  scores.hub.assign(n, 1.0);
  scores.authority.assign(n, 1.0);
  std::vector<double> next_auth(n), next_hub(n);

  for (std::uint32_t iter = 1; iter <= max_iter; ++iter) {
    accumulate(g.in, scores.hub, next_auth);
    normalize(next_auth);
    accumulate(g.out, next_auth, next_hub);
    normalize(next_hub);

    double delta = std::max(max_abs_diff(next_auth, scores.authority),
                            max_abs_diff(next_hub, scores.hub));
    scores.authority = next_auth;
    scores.hub = next_hub;
    scores.iterations_used = iter;
    if (delta < epsilon) {
      scores.converged = true;
      break;
    }
  }
  return scores;
}

void accumulate_serial(const std::vector<std::vector<std::uint32_t>>& adj,
                       const std::vector<double>& src, std::vector<double>& dst) {
  for (std::size_t v = 0; v < adj.size(); ++v) {
    double sum = 0.0;
    for (std::uint32_t u : adj[v]) sum += src[u];
    dst[v] = sum;
  }
}

}  // namespace

namespace serial {

HubAuthScores run_hits(const Subgraph& g, double epsilon, std::uint32_t max_iter) {
  return run_hits_impl(g, epsilon, max_iter, accumulate_serial);
}

}  // namespace serial

HubAuthScores run_hits(const Subgraph& g, double epsilon, std::uint32_t max_iter, int jobs) {
  if (jobs <= 1) return serial::run_hits(g, epsilon, max_iter);
  auto accumulate_parallel = [jobs](const std::vector<std::vector<std::uint32_t>>& adj,
                                    const std::vector<double>& src, std::vector<double>& dst) {
    const std::int64_t n = static_cast<std::int64_t>(adj.size());
#pragma omp parallel for num_threads(jobs) schedule(static)
    for (std::int64_t v = 0; v < n; ++v) {
      double sum = 0.0;
      for (std::uint32_t u : adj[static_cast<std::size_t>(v)]) sum += src[u];
      dst[static_cast<std::size_t>(v)] = sum;
    }
  };
  return run_hits_impl(g, epsilon, max_iter, accumulate_parallel);
}

std::optional<RankedList> related_terms(const KnowledgeBase& kb, std::string_view seed_term,
                                        const AhitsParams& params, int jobs) {
  auto seed = kb.resolve_article(seed_term);
  if (!seed) return std::nullopt;

  Subgraph g = build_neighborhood(kb, *seed, params);
  HubAuthScores scores = run_hits(g, params.epsilon, params.max_iter, jobs);

  RankedList list;
  list.seed = *seed;
  list.entries.reserve(g.size() > 0 ? g.size() - 1 : 0);
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i] == *seed) continue;
    list.entries.push_back({kb.at(g.nodes[i]).title, scores.authority[i]});
  }
  std::sort(list.entries.begin(), list.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.authority != b.authority) return a.authority > b.authority;
              return a.title < b.title;
            });
  if (list.entries.size() > params.n_sought) list.entries.resize(params.n_sought);
  return list;
}

}  // namespace wikirel
