#include <algorithm>
#include <unordered_set>

#include "category_graph.hpp"
#include "wikirel/taxonomy.hpp"

namespace wikirel {

namespace {

// Johnson-style enumeration of elementary circuits inside one strongly
// connected component. Self-loops are excluded from the adjacency. Circuits
// are emitted starting from their smallest vertex, so the output is
// canonical and independent of everything but the input order.
class CircuitEnumerator {
 public:
  CircuitEnumerator(const std::vector<std::vector<std::uint32_t>>& adj, std::size_t limit,
                    std::vector<std::vector<std::uint32_t>>& out, bool& truncated)
      : adj_(adj), limit_(limit), out_(out), truncated_(truncated) {}

  void run(const std::vector<std::uint32_t>& component) {
    std::vector<std::uint32_t> nodes = component;  // ascending
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (truncated_) return;
      start_ = nodes[i];
      allowed_.clear();
      allowed_.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i), nodes.end());
      blocked_.clear();
      block_map_.clear();
      path_.clear();
      circuit(start_);
    }
  }

 private:
  bool circuit(std::uint32_t v) {
    bool found = false;
    path_.push_back(v);
    blocked_.insert(v);
    for (std::uint32_t w : adj_[v]) {
      if (truncated_) break;
      if (w == v || !allowed_.contains(w)) continue;
      if (w == start_) {
        if (out_.size() >= limit_) {
          truncated_ = true;
          break;
        }
        out_.push_back(path_);
        found = true;
      } else if (!blocked_.contains(w)) {
        if (circuit(w)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::uint32_t w : adj_[v]) {
        if (w != v && allowed_.contains(w)) block_map_[w].insert(v);
      }
    }
    path_.pop_back();
    return found;
  }

  void unblock(std::uint32_t v) {
    blocked_.erase(v);
    auto it = block_map_.find(v);
    if (it == block_map_.end()) return;
    auto waiting = std::move(it->second);
    block_map_.erase(it);
    for (std::uint32_t w : waiting) {
      if (blocked_.contains(w)) unblock(w);
    }
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  std::size_t limit_;
  std::vector<std::vector<std::uint32_t>>& out_;
  bool& truncated_;

  std::uint32_t start_ = 0;
  std::unordered_set<std::uint32_t> allowed_;
  std::unordered_set<std::uint32_t> blocked_;
  std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>> block_map_;
  std::vector<std::uint32_t> path_;
};

}  // namespace

CycleReport detect_cycles(const KnowledgeBase& kb, std::size_t max_elementary) {
  detail::CategoryGraph g = detail::extract_category_graph(kb);
  CycleReport report;

  for (std::uint32_t local : g.self_loops) report.self_loops.push_back(g.cats[local]);

  auto components = detail::strongly_connected_components(g.out);
  std::vector<std::vector<std::uint32_t>> local_cycles;
  for (const auto& comp : components) {
    if (comp.size() < 2) continue;
    std::vector<PageId> ids;
    ids.reserve(comp.size());
    for (std::uint32_t local : comp) ids.push_back(g.cats[local]);
    report.components.push_back(std::move(ids));

    if (!report.truncated) {
      CircuitEnumerator(g.out, max_elementary, local_cycles, report.truncated).run(comp);
    }
  }

  report.elementary_cycles.reserve(local_cycles.size());
  for (const auto& cycle : local_cycles) {
    std::vector<PageId> ids;
    ids.reserve(cycle.size());
    for (std::uint32_t local : cycle) ids.push_back(g.cats[local]);
    report.elementary_cycles.push_back(std::move(ids));
  }
  return report;
}

}  // namespace wikirel
