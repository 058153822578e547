#include "category_graph.hpp"

#include <algorithm>

namespace wikirel::detail {

CategoryGraph extract_category_graph(const KnowledgeBase& kb) {
  CategoryGraph g;
  for (const Page& p : kb.pages) {
    if (p.kind == PageKind::Category) {
      g.index.emplace(p.id, static_cast<std::uint32_t>(g.cats.size()));
      g.cats.push_back(p.id);
    }
  }
  g.out.assign(g.cats.size(), {});
  for (const Edge& e : kb.cat_edges) {
    auto child = g.index.find(e.from);
    if (child == g.index.end()) continue;  // article attachment
    std::uint32_t c = child->second;
    std::uint32_t p = g.index.at(e.to);
    if (c == p) {
      g.self_loops.push_back(c);
    }
    g.out[c].push_back(p);
  }
  for (auto& v : g.out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::sort(g.self_loops.begin(), g.self_loops.end());
  g.self_loops.erase(std::unique(g.self_loops.begin(), g.self_loops.end()),
                     g.self_loops.end());
  return g;
}

std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t kUnset = 0xffffffffu;

  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> components;
  std::uint32_t next_index = 0;

  // Iterative Tarjan: each frame remembers how far its edge list has been
  // scanned so the walk resumes after a child returns.
  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::uint32_t start = 0; start < n; ++start) {
    if (index[start] != kUnset) continue;
    call.push_back({start, 0});
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (edge < adj[v].size()) {
        std::uint32_t w = adj[v][edge++];
        if (index[w] == kUnset) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;

      if (lowlink[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
          if (w == v) break;
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        std::uint32_t parent = call.back().v;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
    }
  }

  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

}  // namespace wikirel::detail
