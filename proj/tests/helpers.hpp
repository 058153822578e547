#pragma once

// Small builders shared across the test suites.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "wikirel/ahits.hpp"
#include "wikirel/graph_store.hpp"

namespace wikirel::testing {

inline Page art(PageId id, std::string title) {
  return {id, PageKind::Article, std::move(title)};
}
inline Page cat(PageId id, std::string title) {
  return {id, PageKind::Category, std::move(title)};
}
inline Page red(PageId id, std::string title) {
  return {id, PageKind::Redirect, std::move(title)};
}

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(WIKIREL_FIXTURE_DIR);
}

inline std::filesystem::path mini_wiki_dir() { return fixture_dir() / "mini_wiki"; }

inline KnowledgeBase load_mini_wiki() {
  auto dir = mini_wiki_dir();
  return load_knowledge_base(dir / "pages.tsv", dir / "catlinks.tsv", dir / "pagelinks.tsv",
                             dir / "redirects.tsv");
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 1000; ++i) {
      auto candidate = base / ("wikirel_test_" + std::to_string(std::random_device{}()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
}

// Random category corpus. Articles get ids from 1001 up so they never collide
// with category ids. Base category edges point from higher to lower id
// (acyclic); plant_cycles mixes in reversed edges, mutual pairs and
// self-loops.
inline KnowledgeBase random_category_kb(std::mt19937& rng, int max_cats, int max_arts,
                                        int max_edges, bool plant_cycles) {
  std::uniform_int_distribution<int> cats_dist(1, max_cats);
  int n_cats = cats_dist(rng);
  std::uniform_int_distribution<int> arts_dist(0, max_arts);
  int n_arts = arts_dist(rng);

  std::vector<Page> pages;
  for (int i = 1; i <= n_cats; ++i) pages.push_back(cat(i, "c" + std::to_string(i)));
  for (int i = 1; i <= n_arts; ++i) pages.push_back(art(1000 + i, "a" + std::to_string(i)));

  std::vector<Edge> cat_rows;
  std::uniform_int_distribution<int> edge_count_dist(0, max_edges);
  int n_edges = edge_count_dist(rng);
  std::uniform_int_distribution<int> cat_pick(1, n_cats);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int e = 0; e < n_edges; ++e) {
    double what = coin(rng);
    if (n_arts > 0 && what < 0.35) {
      std::uniform_int_distribution<int> art_pick(1, n_arts);
      cat_rows.push_back({static_cast<PageId>(1000 + art_pick(rng)),
                          static_cast<PageId>(cat_pick(rng))});
      continue;
    }
    int a = cat_pick(rng);
    int b = cat_pick(rng);
    if (a == b) {
      if (plant_cycles && what > 0.9) cat_rows.push_back({static_cast<PageId>(a),
                                                          static_cast<PageId>(a)});
      continue;
    }
    int child = std::max(a, b);
    int parent = std::min(a, b);
    if (plant_cycles && what > 0.75) std::swap(child, parent);  // back edge
    cat_rows.push_back({static_cast<PageId>(child), static_cast<PageId>(parent)});
  }
  return build_knowledge_base(std::move(pages), std::move(cat_rows), {}, {});
}

// Random link graph over articles 1..n (plus one category so condense-based
// code does not choke); edge probability keeps the expected degree small.
inline Subgraph random_subgraph(std::mt19937& rng, int max_nodes) {
  std::uniform_int_distribution<int> node_dist(2, max_nodes);
  int n = node_dist(rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double p = 3.0 / n;

  Subgraph g;
  for (int i = 1; i <= n; ++i) g.nodes.push_back(static_cast<PageId>(i));
  g.out.assign(n, {});
  g.in.assign(n, {});
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || coin(rng) >= p) continue;
      g.out[u].push_back(static_cast<std::uint32_t>(v));
      g.in[v].push_back(static_cast<std::uint32_t>(u));
      ++g.edge_count;
    }
  }
  return g;
}

}  // namespace wikirel::testing
