#include "wikirel/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>
#include <queue>

#include "category_graph.hpp"
#include "wikirel/tsv.hpp"

namespace wikirel {

std::uint32_t CondensedTaxonomy::supernode_of(PageId category) const {
  auto s = find_supernode(category);
  if (!s) throw DataError("category id " + std::to_string(category) + " not in taxonomy");
  return *s;
}

std::optional<std::uint32_t> CondensedTaxonomy::find_supernode(PageId category) const {
  auto it = supernode_index.find(category);
  if (it == supernode_index.end()) return std::nullopt;
  return it->second;
}

std::size_t CondensedTaxonomy::category_count() const {
  return supernode_index.size();
}

std::vector<std::uint32_t> CondensedTaxonomy::ancestors_of(std::uint32_t s) const {
  std::vector<bool> seen(supernodes.size(), false);
  std::vector<std::uint32_t> out;
  std::queue<std::uint32_t> frontier;
  seen[s] = true;
  out.push_back(s);
  frontier.push(s);
  while (!frontier.empty()) {
    std::uint32_t cur = frontier.front();
    frontier.pop();
    for (std::uint32_t p : parents[cur]) {
      if (!seen[p]) {
        seen[p] = true;
        out.push_back(p);
        frontier.push(p);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CondensedTaxonomy condense(const KnowledgeBase& kb) {
  detail::CategoryGraph g = detail::extract_category_graph(kb);
  if (g.cats.empty()) throw DataError("no taxonomy: the corpus has no categories");

  auto components = detail::strongly_connected_components(g.out);

  CondensedTaxonomy ct;
  ct.supernodes.reserve(components.size());
  std::vector<std::uint32_t> supernode_of_local(g.cats.size());
  for (std::uint32_t s = 0; s < components.size(); ++s) {
    std::vector<PageId> members;
    members.reserve(components[s].size());
    for (std::uint32_t local : components[s]) {
      members.push_back(g.cats[local]);
      supernode_of_local[local] = s;
      ct.supernode_index.emplace(g.cats[local], s);
    }
    ct.supernodes.push_back(std::move(members));  // already ascending
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> dag_edges;
  for (std::uint32_t c = 0; c < g.out.size(); ++c) {
    for (std::uint32_t p : g.out[c]) {
      std::uint32_t sc = supernode_of_local[c];
      std::uint32_t sp = supernode_of_local[p];
      if (sc != sp) dag_edges.push_back({sc, sp});
    }
  }
  std::sort(dag_edges.begin(), dag_edges.end());
  dag_edges.erase(std::unique(dag_edges.begin(), dag_edges.end()), dag_edges.end());

  // from_child_parent_edges runs a full topological sort, so acyclicity of
  // the condensation is re-verified on every build.
  ct.dag = Dag::from_child_parent_edges(static_cast<std::uint32_t>(ct.supernodes.size()),
                                        dag_edges);
  ct.parents.assign(ct.supernodes.size(), {});
  for (const auto& [child, parent] : dag_edges) ct.parents[child].push_back(parent);

  // Attach articles to the supernode of each parent category.
  std::vector<std::vector<PageId>> raw_attach(ct.supernodes.size());
  for (const Edge& e : kb.cat_edges) {
    if (kb.at(e.from).kind != PageKind::Article) continue;
    raw_attach[ct.supernode_index.at(e.to)].push_back(e.from);
  }
  std::vector<PageId> all_articles;
  for (auto& v : raw_attach) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    all_articles.insert(all_articles.end(), v.begin(), v.end());
  }
  std::sort(all_articles.begin(), all_articles.end());
  all_articles.erase(std::unique(all_articles.begin(), all_articles.end()),
                     all_articles.end());
  ct.attached_articles = std::move(all_articles);

  ct.article_attach.assign(ct.supernodes.size(), {});
  for (std::uint32_t s = 0; s < raw_attach.size(); ++s) {
    for (PageId article : raw_attach[s]) {
      auto it = std::lower_bound(ct.attached_articles.begin(), ct.attached_articles.end(),
                                 article);
      ct.article_attach[s].push_back(
          static_cast<std::uint32_t>(it - ct.attached_articles.begin()));
    }
  }

  ct.total_concepts = ct.supernode_index.size() + ct.attached_articles.size();
  if (kb.root_category) ct.root_supernode = ct.supernode_index.at(*kb.root_category);
  return ct;
}

HypoTable compute_hypo_table(const CondensedTaxonomy& ct, int jobs) {
  const std::size_t n = ct.supernodes.size();

  std::vector<Bitset> sn_seeds(n, Bitset(n));
  for (std::uint32_t s = 0; s < n; ++s) sn_seeds[s].set(s);
  std::vector<Bitset> sn_below = union_below(ct.dag, std::move(sn_seeds), jobs);

  std::vector<Bitset> art_seeds(n, Bitset(ct.attached_articles.size()));
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t a : ct.article_attach[s]) art_seeds[s].set(a);
  }
  std::vector<Bitset> arts_below = union_below(ct.dag, std::move(art_seeds), jobs);

  HypoTable ht;
  ht.total_concepts = ct.total_concepts;
  ht.hypo.assign(n, 0);
  const std::int64_t k = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(std::max(jobs, 1)) schedule(static) if (jobs > 1)
  for (std::int64_t i = 0; i < k; ++i) {
    std::uint32_t s = static_cast<std::uint32_t>(i);
    std::uint64_t cats_below = 0;
    for (std::size_t t = sn_below[s].find_first(); t != Bitset::npos;
         t = sn_below[s].find_next(t)) {
      if (t != s) cats_below += ct.supernodes[t].size();
    }
    ht.hypo[s] = cats_below + arts_below[s].count() + (ct.supernodes[s].size() - 1);
  }

  // A descendant count can never reach the concept total; breaching this is
  // exactly the overflow signature a cyclic or double-counting walk leaves.
  for (std::uint32_t s = 0; s < n; ++s) {
    if (ht.hypo[s] > ht.total_concepts - 1) {
      throw DataError("hyponym count " + std::to_string(ht.hypo[s]) + " of supernode " +
                      std::to_string(s) + " exceeds the concept total " +
                      std::to_string(ht.total_concepts));
    }
  }
  return ht;
}

double supernode_ic(const HypoTable& ht, std::uint32_t s) {
  if (ht.total_concepts < 2) throw DataError("degenerate taxonomy: fewer than two concepts");
  return 1.0 - std::log(static_cast<double>(ht.hypo[s]) + 1.0) /
                   std::log(static_cast<double>(ht.total_concepts));
}

double category_ic(const CondensedTaxonomy& ct, const HypoTable& ht, PageId category) {
  return supernode_ic(ht, ct.supernode_of(category));
}

std::optional<LcsResult> lcs(const CondensedTaxonomy& ct, const HypoTable& ht, PageId c1,
                             PageId c2) {
  std::vector<std::uint32_t> anc1 = ct.ancestors_of(ct.supernode_of(c1));
  std::vector<std::uint32_t> anc2 = ct.ancestors_of(ct.supernode_of(c2));
  std::vector<std::uint32_t> common;
  std::set_intersection(anc1.begin(), anc1.end(), anc2.begin(), anc2.end(),
                        std::back_inserter(common));
  if (common.empty()) return std::nullopt;

  std::uint32_t best = common.front();
  for (std::uint32_t s : common) {
    if (ht.hypo[s] < ht.hypo[best]) best = s;  // ties keep the smallest id
  }
  bool root_only =
      ct.root_supernode && common.size() == 1 && common.front() == *ct.root_supernode;
  return LcsResult{best, supernode_ic(ht, best), root_only};
}

std::vector<PageId> concept_categories(const KnowledgeBase& kb, PageId page) {
  const Page& p = kb.at(page);
  if (p.kind == PageKind::Category) return {page};
  auto cats = kb.categories_of(page);
  return {cats.begin(), cats.end()};
}

RelatednessScore res_hypo_relatedness(const KnowledgeBase& kb, const CondensedTaxonomy& ct,
                                      const HypoTable& ht, std::string_view term1,
                                      std::string_view term2) {
  auto id1 = kb.resolve_title(term1);
  auto id2 = kb.resolve_title(term2);
  if (!id1 || !id2) return RelatednessScore::skip(SkipReason::TermNotFound);

  std::vector<PageId> cats1 = concept_categories(kb, *id1);
  std::vector<PageId> cats2 = concept_categories(kb, *id2);

  bool any_common = false;
  std::optional<double> best;
  for (PageId c1 : cats1) {
    for (PageId c2 : cats2) {
      auto r = lcs(ct, ht, c1, c2);
      if (!r) continue;
      any_common = true;
      if (r->root_only) continue;
      if (!best || r->ic > *best) best = r->ic;
    }
  }
  if (best) return RelatednessScore::of(*best);
  if (any_common) return RelatednessScore::of(0.0);  // the root is all they share
  return RelatednessScore::skip(SkipReason::NoCommonConcept);
}

CorpusCounts load_corpus_counts(const std::filesystem::path& path) {
  std::map<std::string, std::uint64_t> acc;
  tsv::for_each_row(path, 2, [&](std::size_t line, const auto& f) {
    acc[std::string(f[0])] += tsv::parse_u64(f[1], path, line);
  });
  CorpusCounts cc;
  cc.counts.reserve(acc.size());
  for (auto& [word, count] : acc) {
    cc.counts.emplace_back(word, count);
    cc.total += count;
  }
  return cc;
}

WordConcepts load_word_concepts(const std::filesystem::path& path, const KnowledgeBase& kb) {
  WordConcepts wc;
  tsv::for_each_row(path, 2, [&](std::size_t line, const auto& f) {
    auto cat = kb.resolve_category(f[1]);
    if (!cat) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": unknown category '" +
                       std::string(f[1]) + "'");
    }
    auto& cats = wc[std::string(f[0])];
    if (std::find(cats.begin(), cats.end(), *cat) == cats.end()) cats.push_back(*cat);
  });
  for (auto& [word, cats] : wc) std::sort(cats.begin(), cats.end());
  return wc;
}

FreqTable compute_freq_table(const CondensedTaxonomy& ct, const CorpusCounts& cc,
                             const WordConcepts& word_concepts, int jobs) {
  if (cc.total == 0) throw DataError("empty corpus");
  const std::size_t n = ct.supernodes.size();
  const std::size_t n_words = cc.counts.size();

  auto word_index = [&cc](const std::string& word) -> std::optional<std::size_t> {
    auto it = std::lower_bound(cc.counts.begin(), cc.counts.end(), word,
                               [](const auto& entry, const std::string& w) {
                                 return entry.first < w;
                               });
    if (it == cc.counts.end() || it->first != word) return std::nullopt;
    return static_cast<std::size_t>(it - cc.counts.begin());
  };

  std::vector<Bitset> seeds(n, Bitset(n_words));
  for (const auto& [word, cats] : word_concepts) {
    auto w = word_index(word);
    if (!w) continue;  // word never occurs in the corpus
    for (PageId cat : cats) seeds[ct.supernode_of(cat)].set(*w);
  }
  std::vector<Bitset> below = union_below(ct.dag, std::move(seeds), jobs);

  FreqTable ft;
  ft.total = cc.total;
  ft.freq.assign(n, 0);
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::size_t w = below[s].find_first(); w != Bitset::npos;
         w = below[s].find_next(w)) {
      ft.freq[s] += cc.counts[w].second;
    }
  }
  return ft;
}

RelatednessScore res_resnik(const KnowledgeBase& kb, const FreqTable& ft,
                            const CondensedTaxonomy& ct, std::string_view term1,
                            std::string_view term2) {
  auto id1 = kb.resolve_title(term1);
  auto id2 = kb.resolve_title(term2);
  if (!id1 || !id2) return RelatednessScore::skip(SkipReason::TermNotFound);

  std::vector<PageId> cats1 = concept_categories(kb, *id1);
  std::vector<PageId> cats2 = concept_categories(kb, *id2);

  bool any_common = false;
  std::optional<double> best;
  for (PageId c1 : cats1) {
    for (PageId c2 : cats2) {
      std::vector<std::uint32_t> anc1 = ct.ancestors_of(ct.supernode_of(c1));
      std::vector<std::uint32_t> anc2 = ct.ancestors_of(ct.supernode_of(c2));
      std::vector<std::uint32_t> common;
      std::set_intersection(anc1.begin(), anc1.end(), anc2.begin(), anc2.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      any_common = true;
      bool root_only =
          ct.root_supernode && common.size() == 1 && common.front() == *ct.root_supernode;
      if (root_only) continue;
      for (std::uint32_t s : common) {
        double p = ft.probability(s);
        if (p <= 0.0) continue;  // unobserved concept
        double v = p >= 1.0 ? 0.0 : -std::log(p);
        if (!best || v > *best) best = v;
      }
    }
  }
  if (best) return RelatednessScore::of(*best);
  if (any_common) return RelatednessScore::of(0.0);
  return RelatednessScore::skip(SkipReason::NoCommonConcept);
}

}  // namespace wikirel
