#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wikirel/dag_union.hpp"
#include "wikirel/graph_store.hpp"
#include "wikirel/types.hpp"

namespace wikirel {

// Category graph after strongly-connected-component condensation.
// Supernodes are numbered by their smallest member id, so the numbering is
// independent of traversal order. Immutable once built; all queries are
// safe to run concurrently.
struct CondensedTaxonomy {
  std::vector<std::vector<PageId>> supernodes;      // member category ids, each sorted
  std::vector<std::vector<std::uint32_t>> parents;  // per supernode, ascending
  Dag dag;                                          // child->parent edges between supernodes
  std::vector<PageId> attached_articles;            // distinct attached article ids, ascending
  std::vector<std::vector<std::uint32_t>> article_attach;  // indices into attached_articles
  std::uint64_t total_concepts = 0;                 // categories + attached articles
  std::optional<std::uint32_t> root_supernode;      // set when the kb was root-restricted

  std::uint32_t supernode_of(PageId category) const;  // throws DataError
  std::optional<std::uint32_t> find_supernode(PageId category) const;
  std::size_t category_count() const;

  // Ancestor supernodes of s including s itself, ascending.
  std::vector<std::uint32_t> ancestors_of(std::uint32_t s) const;

  std::unordered_map<PageId, std::uint32_t> supernode_index;
};

// Throws DataError("no taxonomy") when the kb has no categories.
CondensedTaxonomy condense(const KnowledgeBase& kb);

struct CycleReport {
  std::vector<std::vector<PageId>> components;  // SCCs with more than one member
  std::vector<PageId> self_loops;               // ascending
  std::vector<std::vector<PageId>> elementary_cycles;  // each starts at its smallest id
  bool truncated = false;
};

// Census of cycles in the raw category graph. Elementary cycles are
// enumerated per component (Johnson's algorithm) up to max_elementary,
// then the report is flagged truncated. Self-loops are listed separately
// and excluded from the elementary enumeration.
CycleReport detect_cycles(const KnowledgeBase& kb, std::size_t max_elementary = 10'000);

// hypo[s]: number of distinct descendant concepts of supernode s — categories
// strictly below, articles attached at or below, and the other members of
// s's own component. Computed by bitset union in reverse-topological order;
// summing child counts would double-count shared descendants in a DAG.
struct HypoTable {
  std::vector<std::uint64_t> hypo;
  std::uint64_t total_concepts = 0;
};

HypoTable compute_hypo_table(const CondensedTaxonomy& ct, int jobs = 1);

// 1 - log(hypo + 1)/log(C). Throws DataError when C < 2.
double supernode_ic(const HypoTable& ht, std::uint32_t s);
double category_ic(const CondensedTaxonomy& ct, const HypoTable& ht, PageId category);

struct LcsResult {
  std::uint32_t lcs_supernode = 0;
  double ic = 0.0;
  bool root_only = false;  // the root is the only common subsumer
};

// Most informative common subsumer: minimal hypo, ties broken by smallest
// supernode id. Empty result when the two categories share no ancestor.
std::optional<LcsResult> lcs(const CondensedTaxonomy& ct, const HypoTable& ht, PageId c1,
                             PageId c2);

enum class SkipReason { TermNotFound, NoCommonConcept };

struct RelatednessScore {
  std::optional<double> value;
  SkipReason reason = SkipReason::NoCommonConcept;

  bool skipped() const { return !value.has_value(); }
  static RelatednessScore of(double v) { return {v, SkipReason::NoCommonConcept}; }
  static RelatednessScore skip(SkipReason r) { return {std::nullopt, r}; }
};

// Categories the relatedness metrics consider for a resolved page: the
// parent categories for an article, the category itself for a category page.
std::vector<PageId> concept_categories(const KnowledgeBase& kb, PageId page);

// Maximum lcs informativeness over all category pairs of the two terms'
// pages. Pairs whose only common subsumer is the root score zero; terms
// that do not resolve, or pages without any common subsumer, are skipped.
RelatednessScore res_hypo_relatedness(const KnowledgeBase& kb, const CondensedTaxonomy& ct,
                                      const HypoTable& ht, std::string_view term1,
                                      std::string_view term2);

struct CorpusCounts {
  std::vector<std::pair<std::string, std::uint64_t>> counts;  // sorted by word
  std::uint64_t total = 0;                                    // all occurrences
};

// word<TAB>count rows; duplicate words are summed.
CorpusCounts load_corpus_counts(const std::filesystem::path& path);

using WordConcepts = std::map<std::string, std::vector<PageId>>;

// word<TAB>category_title rows, validated against the kb.
WordConcepts load_word_concepts(const std::filesystem::path& path, const KnowledgeBase& kb);

// freq[s]: summed counts of the distinct words mapped at or below s, so a
// word reachable through two children is counted once. probability() is
// non-decreasing from descendant to ancestor by construction.
struct FreqTable {
  std::vector<std::uint64_t> freq;
  std::uint64_t total = 0;

  double probability(std::uint32_t s) const {
    return static_cast<double>(freq[s]) / static_cast<double>(total);
  }
};

// Throws DataError("empty corpus") when the corpus total is zero.
FreqTable compute_freq_table(const CondensedTaxonomy& ct, const CorpusCounts& cc,
                             const WordConcepts& word_concepts, int jobs = 1);

// Corpus-frequency relatedness: max over common subsumers of -ln P(C),
// maximized over both pages' category sets. Subsumers with P = 0 are
// excluded as unobserved; root-only pairs score zero; skip rules match
// res_hypo_relatedness. Result is >= 0 and unnormalized.
RelatednessScore res_resnik(const KnowledgeBase& kb, const FreqTable& ft,
                            const CondensedTaxonomy& ct, std::string_view term1,
                            std::string_view term2);

}  // namespace wikirel
