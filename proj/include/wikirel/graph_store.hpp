#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wikirel/types.hpp"

namespace wikirel {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr int kMaxRedirectDepth = 16;

struct LoadStats {
  std::size_t articles = 0;
  std::size_t categories = 0;
  std::size_t redirects = 0;
  std::size_t cat_edges = 0;
  std::size_t link_edges = 0;
  std::size_t duplicate_edges_dropped = 0;
  std::size_t edges_rewritten_by_redirects = 0;
};

// Immutable page/category/link corpus. The canonical fields below are kept
// sorted and deduplicated, so two loads of the same data compare equal no
// matter the row order of the input files. After finalize() the object is
// never mutated and is safe for any number of concurrent readers.
class KnowledgeBase {
 public:
  std::vector<Page> pages;       // ascending id
  std::vector<Edge> cat_edges;   // child page -> parent category
  std::vector<Edge> link_edges;  // article -> article
  std::vector<Edge> redirects;   // redirect page -> final (non-redirect) target
  std::optional<PageId> root_category;

  // Validates the structural invariants and rebuilds the derived indexes.
  // Throws DataError on violations.
  void finalize();

  // Structural equality over the canonical fields only.
  bool operator==(const KnowledgeBase& other) const;

  const Page* find(PageId id) const;
  const Page& at(PageId id) const;  // throws DataError for unknown ids

  // Exact-title lookup first, then a retry with the first character
  // uppercased; redirects are followed. Articles shadow categories when a
  // title exists as both.
  std::optional<PageId> resolve_title(std::string_view term) const;
  std::optional<PageId> resolve_article(std::string_view term) const;
  std::optional<PageId> resolve_category(std::string_view term) const;

  std::span<const PageId> categories_of(PageId page) const;  // parent categories, ascending
  std::span<const PageId> out_links(PageId article) const;   // ascending
  std::span<const PageId> in_links(PageId article) const;    // ascending

  std::size_t count(PageKind kind) const { return kind_counts_[static_cast<int>(kind)]; }

 private:
  std::optional<PageId> lookup_title(std::string_view title, PageKind kind) const;
  std::optional<PageId> resolve_one_pass(std::string_view term) const;

  std::unordered_map<std::string, PageId> by_title_[3];  // indexed by PageKind
  std::unordered_map<PageId, std::uint32_t> index_of_;
  std::unordered_map<PageId, PageId> redirect_of_;
  std::unordered_map<PageId, std::vector<PageId>> parents_of_;
  std::unordered_map<PageId, std::vector<PageId>> out_links_;
  std::unordered_map<PageId, std::vector<PageId>> in_links_;
  std::array<std::size_t, 3> kind_counts_{};
};

// Assembles a KnowledgeBase from raw rows: validates endpoints, resolves
// redirect chains (depth capped at kMaxRedirectDepth, deeper chains are
// treated as cycles), rewrites edge endpoints through redirects and drops
// duplicate edges.
KnowledgeBase build_knowledge_base(std::vector<Page> pages, std::vector<Edge> cat_rows,
                                   std::vector<Edge> link_rows, std::vector<Edge> redirect_rows,
                                   LoadStats* stats = nullptr);

KnowledgeBase load_knowledge_base(const std::filesystem::path& pages_tsv,
                                  const std::filesystem::path& catlinks_tsv,
                                  const std::filesystem::path& pagelinks_tsv,
                                  const std::optional<std::filesystem::path>& redirects_tsv = {},
                                  LoadStats* stats = nullptr);

// Keeps only categories reachable downward from the named root, articles
// attached to surviving categories, links between surviving articles and
// redirects whose target survives. root_category is set on the result.
KnowledgeBase restrict_to_root(const KnowledgeBase& kb, std::string_view root_title);

void save_snapshot(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load_snapshot(const std::filesystem::path& path);
KnowledgeBase snapshot_roundtrip(const KnowledgeBase& kb, const std::filesystem::path& path);

// First character uppercased (ASCII and Cyrillic); the rest untouched.
std::string uppercase_first(std::string_view term);

}  // namespace wikirel
