#include "wikirel/graph_store.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "wikirel/tsv.hpp"

namespace wikirel {

const char* to_string(PageKind kind) {
  switch (kind) {
    case PageKind::Article: return "article";
    case PageKind::Category: return "category";
    case PageKind::Redirect: return "redirect";
  }
  return "?";
}

std::string uppercase_first(std::string_view term) {
  std::string out(term);
  if (out.empty()) return out;
  unsigned char c0 = static_cast<unsigned char>(out[0]);
  if (c0 >= 'a' && c0 <= 'z') {
    out[0] = static_cast<char>(c0 - 'a' + 'A');
    return out;
  }
  // Cyrillic lowercase in UTF-8: а..п = D0 B0..BF, р..я = D1 80..8F, ё = D1 91.
  if (out.size() >= 2) {
    unsigned char c1 = static_cast<unsigned char>(out[1]);
    if (c0 == 0xD0 && c1 >= 0xB0 && c1 <= 0xBF) {
      out[1] = static_cast<char>(c1 - 0x20);
    } else if (c0 == 0xD1 && c1 >= 0x80 && c1 <= 0x8F) {
      out[0] = static_cast<char>(0xD0);
      out[1] = static_cast<char>(c1 + 0x20);
    } else if (c0 == 0xD1 && c1 == 0x91) {
      out[0] = static_cast<char>(0xD0);
      out[1] = static_cast<char>(0x81);
    }
  }
  return out;
}

void KnowledgeBase::finalize() {
  std::sort(pages.begin(), pages.end(),
            [](const Page& a, const Page& b) { return a.id < b.id; });
  std::sort(cat_edges.begin(), cat_edges.end());
  std::sort(link_edges.begin(), link_edges.end());
  std::sort(redirects.begin(), redirects.end());

  for (auto& m : by_title_) m.clear();
  index_of_.clear();
  redirect_of_.clear();
  parents_of_.clear();
  out_links_.clear();
  in_links_.clear();
  kind_counts_.fill(0);

  for (std::uint32_t i = 0; i < pages.size(); ++i) {
    const Page& p = pages[i];
    if (p.id == 0) throw DataError("page id 0 is reserved");
    if (!index_of_.emplace(p.id, i).second) {
      throw DataError("duplicate page id " + std::to_string(p.id));
    }
    auto& titles = by_title_[static_cast<int>(p.kind)];
    if (!titles.emplace(p.title, p.id).second) {
      throw DataError("duplicate " + std::string(to_string(p.kind)) + " title '" + p.title +
                      "'");
    }
    ++kind_counts_[static_cast<int>(p.kind)];
  }

  for (const Edge& r : redirects) {
    const Page& src = at(r.from);
    if (src.kind != PageKind::Redirect) {
      throw DataError("redirect entry for non-redirect page " + std::to_string(r.from));
    }
    const Page& dst = at(r.to);
    if (dst.kind == PageKind::Redirect) {
      throw DataError("unresolved redirect target " + std::to_string(r.to));
    }
    if (!redirect_of_.emplace(r.from, r.to).second) {
      throw DataError("redirect page " + std::to_string(r.from) + " has multiple targets");
    }
  }
  for (const Page& p : pages) {
    if (p.kind == PageKind::Redirect && !redirect_of_.contains(p.id)) {
      throw DataError("redirect page " + std::to_string(p.id) + " ('" + p.title +
                      "') has no target");
    }
  }

  const Edge* prev = nullptr;
  for (const Edge& e : cat_edges) {
    if (prev && *prev == e) throw DataError("duplicate category edge");
    prev = &e;
    const Page& child = at(e.from);
    const Page& parent = at(e.to);
    if (parent.kind != PageKind::Category) {
      throw DataError("category-edge parent " + std::to_string(e.to) + " is not a category");
    }
    if (child.kind == PageKind::Redirect) {
      throw DataError("category-edge child " + std::to_string(e.from) + " is a redirect");
    }
    parents_of_[e.from].push_back(e.to);
  }
  prev = nullptr;
  for (const Edge& e : link_edges) {
    if (prev && *prev == e) throw DataError("duplicate link edge");
    prev = &e;
    const Page& src = at(e.from);
    const Page& dst = at(e.to);
    if (src.kind != PageKind::Article || dst.kind != PageKind::Article) {
      throw DataError("link edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                      " joins non-articles");
    }
    out_links_[e.from].push_back(e.to);
    in_links_[e.to].push_back(e.from);
  }
  if (root_category) {
    const Page& root = at(*root_category);
    if (root.kind != PageKind::Category) {
      throw DataError("root page " + std::to_string(*root_category) + " is not a category");
    }
  }
  // cat_edges/link_edges are sorted by (from, to), so every adjacency list
  // built above is already ascending except in-links.
  for (auto& [id, v] : in_links_) std::sort(v.begin(), v.end());
}

bool KnowledgeBase::operator==(const KnowledgeBase& other) const {
  return pages == other.pages && cat_edges == other.cat_edges &&
         link_edges == other.link_edges && redirects == other.redirects &&
         root_category == other.root_category;
}

const Page* KnowledgeBase::find(PageId id) const {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? nullptr : &pages[it->second];
}

const Page& KnowledgeBase::at(PageId id) const {
  const Page* p = find(id);
  if (!p) throw DataError("unknown page id " + std::to_string(id));
  return *p;
}

std::optional<PageId> KnowledgeBase::lookup_title(std::string_view title, PageKind kind) const {
  const auto& m = by_title_[static_cast<int>(kind)];
  auto it = m.find(std::string(title));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<PageId> KnowledgeBase::resolve_one_pass(std::string_view term) const {
  if (auto id = lookup_title(term, PageKind::Article)) return id;
  if (auto id = lookup_title(term, PageKind::Redirect)) return redirect_of_.at(*id);
  if (auto id = lookup_title(term, PageKind::Category)) return id;
  return std::nullopt;
}

std::optional<PageId> KnowledgeBase::resolve_title(std::string_view term) const {
  if (auto id = resolve_one_pass(term)) return id;
  std::string upper = uppercase_first(term);
  if (upper != term) return resolve_one_pass(upper);
  return std::nullopt;
}

std::optional<PageId> KnowledgeBase::resolve_article(std::string_view term) const {
  auto id = resolve_title(term);
  if (id && at(*id).kind == PageKind::Article) return id;
  return std::nullopt;
}

std::optional<PageId> KnowledgeBase::resolve_category(std::string_view term) const {
  for (int pass = 0; pass < 2; ++pass) {
    std::string upper;
    std::string_view t = term;
    if (pass == 1) {
      upper = uppercase_first(term);
      if (upper == term) break;
      t = upper;
    }
    if (auto id = lookup_title(t, PageKind::Category)) return id;
    if (auto id = lookup_title(t, PageKind::Redirect)) {
      PageId target = redirect_of_.at(*id);
      if (at(target).kind == PageKind::Category) return target;
    }
  }
  return std::nullopt;
}

namespace {
std::span<const PageId> span_or_empty(const std::unordered_map<PageId, std::vector<PageId>>& m,
                                      PageId id) {
  auto it = m.find(id);
  if (it == m.end()) return {};
  return it->second;
}
}  // namespace

std::span<const PageId> KnowledgeBase::categories_of(PageId page) const {
  return span_or_empty(parents_of_, page);
}
std::span<const PageId> KnowledgeBase::out_links(PageId article) const {
  return span_or_empty(out_links_, article);
}
std::span<const PageId> KnowledgeBase::in_links(PageId article) const {
  return span_or_empty(in_links_, article);
}

namespace {

// Follows redirect rows to a final non-redirect target. Chains deeper than
// kMaxRedirectDepth are reported as cycles.
std::unordered_map<PageId, PageId> resolve_redirect_chains(
    const std::vector<Page>& pages, const std::vector<Edge>& redirect_rows) {
  std::unordered_map<PageId, PageKind> kind_of;
  for (const Page& p : pages) kind_of.emplace(p.id, p.kind);

  std::unordered_map<PageId, PageId> next;
  for (const Edge& r : redirect_rows) {
    auto src = kind_of.find(r.from);
    if (src == kind_of.end()) throw DataError("redirect source id " + std::to_string(r.from) +
                                              " is not a known page");
    if (src->second != PageKind::Redirect) {
      throw DataError("redirect entry for non-redirect page " + std::to_string(r.from));
    }
    if (!kind_of.contains(r.to)) {
      throw DataError("redirect target id " + std::to_string(r.to) + " is not a known page");
    }
    if (!next.emplace(r.from, r.to).second) {
      throw DataError("redirect page " + std::to_string(r.from) + " has multiple targets");
    }
  }

  std::unordered_map<PageId, PageId> final_target;
  for (const auto& [src, _] : next) {
    PageId cur = src;
    std::vector<PageId> chain{src};
    for (int depth = 0; depth <= kMaxRedirectDepth; ++depth) {
      auto it = next.find(cur);
      if (it == next.end()) break;  // cur is not a redirect: final
      cur = it->second;
      chain.push_back(cur);
      if (cur == src || depth == kMaxRedirectDepth) {
        std::ostringstream oss;
        oss << "redirect cycle: ";
        for (std::size_t i = 0; i < chain.size(); ++i) {
          if (i) oss << " -> ";
          oss << chain[i];
        }
        throw DataError(oss.str());
      }
    }
    final_target.emplace(src, cur);
  }
  return final_target;
}

}  // namespace

KnowledgeBase build_knowledge_base(std::vector<Page> pages, std::vector<Edge> cat_rows,
                                   std::vector<Edge> link_rows, std::vector<Edge> redirect_rows,
                                   LoadStats* stats) {
  auto final_target = resolve_redirect_chains(pages, redirect_rows);
  auto resolve = [&](PageId id) {
    auto it = final_target.find(id);
    return it == final_target.end() ? id : it->second;
  };

  LoadStats st;
  KnowledgeBase kb;
  kb.pages = std::move(pages);

  for (Edge& e : cat_rows) {
    PageId child = resolve(e.from);
    PageId parent = resolve(e.to);
    if (child != e.from || parent != e.to) ++st.edges_rewritten_by_redirects;
    e = {child, parent};
  }
  for (Edge& e : link_rows) {
    PageId src = resolve(e.from);
    PageId dst = resolve(e.to);
    if (src != e.from || dst != e.to) ++st.edges_rewritten_by_redirects;
    e = {src, dst};
  }

  auto dedupe = [&st](std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    st.duplicate_edges_dropped += static_cast<std::size_t>(edges.end() - last);
    edges.erase(last, edges.end());
  };
  dedupe(cat_rows);
  dedupe(link_rows);
  kb.cat_edges = std::move(cat_rows);
  kb.link_edges = std::move(link_rows);

  kb.redirects.reserve(final_target.size());
  for (const auto& [src, dst] : final_target) kb.redirects.push_back({src, dst});

  kb.finalize();

  st.articles = kb.count(PageKind::Article);
  st.categories = kb.count(PageKind::Category);
  st.redirects = kb.count(PageKind::Redirect);
  st.cat_edges = kb.cat_edges.size();
  st.link_edges = kb.link_edges.size();
  if (stats) *stats = st;
  return kb;
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& pages_tsv,
                                  const std::filesystem::path& catlinks_tsv,
                                  const std::filesystem::path& pagelinks_tsv,
                                  const std::optional<std::filesystem::path>& redirects_tsv,
                                  LoadStats* stats) {
  std::vector<Page> pages;
  tsv::for_each_row(pages_tsv, 3, [&](std::size_t line, const auto& f) {
    PageId id = tsv::parse_page_id(f[0], pages_tsv, line);
    PageKind kind;
    if (f[1] == "A") kind = PageKind::Article;
    else if (f[1] == "C") kind = PageKind::Category;
    else if (f[1] == "R") kind = PageKind::Redirect;
    else {
      throw ParseError(pages_tsv.string() + ":" + std::to_string(line) +
                       ": unknown page kind '" + std::string(f[1]) + "' (want A, C or R)");
    }
    if (f[2].empty()) {
      throw ParseError(pages_tsv.string() + ":" + std::to_string(line) + ": empty title");
    }
    pages.push_back({id, kind, std::string(f[2])});
  });

  auto load_edges = [](const std::filesystem::path& path) {
    std::vector<Edge> edges;
    tsv::for_each_row(path, 2, [&](std::size_t line, const auto& f) {
      edges.push_back({tsv::parse_page_id(f[0], path, line),
                       tsv::parse_page_id(f[1], path, line)});
    });
    return edges;
  };

  std::vector<Edge> cat_rows = load_edges(catlinks_tsv);
  std::vector<Edge> link_rows = load_edges(pagelinks_tsv);
  std::vector<Edge> redirect_rows;
  if (redirects_tsv) redirect_rows = load_edges(*redirects_tsv);

  return build_knowledge_base(std::move(pages), std::move(cat_rows), std::move(link_rows),
                              std::move(redirect_rows), stats);
}

KnowledgeBase restrict_to_root(const KnowledgeBase& kb, std::string_view root_title) {
  auto root = kb.resolve_category(root_title);
  if (!root) {
    throw DataError("root category '" + std::string(root_title) +
                    "' not found or not a category");
  }

  // Downward reachability over reversed category edges. Articles are leaves.
  std::unordered_map<PageId, std::vector<PageId>> children;
  for (const Edge& e : kb.cat_edges) children[e.to].push_back(e.from);

  std::unordered_set<PageId> kept;
  std::queue<PageId> frontier;
  kept.insert(*root);
  frontier.push(*root);
  while (!frontier.empty()) {
    PageId cur = frontier.front();
    frontier.pop();
    auto it = children.find(cur);
    if (it == children.end()) continue;
    for (PageId child : it->second) {
      if (kept.insert(child).second && kb.at(child).kind == PageKind::Category) {
        frontier.push(child);
      }
    }
  }

  KnowledgeBase out;
  for (const Page& p : kb.pages) {
    if (p.kind == PageKind::Redirect) continue;
    if (kept.contains(p.id)) out.pages.push_back(p);
  }
  for (const Edge& r : kb.redirects) {
    if (kept.contains(r.to)) {
      out.pages.push_back(kb.at(r.from));
      out.redirects.push_back(r);
    }
  }
  for (const Edge& e : kb.cat_edges) {
    if (kept.contains(e.from) && kept.contains(e.to)) out.cat_edges.push_back(e);
  }
  for (const Edge& e : kb.link_edges) {
    if (kept.contains(e.from) && kept.contains(e.to)) out.link_edges.push_back(e);
  }
  out.root_category = *root;
  out.finalize();
  return out;
}

// ---------------------------------------------------------------------------
// Snapshot: magic "WKRL", little-endian u32 version, then the canonical
// fields in sorted order. Loading validates magic, version and length.

namespace {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }

  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }

  std::string str(std::size_t n) { return std::string(take(n)); }

  void expect_eof() const {
    if (pos_ != data_.size()) throw DataError("snapshot has trailing bytes");
  }

 private:
  std::string_view take(std::size_t n) {
    if (pos_ + n > data_.size()) throw DataError("truncated snapshot");
    std::string_view v(data_.data() + pos_, n);
    pos_ += n;
    return v;
  }

  std::string data_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'W', 'K', 'R', 'L'};

}  // namespace

void save_snapshot(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kSnapshotVersion);

  put_u64(out, kb.pages.size());
  for (const Page& p : kb.pages) {
    put_u32(out, p.id);
    put_u8(out, static_cast<std::uint8_t>(p.kind));
    put_u32(out, static_cast<std::uint32_t>(p.title.size()));
    out.append(p.title);
  }
  auto put_edges = [&out](const std::vector<Edge>& edges) {
    put_u64(out, edges.size());
    for (const Edge& e : edges) {
      put_u32(out, e.from);
      put_u32(out, e.to);
    }
  };
  put_edges(kb.redirects);
  put_edges(kb.cat_edges);
  put_edges(kb.link_edges);
  put_u8(out, kb.root_category ? 1 : 0);
  if (kb.root_category) put_u32(out, *kb.root_category);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write snapshot " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("short write to snapshot " + path.string());
}

KnowledgeBase load_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open snapshot " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  Reader r(std::move(buf).str());

  std::string magic = r.str(4);
  if (magic != std::string_view(kMagic, 4)) {
    throw DataError("not a snapshot (bad magic) in " + path.string());
  }
  std::uint32_t version = r.u32();
  if (version != kSnapshotVersion) {
    throw DataError("snapshot version mismatch: file has " + std::to_string(version) +
                    ", this build reads " + std::to_string(kSnapshotVersion));
  }

  KnowledgeBase kb;
  std::uint64_t n_pages = r.u64();
  kb.pages.reserve(n_pages);
  for (std::uint64_t i = 0; i < n_pages; ++i) {
    Page p;
    p.id = r.u32();
    std::uint8_t kind = r.u8();
    if (kind > 2) throw DataError("snapshot has unknown page kind");
    p.kind = static_cast<PageKind>(kind);
    p.title = r.str(r.u32());
    kb.pages.push_back(std::move(p));
  }
  auto read_edges = [&r](std::vector<Edge>& edges) {
    std::uint64_t n = r.u64();
    edges.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      PageId from = r.u32();
      PageId to = r.u32();
      edges.push_back({from, to});
    }
  };
  read_edges(kb.redirects);
  read_edges(kb.cat_edges);
  read_edges(kb.link_edges);
  if (r.u8()) kb.root_category = r.u32();
  r.expect_eof();

  kb.finalize();
  return kb;
}

KnowledgeBase snapshot_roundtrip(const KnowledgeBase& kb, const std::filesystem::path& path) {
  save_snapshot(kb, path);
  return load_snapshot(path);
}

}  // namespace wikirel
