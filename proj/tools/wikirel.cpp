// wikirel: relatedness queries, link-analysis search and gold-set evaluation
// over a categorized, hyperlinked page corpus.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wikirel/ahits.hpp"
#include "wikirel/eval.hpp"
#include "wikirel/graph_store.hpp"
#include "wikirel/taxonomy.hpp"

namespace {

using namespace wikirel;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerateStats = 3;

struct InputOpts {
  std::string snapshot;
  std::string pages, catlinks, pagelinks, redirects;
  std::string root;
  std::string format = "text";
  int jobs = 1;
};

void add_input_options(CLI::App* cmd, InputOpts& io) {
  cmd->add_option("--snapshot", io.snapshot, "Binary snapshot to load")
      ->envname("WIKIREL_SNAPSHOT");
  cmd->add_option("--pages", io.pages, "pages.tsv (id<TAB>kind<TAB>title, kind A|C|R)");
  cmd->add_option("--catlinks", io.catlinks, "catlinks.tsv (child_id<TAB>parent_category_id)");
  cmd->add_option("--pagelinks", io.pagelinks, "pagelinks.tsv (src_id<TAB>dst_id)");
  cmd->add_option("--redirects", io.redirects, "redirects.tsv (src_id<TAB>dst_id)");
  cmd->add_option("--root", io.root, "Restrict the taxonomy to this root category");
  cmd->add_option("--jobs", io.jobs, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--format", io.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
}

// Exactly one input source: a snapshot or the TSV set.
KnowledgeBase load_input(const InputOpts& io) {
  bool have_tsv = !io.pages.empty() || !io.catlinks.empty() || !io.pagelinks.empty();
  if (!io.snapshot.empty() && have_tsv) {
    throw CLI::ValidationError("input", "--snapshot and --pages/... are mutually exclusive");
  }
  KnowledgeBase kb;
  if (!io.snapshot.empty()) {
    kb = load_snapshot(io.snapshot);
  } else if (have_tsv) {
    if (io.pages.empty() || io.catlinks.empty() || io.pagelinks.empty()) {
      throw CLI::ValidationError("input",
                                 "--pages, --catlinks and --pagelinks are all required");
    }
    std::optional<std::filesystem::path> redirects;
    if (!io.redirects.empty()) redirects = io.redirects;
    kb = load_knowledge_base(io.pages, io.catlinks, io.pagelinks, redirects);
  } else {
    throw CLI::ValidationError("input", "no input: give --snapshot or --pages/--catlinks/--pagelinks");
  }
  if (!io.root.empty()) kb = restrict_to_root(kb, io.root);
  return kb;
}

struct AhitsOpts {
  AhitsParams params;
  double c_max_value = 0.0;
  bool c_max_set = false;
};

void add_ahits_options(CLI::App* cmd, AhitsOpts& ao) {
  cmd->add_option("--root-set", ao.params.root_set_size, "Root set size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--increment", ao.params.increment, "Base-set increment per root node")
      ->capture_default_str();
  cmd->add_option("--n-sought", ao.params.n_sought, "Number of related terms sought")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--c-max", ao.c_max_value, "Cluster-weight cap (stored, not applied)");
  cmd->add_option("--epsilon", ao.params.epsilon, "Convergence threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iter", ao.params.max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--whitelist", ao.params.category_whitelist,
                  "Only expand candidates with one of these categories");
  cmd->add_option("--blacklist", ao.params.category_blacklist,
                  "Never expand candidates with one of these categories");
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit_report(const EvalReport& report, const std::string& format) {
  if (format == "json") {
    std::cout << report.to_json().dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << report.to_csv();
  } else {
    std::cout << report.to_text();
  }
}

int cmd_ingest(const InputOpts& io, const std::string& out_path) {
  LoadStats stats;
  std::optional<std::filesystem::path> redirects;
  if (!io.redirects.empty()) redirects = io.redirects;
  KnowledgeBase kb =
      load_knowledge_base(io.pages, io.catlinks, io.pagelinks, redirects, &stats);
  if (!io.root.empty()) kb = restrict_to_root(kb, io.root);
  save_snapshot(kb, out_path);
  std::cout << "pages: " << kb.pages.size() << " (articles " << stats.articles
            << ", categories " << stats.categories << ", redirects " << stats.redirects
            << ")\n";
  std::cout << "category edges: " << stats.cat_edges << '\n';
  std::cout << "link edges: " << stats.link_edges << '\n';
  std::cout << "duplicate edges dropped: " << stats.duplicate_edges_dropped << '\n';
  std::cout << "edges rewritten through redirects: " << stats.edges_rewritten_by_redirects
            << '\n';
  std::cout << "snapshot written: " << out_path << '\n';
  return kExitOk;
}

int cmd_cycles(const InputOpts& io, std::size_t max_elementary) {
  KnowledgeBase kb = load_input(io);
  CycleReport report = detect_cycles(kb, max_elementary);
  if (io.format == "json") {
    nlohmann::ordered_json j;
    j["n_components"] = report.components.size();
    j["n_self_loops"] = report.self_loops.size();
    j["components"] = report.components;
    j["self_loops"] = report.self_loops;
    j["elementary_cycles"] = report.elementary_cycles;
    j["truncated"] = report.truncated;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << report.components.size() << " components, " << report.self_loops.size()
            << " self-loops\n";
  for (const auto& comp : report.components) {
    std::cout << "component:";
    for (PageId id : comp) std::cout << ' ' << id;
    std::cout << '\n';
  }
  if (!report.self_loops.empty()) {
    std::cout << "self-loops:";
    for (PageId id : report.self_loops) std::cout << ' ' << id;
    std::cout << '\n';
  }
  std::cout << "elementary cycles: " << report.elementary_cycles.size()
            << (report.truncated ? " (truncated)" : "") << '\n';
  for (const auto& cycle : report.elementary_cycles) {
    std::cout << "  ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) std::cout << " -> ";
      std::cout << cycle[i];
    }
    std::cout << " -> " << cycle.front() << '\n';
  }
  return kExitOk;
}

int cmd_hypo(const InputOpts& io, const std::vector<std::string>& titles) {
  KnowledgeBase kb = load_input(io);
  CondensedTaxonomy ct = condense(kb);
  HypoTable ht = compute_hypo_table(ct, io.jobs);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& title : titles) {
    auto id = kb.resolve_category(title);
    if (!id) throw DataError("category '" + title + "' not found");
    std::uint32_t s = ct.supernode_of(*id);
    if (io.format == "json") {
      out.push_back({{"category", title},
                     {"supernode_size", ct.supernodes[s].size()},
                     {"hypo", ht.hypo[s]},
                     {"ic", supernode_ic(ht, s)}});
    } else {
      std::cout << title << "\thypo=" << ht.hypo[s] << "\tic=" << fmt6(supernode_ic(ht, s))
                << '\n';
    }
  }
  if (io.format == "json") std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_rel(const InputOpts& io, const std::string& method, const std::string& corpus_counts,
            const std::string& word_concepts, const std::string& word1,
            const std::string& word2) {
  KnowledgeBase kb = load_input(io);
  CondensedTaxonomy ct = condense(kb);
  HypoTable ht = compute_hypo_table(ct, io.jobs);

  RelatednessScore score;
  if (method == "res_hypo") {
    score = res_hypo_relatedness(kb, ct, ht, word1, word2);
  } else {
    if (corpus_counts.empty() || word_concepts.empty()) {
      throw CLI::ValidationError("--method",
                                 "res_resnik needs --corpus-counts and --word-concepts");
    }
    CorpusCounts cc = load_corpus_counts(corpus_counts);
    WordConcepts wc = load_word_concepts(word_concepts, kb);
    FreqTable ft = compute_freq_table(ct, cc, wc, io.jobs);
    score = res_resnik(kb, ft, ct, word1, word2);
  }

  if (io.format == "json") {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["word1"] = word1;
    j["word2"] = word2;
    j["value"] = score.skipped() ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(*score.value);
    j["status"] = score.skipped()
                      ? (score.reason == SkipReason::TermNotFound ? "skipped_not_found"
                                                                  : "skipped_no_common")
                      : "ok";
    std::cout << j.dump(2) << '\n';
  } else if (score.skipped()) {
    std::cout << method << "=skipped("
              << (score.reason == SkipReason::TermNotFound ? "term-not-found"
                                                           : "no-common-concept")
              << ")\n";
  } else {
    std::cout << method << '=' << fmt6(*score.value) << '\n';
  }
  return kExitOk;
}

int cmd_hits(const InputOpts& io, const AhitsParams& params, const std::string& seed) {
  KnowledgeBase kb = load_input(io);
  auto list = related_terms(kb, seed, params, io.jobs);
  if (!list) throw DataError("seed term '" + seed + "' not found");
  if (io.format == "json") {
    nlohmann::ordered_json j;
    j["seed"] = kb.at(list->seed).title;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : list->entries) {
      entries.push_back({{"title", e.title}, {"authority", e.authority}});
    }
    j["entries"] = std::move(entries);
    std::cout << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < list->entries.size(); ++i) {
      std::cout << (i + 1) << '\t' << list->entries[i].title << '\t'
                << fmt6(list->entries[i].authority) << '\n';
    }
  }
  return kExitOk;
}

int cmd_eval(const InputOpts& io, const std::string& method, const std::string& comparator,
             const std::string& gold_path, const AhitsParams& params,
             const std::string& corpus_counts, const std::string& word_concepts,
             bool no_timing) {
  KnowledgeBase kb = load_input(io);
  GoldSet gold = load_gold(gold_path);
  if (gold.empty()) std::cerr << "warning: gold file " << gold_path << " is empty\n";

  EvalReport report;
  if (method == "ahits") {
    Comparator cmp = comparator == "overlap" ? Comparator::Overlap : Comparator::Footrule;
    report = evaluate_ahits(kb, gold, params, cmp, io.jobs);
  } else {
    auto offline_start = Clock::now();
    CondensedTaxonomy ct = condense(kb);
    HypoTable ht = compute_hypo_table(ct, io.jobs);
    std::optional<FreqTable> ft;
    Method m = Method::ResHypo;
    if (method == "res_resnik") {
      m = Method::ResResnik;
      if (corpus_counts.empty() || word_concepts.empty()) {
        throw CLI::ValidationError("--method",
                                   "res_resnik needs --corpus-counts and --word-concepts");
      }
      CorpusCounts cc = load_corpus_counts(corpus_counts);
      WordConcepts wc = load_word_concepts(word_concepts, kb);
      ft = compute_freq_table(ct, cc, wc, io.jobs);
    }
    auto offline_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - offline_start)
            .count());
    report = evaluate_relatedness(kb, gold, m, ct, ht, ft ? &*ft : nullptr, io.jobs,
                                  offline_ms);
  }
  if (no_timing) {
    report.offline_ms = 0;
    report.online_ms = 0;
  }
  emit_report(report, io.format);
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Semantic relatedness over a categorized, hyperlinked page corpus"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load TSV files and write a snapshot");
  InputOpts ingest_io;
  std::string ingest_out;
  ingest->add_option("--pages", ingest_io.pages, "pages.tsv")->required();
  ingest->add_option("--catlinks", ingest_io.catlinks, "catlinks.tsv")->required();
  ingest->add_option("--pagelinks", ingest_io.pagelinks, "pagelinks.tsv")->required();
  ingest->add_option("--redirects", ingest_io.redirects, "redirects.tsv");
  ingest->add_option("--root", ingest_io.root, "Restrict to this root before snapshotting");
  ingest->add_option("--snapshot", ingest_out, "Output snapshot path")
      ->envname("WIKIREL_SNAPSHOT")
      ->required();

  // cycles
  auto* cycles = app.add_subcommand("cycles", "Census of category-graph cycles");
  InputOpts cycles_io;
  std::size_t max_elementary = 10'000;
  add_input_options(cycles, cycles_io);
  cycles->add_option("--max-elementary", max_elementary,
                     "Cap on enumerated elementary cycles")
      ->capture_default_str();

  // hypo
  auto* hypo = app.add_subcommand("hypo", "Hyponym count and informativeness of categories");
  InputOpts hypo_io;
  std::vector<std::string> hypo_titles;
  add_input_options(hypo, hypo_io);
  hypo->add_option("category", hypo_titles, "Category title(s)")->required();

  // rel
  auto* rel = app.add_subcommand("rel", "Relatedness of a word pair");
  InputOpts rel_io;
  std::string rel_method = "res_hypo";
  std::string rel_corpus_counts, rel_word_concepts;
  std::vector<std::string> rel_words;
  add_input_options(rel, rel_io);
  rel->add_option("--method", rel_method, "Relatedness metric")
      ->check(CLI::IsMember({"res_hypo", "res_resnik"}))
      ->capture_default_str();
  rel->add_option("--corpus-counts", rel_corpus_counts, "word<TAB>count file (res_resnik)");
  rel->add_option("--word-concepts", rel_word_concepts,
                  "word<TAB>category_title file (res_resnik)");
  rel->add_option("words", rel_words, "The two words to compare")
      ->expected(2)
      ->required();

  // hits
  auto* hits = app.add_subcommand("hits", "Ranked related terms for a seed article");
  InputOpts hits_io;
  AhitsOpts hits_ahits;
  std::string hits_seed;
  add_input_options(hits, hits_io);
  add_ahits_options(hits, hits_ahits);
  hits->add_option("seed", hits_seed, "Seed term")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a method against a gold word-pair file");
  InputOpts eval_io;
  eval_io.format = "json";
  AhitsOpts eval_ahits;
  std::string eval_method = "res_hypo";
  std::string eval_comparator = "footrule";
  std::string eval_gold, eval_corpus_counts, eval_word_concepts;
  bool eval_no_timing = false;
  add_input_options(eval, eval_io);
  add_ahits_options(eval, eval_ahits);
  eval->add_option("--method", eval_method, "Method to evaluate")
      ->check(CLI::IsMember({"res_hypo", "res_resnik", "ahits"}))
      ->capture_default_str();
  eval->add_option("--comparator", eval_comparator, "Ranked-list comparison (ahits)")
      ->check(CLI::IsMember({"footrule", "overlap"}))
      ->capture_default_str();
  eval->add_option("--gold", eval_gold, "Gold file (word1<TAB>word2<TAB>score)")->required();
  eval->add_option("--corpus-counts", eval_corpus_counts, "word<TAB>count file (res_resnik)");
  eval->add_option("--word-concepts", eval_word_concepts,
                   "word<TAB>category_title file (res_resnik)");
  eval->add_flag("--no-timing", eval_no_timing,
                 "Zero the timing fields for byte-reproducible reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_io, ingest_out);
    if (*cycles) return cmd_cycles(cycles_io, max_elementary);
    if (*hypo) return cmd_hypo(hypo_io, hypo_titles);
    if (*rel) return cmd_rel(rel_io, rel_method, rel_corpus_counts, rel_word_concepts,
                             rel_words[0], rel_words[1]);
    if (*hits) {
      if (hits->count("--c-max")) hits_ahits.params.c_max = hits_ahits.c_max_value;
      return cmd_hits(hits_io, hits_ahits.params, hits_seed);
    }
    if (*eval) {
      if (eval->count("--c-max")) eval_ahits.params.c_max = eval_ahits.c_max_value;
      return cmd_eval(eval_io, eval_method, eval_comparator, eval_gold, eval_ahits.params,
                      eval_corpus_counts, eval_word_concepts, eval_no_timing);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "wikirel: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StatsError& e) {
    std::cerr << "wikirel: " << e.what() << '\n';
    return kExitDegenerateStats;
  } catch (const Error& e) {
    std::cerr << "wikirel: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
