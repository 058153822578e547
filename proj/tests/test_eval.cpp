#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "wikirel/eval.hpp"

using namespace wikirel;
using namespace wikirel::testing;

TEST_SUITE_BEGIN("eval");

namespace {
std::vector<std::string> words(std::initializer_list<const char*> init) {
  return {init.begin(), init.end()};
}
}  // namespace

TEST_CASE("gold file loading") {
  TempDir tmp;
  SUBCASE("plain row") {
    write_file(tmp / "g.tsv", "tiger\tcat\t7.0\n");
    GoldSet g = load_gold(tmp / "g.tsv");
    REQUIRE(g.size() == 1);
    CHECK(g[0].word1 == "tiger");
    CHECK(g[0].word2 == "cat");
    CHECK(g[0].score == 7.0);
  }
  SUBCASE("boundary scores") {
    write_file(tmp / "ok.tsv", "a\tb\t10.0\nc\td\t0.0\n");
    CHECK(load_gold(tmp / "ok.tsv").size() == 2);
    write_file(tmp / "bad.tsv", "a\tb\t10.5\n");
    CHECK_THROWS_AS(load_gold(tmp / "bad.tsv"), ParseError);
  }
  SUBCASE("empty file gives an empty set") {
    write_file(tmp / "empty.tsv", "");
    CHECK(load_gold(tmp / "empty.tsv").empty());
  }
  SUBCASE("wrong arity") {
    write_file(tmp / "bad.tsv", "a\tb\n");
    CHECK_THROWS_AS(load_gold(tmp / "bad.tsv"), ParseError);
  }
  SUBCASE("duplicate unordered pairs") {
    write_file(tmp / "dup.tsv", "a\tb\t1.0\nb\ta\t2.0\n");
    CHECK_THROWS_AS(load_gold(tmp / "dup.tsv"), DataError);
  }
}

TEST_CASE("footrule") {
  SUBCASE("identical lists") {
    auto a = words({"x", "y", "z"});
    CHECK(footrule(a, a) == 0);
  }
  SUBCASE("full reversal") {
    CHECK(footrule(words({"x", "y", "z"}), words({"z", "y", "x"})) == 4);
  }
  SUBCASE("padding for unequal lists") {
    // B' = [b, d, a, c]; |1-3| + |2-1| + |3-4| = 4
    CHECK(footrule(words({"a", "b", "c"}), words({"b", "d"})) == 4);
  }
  SUBCASE("elements only in the second list contribute nothing") {
    CHECK(footrule(words({"a"}), words({"a", "q", "r"})) == 0);
  }
  SUBCASE("duplicates are rejected") {
    CHECK_THROWS_AS(footrule(words({"a", "a"}), words({"b"})), DataError);
    CHECK_THROWS_AS(footrule(words({"a"}), words({"b", "b"})), DataError);
  }
  SUBCASE("symmetric for equal support") {
    std::mt19937 rng(77);
    for (int round = 0; round < 200; ++round) {
      std::uniform_int_distribution<int> len(1, 20);
      int n = len(rng);
      std::vector<std::string> a, b;
      for (int i = 0; i < n; ++i) a.push_back("e" + std::to_string(i));
      b = a;
      std::shuffle(a.begin(), a.end(), rng);
      std::shuffle(b.begin(), b.end(), rng);
      CHECK(footrule(a, b) == footrule(b, a));
    }
  }
  SUBCASE("matches position scans on random permutation pairs") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 1000; ++round) {
      std::uniform_int_distribution<int> len(1, 20);
      int n = len(rng);
      std::vector<std::string> a, b;
      for (int i = 0; i < n; ++i) a.push_back("e" + std::to_string(i));
      b = a;
      std::shuffle(a.begin(), a.end(), rng);
      std::shuffle(b.begin(), b.end(), rng);
      CHECK(footrule(a, b) == oracle::footrule_same_support(a, b));
    }
  }
}

TEST_CASE("normalized footrule stays in the unit interval") {
  CHECK(footrule_normalized(words({"x", "y", "z"}), words({"x", "y", "z"})) == 0.0);
  CHECK(footrule_normalized(words({"x"}), words({"x"})) == 0.0);  // max sum is 0
  std::mt19937 rng(11);
  for (int round = 0; round < 200; ++round) {
    std::uniform_int_distribution<int> len(1, 15);
    std::vector<std::string> a, b;
    int na = len(rng), nb = len(rng);
    for (int i = 0; i < na; ++i) a.push_back("a" + std::to_string(i));
    for (int i = 0; i < nb; ++i) b.push_back(((i % 2) ? "a" : "b") + std::to_string(i));
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    double norm = footrule_normalized(a, b);
    CHECK(norm >= 0.0);
    CHECK(norm <= 1.0);
  }
}

TEST_CASE("overlap") {
  CHECK(overlap(words({"a", "b", "c"}), words({"a", "b", "c"})) == 3);
  CHECK(overlap(words({"a", "b"}), words({"c", "d"})) == 0);
  CHECK(overlap(words({"a", "b", "c"}), words({"c", "d", "a"})) == 2);
  SUBCASE("symmetric and bounded") {
    std::mt19937 rng(13);
    for (int round = 0; round < 100; ++round) {
      std::uniform_int_distribution<int> len(0, 12);
      std::vector<std::string> a, b;
      int na = len(rng), nb = len(rng);
      for (int i = 0; i < na; ++i) a.push_back("x" + std::to_string(i * 2));
      for (int i = 0; i < nb; ++i) b.push_back("x" + std::to_string(i * 3));
      CHECK(overlap(a, b) == overlap(b, a));
      CHECK(overlap(a, b) <= std::min(a.size(), b.size()));
    }
  }
}

TEST_CASE("correlation statistics") {
  SUBCASE("exact linear") {
    std::vector<double> xs{1, 2, 3}, ys{2, 4, 6};
    Correlations c = correlate(xs, ys);
    CHECK(c.pearson == 1.0);
    CHECK(c.spearman == 1.0);
  }
  SUBCASE("exact anti-linear") {
    std::vector<double> xs{1, 2, 3}, ys{3, 2, 1};
    Correlations c = correlate(xs, ys);
    CHECK(c.pearson == -1.0);
    CHECK(c.spearman == -1.0);
  }
  SUBCASE("the one-swap example") {
    std::vector<double> xs{1, 2, 3, 4}, ys{1, 3, 2, 4};
    CHECK(correlate(xs, ys).spearman == 0.8);
  }
  SUBCASE("zero variance fails") {
    std::vector<double> xs{1, 1, 1}, ys{1, 2, 3};
    CHECK_THROWS_AS(correlate(xs, ys), StatsError);
    CHECK_THROWS_AS(correlate(ys, xs), StatsError);
  }
  SUBCASE("too short fails") {
    std::vector<double> xs{1}, ys{2};
    CHECK_THROWS_AS(correlate(xs, ys), StatsError);
  }
  SUBCASE("ties get averaged ranks") {
    std::vector<double> xs{1, 1, 2}, ys{1, 2, 3};
    // ranks of xs: 1.5, 1.5, 3
    Correlations c = correlate(xs, ys);
    CHECK(c.spearman == doctest::Approx(oracle::spearman_counting(xs, ys)).epsilon(1e-12));
  }
  SUBCASE("matches the textbook oracle on random series") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
      std::uniform_int_distribution<int> len(2, 100);
      int n = len(rng);
      std::vector<double> xs, ys;
      for (int i = 0; i < n; ++i) {
        xs.push_back(value(rng));
        ys.push_back(value(rng));
      }
      Correlations c = correlate(xs, ys);
      CHECK(c.pearson == doctest::Approx(oracle::pearson_raw(xs, ys)).epsilon(1e-12));
      CHECK(c.spearman ==
            doctest::Approx(oracle::spearman_counting(xs, ys)).epsilon(1e-12));
    }
  }
}

namespace {

// Chain taxonomy whose pair depth tracks the gold score exactly.
struct DepthFixture {
  KnowledgeBase kb;
  GoldSet gold;
};

DepthFixture depth_fixture() {
  // c1 <- c2 <- c3 <- c4 <- c5 (c1 on top), two articles per category
  std::vector<Page> pages;
  std::vector<Edge> catlinks;
  for (PageId c = 1; c <= 5; ++c) {
    pages.push_back(cat(c, "cat" + std::to_string(c)));
    if (c > 1) catlinks.push_back({c, c - 1});
  }
  for (PageId c = 1; c <= 5; ++c) {
    PageId a = 100 + 2 * c;
    pages.push_back(art(a, "w" + std::to_string(c) + "a"));
    pages.push_back(art(a + 1, "w" + std::to_string(c) + "b"));
    catlinks.push_back({a, c});
    catlinks.push_back({a + 1, c});
  }
  DepthFixture f;
  f.kb = build_knowledge_base(std::move(pages), std::move(catlinks), {}, {});
  // deeper shared category = higher judgment
  for (int c = 1; c <= 5; ++c) {
    f.gold.push_back({"w" + std::to_string(c) + "a", "w" + std::to_string(c) + "b",
                      static_cast<double>(2 * c)});
  }
  return f;
}

}  // namespace

TEST_CASE("relatedness evaluation over a depth-aligned fixture") {
  DepthFixture f = depth_fixture();
  CondensedTaxonomy ct = condense(f.kb);
  HypoTable ht = compute_hypo_table(ct);
  EvalReport report = evaluate_relatedness(f.kb, f.gold, Method::ResHypo, ct, ht, nullptr);

  CHECK(report.method == "res_hypo");
  CHECK(report.n_pairs == 5);
  CHECK(report.n_skipped_not_found == 0);
  CHECK(report.n_skipped_no_common == 0);
  CHECK(report.corr.spearman == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.corr.pearson > 0.9);
}

TEST_CASE("missing terms are counted as not-found skips") {
  DepthFixture f = depth_fixture();
  f.gold.push_back({"w1a", "nosuchword", 5.0});
  CondensedTaxonomy ct = condense(f.kb);
  HypoTable ht = compute_hypo_table(ct);
  EvalReport report = evaluate_relatedness(f.kb, f.gold, Method::ResHypo, ct, ht, nullptr);
  CHECK(report.n_pairs == 6);
  CHECK(report.n_skipped_not_found == 1);
  CHECK(report.per_pair.back().status == PairStatus::SkippedNotFound);
  CHECK(report.n_used() == 5);
}

TEST_CASE("an all-zero metric surfaces the degenerate-variance error") {
  // two disjoint branches under the root; every pair meets only at the root
  KnowledgeBase kb = build_knowledge_base(
      {cat(1, "Root"), cat(2, "L"), cat(3, "R"), art(10, "u1"), art(11, "u2"),
       art(12, "v1"), art(13, "v2")},
      {{2, 1}, {3, 1}, {10, 2}, {11, 3}, {12, 2}, {13, 3}}, {}, {});
  KnowledgeBase restricted = restrict_to_root(kb, "Root");
  CondensedTaxonomy ct = condense(restricted);
  HypoTable ht = compute_hypo_table(ct);
  GoldSet gold{{"u1", "u2", 4.0}, {"v1", "v2", 6.0}};
  CHECK_THROWS_AS(
      evaluate_relatedness(restricted, gold, Method::ResHypo, ct, ht, nullptr), StatsError);
}

TEST_CASE("every pair skipped surfaces an error") {
  DepthFixture f = depth_fixture();
  GoldSet gold{{"zz1", "zz2", 5.0}};
  CondensedTaxonomy ct = condense(f.kb);
  HypoTable ht = compute_hypo_table(ct);
  CHECK_THROWS_AS(evaluate_relatedness(f.kb, gold, Method::ResHypo, ct, ht, nullptr),
                  StatsError);
}

TEST_CASE("ahits evaluation") {
  KnowledgeBase kb = load_mini_wiki();

  AhitsParams params;
  params.root_set_size = 10;
  params.increment = 5;
  params.n_sought = 10;

  SUBCASE("identical words give footrule zero and full overlap") {
    GoldSet gold{{"tiger", "tiger", 10.0}, {"tiger", "lion", 9.0}, {"dog", "eagle", 2.0}};
    EvalReport fr = evaluate_ahits(kb, gold, params, Comparator::Footrule);
    CHECK(fr.per_pair[0].value == 0.0);
    EvalReport ov = evaluate_ahits(kb, gold, params, Comparator::Overlap);
    auto tiger_list = related_terms(kb, "tiger", params);
    REQUIRE(tiger_list.has_value());
    CHECK(ov.per_pair[0].value == static_cast<double>(tiger_list->entries.size()));
  }
  SUBCASE("absent seeds are skipped") {
    GoldSet gold{{"tiger", "lion", 9.0}, {"dog", "wolf", 8.0}, {"unicorn", "dog", 1.0}};
    EvalReport report = evaluate_ahits(kb, gold, params, Comparator::Overlap);
    CHECK(report.n_pairs == 3);
    CHECK(report.n_skipped_not_found == 1);
    CHECK(report.per_pair[2].status == PairStatus::SkippedNotFound);
  }
  SUBCASE("footrule runs carry the normalized variant") {
    GoldSet gold{{"tiger", "lion", 9.0}, {"dog", "eagle", 2.0}, {"airplane", "jet", 9.5}};
    EvalReport report = evaluate_ahits(kb, gold, params, Comparator::Footrule);
    for (const auto& pr : report.per_pair) {
      if (pr.status == PairStatus::Ok) CHECK(pr.value_norm.has_value());
    }
    CHECK(report.method == "ahits_footrule");
  }
  SUBCASE("parallel evaluation reproduces the serial report") {
    GoldSet gold{{"tiger", "lion", 9.0},     {"dog", "wolf", 8.0},
                 {"airplane", "jet", 9.5},   {"dirigible", "zeppelin", 9.0},
                 {"computer", "chess", 4.0}, {"energy", "atom", 7.0}};
    EvalReport serial_report = evaluate_ahits(kb, gold, params, Comparator::Footrule, 1);
    EvalReport parallel_report = evaluate_ahits(kb, gold, params, Comparator::Footrule, 8);
    serial_report.online_ms = parallel_report.online_ms = 0;
    CHECK(serial_report.to_json().dump() == parallel_report.to_json().dump());
  }
}

TEST_CASE("overlap tracks link density on a constructed fixture") {
  // four word pairs whose clusters share progressively fewer links
  std::vector<Page> pages{cat(1000, "Top")};
  std::vector<Edge> catlinks, links;
  auto add_art = [&](PageId id, const std::string& title) {
    pages.push_back(art(id, title));
    catlinks.push_back({id, 1000});
  };
  // pair 1: a1/a2 plus three shared neighbors n1..n3
  // pair 2: b1/b2 share two, pair 3: c1/c2 share one, pair 4: d1/d2 share none
  PageId next = 1;
  auto cluster = [&](const std::string& stem, int shared) {
    PageId w1 = next++;
    PageId w2 = next++;
    add_art(w1, stem + "1");
    add_art(w2, stem + "2");
    links.push_back({w1, w2});
    links.push_back({w2, w1});
    for (int i = 0; i < shared; ++i) {
      PageId n = next++;
      add_art(n, stem + "n" + std::to_string(i));
      links.push_back({w1, n});
      links.push_back({w2, n});
      links.push_back({n, w1});
      links.push_back({n, w2});
    }
  };
  cluster("a", 3);
  cluster("b", 2);
  cluster("c", 1);
  cluster("d", 0);
  KnowledgeBase kb = build_knowledge_base(pages, catlinks, links, {});

  GoldSet gold{{"a1", "a2", 9.0}, {"b1", "b2", 7.0}, {"c1", "c2", 5.0}, {"d1", "d2", 3.0}};
  AhitsParams params;
  params.root_set_size = 20;
  params.increment = 10;
  params.n_sought = 20;
  EvalReport report = evaluate_ahits(kb, gold, params, Comparator::Overlap);
  CHECK(report.n_pairs == 4);
  CHECK(report.n_used() == 4);
  CHECK(report.corr.spearman == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smaller footrule with higher gold contributes positively") {
  // three pairs: footrule distance rises as gold falls
  KnowledgeBase kb = load_mini_wiki();
  AhitsParams params;
  params.root_set_size = 10;
  params.increment = 5;
  params.n_sought = 10;
  GoldSet gold{{"tiger", "tiger", 10.0},  // footrule 0
               {"tiger", "lion", 8.0},
               {"tiger", "computer", 1.0}};
  EvalReport report = evaluate_ahits(kb, gold, params, Comparator::Footrule);
  REQUIRE(report.n_used() == 3);
  CHECK(report.per_pair[0].value <= report.per_pair[1].value);
  CHECK(report.corr.pearson > 0.0);
  CHECK(report.corr.spearman > 0.0);
}

TEST_CASE("report serialization carries the documented fields") {
  DepthFixture f = depth_fixture();
  CondensedTaxonomy ct = condense(f.kb);
  HypoTable ht = compute_hypo_table(ct);
  EvalReport report =
      evaluate_relatedness(f.kb, f.gold, Method::ResHypo, ct, ht, nullptr, 1, 17);
  CHECK(report.offline_ms == 17);

  auto j = report.to_json();
  for (const char* key : {"method", "params", "pearson", "spearman", "n_pairs",
                          "n_skipped_not_found", "n_skipped_no_common", "offline_ms",
                          "online_ms", "per_pair"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["per_pair"].size() == report.n_pairs);
  CHECK(j["per_pair"][0].contains("word1"));
  CHECK(j["per_pair"][0].contains("status"));

  std::string csv = report.to_csv();
  CHECK(csv.find("res_hypo") != std::string::npos);
  std::string text = report.to_text();
  CHECK(text.find("spearman") != std::string::npos);
}

TEST_SUITE_END();
