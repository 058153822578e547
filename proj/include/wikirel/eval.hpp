#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "wikirel/ahits.hpp"
#include "wikirel/graph_store.hpp"
#include "wikirel/taxonomy.hpp"
#include "wikirel/types.hpp"

namespace wikirel {

struct GoldPair {
  std::string word1;
  std::string word2;
  double score = 0.0;  // human judgment on the 0..10 scale
};

using GoldSet = std::vector<GoldPair>;

// word1<TAB>word2<TAB>score rows; scores outside [0, 10] and duplicate
// unordered pairs are rejected. An empty file yields an empty set.
GoldSet load_gold(const std::filesystem::path& path);

// Adapted rank-distance for lists of unequal length: the elements of A
// missing from B are appended to B in A's order, ranks 1..N are assigned
// within each list, and the absolute rank differences are summed over the
// elements of A. Elements of B absent from A contribute nothing.
// Throws DataError on duplicates within a list.
std::uint64_t footrule(std::span<const std::string> list_a, std::span<const std::string> list_b);

// footrule divided by the largest sum attainable for the same list lengths;
// 0 when that maximum is 0.
double footrule_normalized(std::span<const std::string> list_a,
                           std::span<const std::string> list_b);

std::size_t overlap(std::span<const std::string> list_a, std::span<const std::string> list_b);

struct Correlations {
  double pearson = 0.0;
  double spearman = 0.0;
};

// Pearson product-moment r and Spearman rho (Pearson over average ranks,
// ties averaged). Throws StatsError for fewer than two points or a
// zero-variance series.
Correlations correlate(std::span<const double> xs, std::span<const double> ys);

enum class Method { ResHypo, ResResnik };
enum class Comparator { Footrule, Overlap };

enum class PairStatus { Ok, SkippedNotFound, SkippedNoCommon };

const char* to_string(PairStatus status);

struct PairResult {
  std::string word1;
  std::string word2;
  double gold = 0.0;
  PairStatus status = PairStatus::Ok;
  double value = 0.0;                // metric value; meaningful when status == Ok
  std::optional<double> value_norm;  // normalized footrule, when applicable
};

struct EvalReport {
  std::string method;
  nlohmann::ordered_json params;
  std::size_t n_pairs = 0;
  std::size_t n_skipped_not_found = 0;
  std::size_t n_skipped_no_common = 0;
  Correlations corr{};
  std::optional<Correlations> corr_norm;
  std::uint64_t offline_ms = 0;
  std::uint64_t online_ms = 0;
  std::vector<PairResult> per_pair;

  std::size_t n_used() const {
    return n_pairs - n_skipped_not_found - n_skipped_no_common;
  }

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

// Scores every gold pair with the chosen taxonomy metric and correlates the
// non-skipped values with the gold judgments. freq is required for
// Method::ResResnik. offline_ms is the caller-measured taxonomy preparation
// time; the per-pair scoring time is measured here. The pair loop is
// parallel over jobs and aggregates in gold order, so the report is
// identical for any jobs value.
EvalReport evaluate_relatedness(const KnowledgeBase& kb, const GoldSet& gold, Method method,
                                const CondensedTaxonomy& ct, const HypoTable& ht,
                                const FreqTable* freq, int jobs = 1,
                                std::uint64_t offline_ms = 0);

// Runs related_terms for both words of every pair and compares the two
// ranked lists. Footrule distances are negated before correlation (larger
// distance = less related); overlap correlates directly. A pair is skipped
// when a seed does not resolve (not-found) or both lists are empty
// (no-common).
EvalReport evaluate_ahits(const KnowledgeBase& kb, const GoldSet& gold,
                          const AhitsParams& params, Comparator comparator, int jobs = 1);

}  // namespace wikirel
