#include "wikirel/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <omp.h>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wikirel/tsv.hpp"

namespace wikirel {

const char* to_string(PairStatus status) {
  switch (status) {
    case PairStatus::Ok: return "ok";
    case PairStatus::SkippedNotFound: return "skipped_not_found";
    case PairStatus::SkippedNoCommon: return "skipped_no_common";
  }
  return "?";
}

GoldSet load_gold(const std::filesystem::path& path) {
  GoldSet gold;
  std::set<std::pair<std::string, std::string>> seen;
  tsv::for_each_row(path, 3, [&](std::size_t line, const auto& f) {
    GoldPair pair{std::string(f[0]), std::string(f[1]),
                  tsv::parse_double(f[2], path, line)};
    if (pair.score < 0.0 || pair.score > 10.0) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": score " +
                       std::string(f[2]) + " outside the 0..10 judgment scale");
    }
    auto key = std::minmax(pair.word1, pair.word2);
    if (!seen.insert(key).second) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": duplicate pair '" +
                      pair.word1 + "' / '" + pair.word2 + "'");
    }
    gold.push_back(std::move(pair));
  });
  return gold;
}

namespace {

void check_unique(std::span<const std::string> list, const char* which) {
  std::unordered_set<std::string_view> seen;
  for (const auto& e : list) {
    if (!seen.insert(e).second) {
      throw DataError(std::string("duplicate element '") + e + "' in " + which + " list");
    }
  }
}

struct FootruleSums {
  std::uint64_t distance = 0;
  std::uint64_t max_distance = 0;  // largest sum attainable for these lengths
};

FootruleSums footrule_sums(std::span<const std::string> list_a,
                           std::span<const std::string> list_b) {
  check_unique(list_a, "first");
  check_unique(list_b, "second");

  std::unordered_map<std::string_view, std::uint64_t> rank_b;
  rank_b.reserve(list_b.size());
  for (std::size_t i = 0; i < list_b.size(); ++i) rank_b.emplace(list_b[i], i + 1);

  FootruleSums sums;
  std::uint64_t next_padded = list_b.size();
  std::vector<std::uint64_t> ranks_in_padded_b;
  ranks_in_padded_b.reserve(list_a.size());
  for (const auto& e : list_a) {
    auto it = rank_b.find(e);
    ranks_in_padded_b.push_back(it != rank_b.end() ? it->second : ++next_padded);
  }
  // next_padded is now the padded length N.
  for (std::size_t i = 0; i < list_a.size(); ++i) {
    std::uint64_t ra = i + 1;
    std::uint64_t rb = ranks_in_padded_b[i];
    sums.distance += ra > rb ? ra - rb : rb - ra;
    sums.max_distance += std::max(next_padded - ra, ra - 1);
  }
  return sums;
}

}  // namespace

std::uint64_t footrule(std::span<const std::string> list_a,
                       std::span<const std::string> list_b) {
  return footrule_sums(list_a, list_b).distance;
}

double footrule_normalized(std::span<const std::string> list_a,
                           std::span<const std::string> list_b) {
  FootruleSums sums = footrule_sums(list_a, list_b);
  if (sums.max_distance == 0) return 0.0;
  return static_cast<double>(sums.distance) / static_cast<double>(sums.max_distance);
}

std::size_t overlap(std::span<const std::string> list_a, std::span<const std::string> list_b) {
  check_unique(list_a, "first");
  check_unique(list_b, "second");
  std::unordered_set<std::string_view> in_b(list_b.begin(), list_b.end());
  std::size_t n = 0;
  for (const auto& e : list_a) n += in_b.contains(e);
  return n;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mean_x;
    double dy = ys[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) {
    throw StatsError("degenerate series: zero variance");
  }
  return cov / std::sqrt(var_x * var_y);
}

}  // namespace

Correlations correlate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StatsError("series lengths differ");
  if (xs.size() < 2) throw StatsError("need at least two paired observations");
  Correlations c;
  c.pearson = pearson(xs, ys);
  std::vector<double> rx = average_ranks(xs);
  std::vector<double> ry = average_ranks(ys);
  c.spearman = pearson(rx, ry);
  return c;
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ms_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

// Runs fn(i) for every index, parallel over jobs, rethrowing the first
// exception after the loop joins. Results must be written to per-index
// slots so the aggregate is independent of the schedule.
template <typename Fn>
void parallel_for_each_index(std::size_t count, int jobs, Fn&& fn) {
  std::exception_ptr error;
  const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for num_threads(std::max(jobs, 1)) schedule(dynamic) if (jobs > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void finish_report(EvalReport& report, const GoldSet& gold, bool negate_for_correlation) {
  report.n_pairs = gold.size();
  std::vector<double> xs, ys, xs_norm;
  for (const PairResult& pr : report.per_pair) {
    switch (pr.status) {
      case PairStatus::Ok:
        xs.push_back(negate_for_correlation ? -pr.value : pr.value);
        ys.push_back(pr.gold);
        if (pr.value_norm) xs_norm.push_back(-*pr.value_norm);
        break;
      case PairStatus::SkippedNotFound: ++report.n_skipped_not_found; break;
      case PairStatus::SkippedNoCommon: ++report.n_skipped_no_common; break;
    }
  }
  if (xs.size() + report.n_skipped_not_found + report.n_skipped_no_common !=
      report.n_pairs) {
    throw Error("pair bookkeeping is inconsistent");
  }
  if (xs.empty()) throw StatsError("no scored pairs: every pair was skipped");
  report.corr = correlate(xs, ys);
  if (xs_norm.size() == xs.size()) {
    try {
      report.corr_norm = correlate(xs_norm, ys);
    } catch (const StatsError&) {
      // normalization can flatten an otherwise usable series; leave it out
      report.corr_norm.reset();
    }
  }
}

}  // namespace

EvalReport evaluate_relatedness(const KnowledgeBase& kb, const GoldSet& gold, Method method,
                                const CondensedTaxonomy& ct, const HypoTable& ht,
                                const FreqTable* freq, int jobs, std::uint64_t offline_ms) {
  if (method == Method::ResResnik && !freq) {
    throw DataError("res_resnik needs a frequency table");
  }

  EvalReport report;
  report.method = method == Method::ResHypo ? "res_hypo" : "res_resnik";
  report.offline_ms = offline_ms;
  report.params = {{"root_category",
                    kb.root_category ? nlohmann::ordered_json(kb.at(*kb.root_category).title)
                                     : nlohmann::ordered_json(nullptr)},
                   {"correlation_input", "metric_value"}};
  report.per_pair.resize(gold.size());

  auto start = Clock::now();
  parallel_for_each_index(gold.size(), jobs, [&](std::size_t i) {
    const GoldPair& gp = gold[i];
    RelatednessScore score =
        method == Method::ResHypo
            ? res_hypo_relatedness(kb, ct, ht, gp.word1, gp.word2)
            : res_resnik(kb, *freq, ct, gp.word1, gp.word2);
    PairResult& pr = report.per_pair[i];
    pr.word1 = gp.word1;
    pr.word2 = gp.word2;
    pr.gold = gp.score;
    if (score.skipped()) {
      pr.status = score.reason == SkipReason::TermNotFound ? PairStatus::SkippedNotFound
                                                           : PairStatus::SkippedNoCommon;
    } else {
      pr.status = PairStatus::Ok;
      pr.value = *score.value;
    }
  });
  report.online_ms = ms_since(start);

  finish_report(report, gold, /*negate_for_correlation=*/false);
  return report;
}

EvalReport evaluate_ahits(const KnowledgeBase& kb, const GoldSet& gold,
                          const AhitsParams& params, Comparator comparator, int jobs) {
  EvalReport report;
  report.method = comparator == Comparator::Footrule ? "ahits_footrule" : "ahits_overlap";
  report.params = {{"root_set_size", params.root_set_size},
                   {"increment", params.increment},
                   {"n_sought", params.n_sought},
                   {"c_max", params.c_max ? nlohmann::ordered_json(*params.c_max)
                                          : nlohmann::ordered_json(nullptr)},
                   {"epsilon", params.epsilon},
                   {"max_iter", params.max_iter},
                   {"correlation_input",
                    comparator == Comparator::Footrule ? "negated_footrule" : "overlap"}};
  report.per_pair.resize(gold.size());

  auto start = Clock::now();
  parallel_for_each_index(gold.size(), jobs, [&](std::size_t i) {
    const GoldPair& gp = gold[i];
    PairResult& pr = report.per_pair[i];
    pr.word1 = gp.word1;
    pr.word2 = gp.word2;
    pr.gold = gp.score;

    auto l1 = related_terms(kb, gp.word1, params, /*jobs=*/1);
    auto l2 = related_terms(kb, gp.word2, params, /*jobs=*/1);
    if (!l1 || !l2) {
      pr.status = PairStatus::SkippedNotFound;
      return;
    }
    if (l1->entries.empty() && l2->entries.empty()) {
      pr.status = PairStatus::SkippedNoCommon;
      return;
    }
    auto titles = [](const RankedList& list) {
      std::vector<std::string> t;
      t.reserve(list.entries.size());
      for (const auto& e : list.entries) t.push_back(e.title);
      return t;
    };
    std::vector<std::string> t1 = titles(*l1);
    std::vector<std::string> t2 = titles(*l2);
    pr.status = PairStatus::Ok;
    if (comparator == Comparator::Footrule) {
      pr.value = static_cast<double>(footrule(t1, t2));
      pr.value_norm = footrule_normalized(t1, t2);
    } else {
      pr.value = static_cast<double>(overlap(t1, t2));
    }
  });
  report.online_ms = ms_since(start);

  finish_report(report, gold, comparator == Comparator::Footrule);
  return report;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["params"] = params;
  j["pearson"] = corr.pearson;
  j["spearman"] = corr.spearman;
  if (corr_norm) {
    j["pearson_norm"] = corr_norm->pearson;
    j["spearman_norm"] = corr_norm->spearman;
  }
  j["n_pairs"] = n_pairs;
  j["n_skipped_not_found"] = n_skipped_not_found;
  j["n_skipped_no_common"] = n_skipped_no_common;
  j["offline_ms"] = offline_ms;
  j["online_ms"] = online_ms;
  auto pairs = nlohmann::ordered_json::array();
  for (const PairResult& pr : per_pair) {
    nlohmann::ordered_json p;
    p["word1"] = pr.word1;
    p["word2"] = pr.word2;
    p["gold"] = pr.gold;
    p["status"] = to_string(pr.status);
    p["value"] = pr.status == PairStatus::Ok ? nlohmann::ordered_json(pr.value)
                                             : nlohmann::ordered_json(nullptr);
    if (pr.value_norm) p["value_norm"] = *pr.value_norm;
    pairs.push_back(std::move(p));
  }
  j["per_pair"] = std::move(pairs);
  return j;
}

namespace {
std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
}  // namespace

std::string EvalReport::to_csv() const {
  std::string out =
      "method,n_pairs,n_used,n_skipped_not_found,n_skipped_no_common,pearson,spearman,"
      "offline_ms,online_ms\n";
  out += method + ',' + std::to_string(n_pairs) + ',' + std::to_string(n_used()) + ',' +
         std::to_string(n_skipped_not_found) + ',' + std::to_string(n_skipped_no_common) +
         ',' + fmt6(corr.pearson) + ',' + fmt6(corr.spearman) + ',' +
         std::to_string(offline_ms) + ',' + std::to_string(online_ms) + '\n';
  return out;
}

std::string EvalReport::to_text() const {
  std::string out;
  out += "method: " + method + '\n';
  out += "pairs: " + std::to_string(n_pairs) + " (used " + std::to_string(n_used()) +
         ", skipped " + std::to_string(n_skipped_not_found + n_skipped_no_common) + " = " +
         std::to_string(n_skipped_not_found) + " not-found + " +
         std::to_string(n_skipped_no_common) + " no-common)\n";
  out += "pearson: " + fmt6(corr.pearson) + '\n';
  out += "spearman: " + fmt6(corr.spearman) + '\n';
  if (corr_norm) {
    out += "pearson_norm: " + fmt6(corr_norm->pearson) + '\n';
    out += "spearman_norm: " + fmt6(corr_norm->spearman) + '\n';
  }
  out += "offline: " + std::to_string(offline_ms) + " ms\n";
  out += "online: " + std::to_string(online_ms) + " ms\n";
  return out;
}

}  // namespace wikirel
