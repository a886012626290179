#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tot/llm.hpp"
#include "tot/prompts.hpp"
#include "tot/table.hpp"

namespace tot {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PipeInComponent : EvalError {
  using EvalError::EvalError;
};
struct EmptyCorpus : EvalError {
  using EvalError::EvalError;
};

/// Atomic fact unit, serialized as "(table|column|value)". Components may not
/// contain '|'.
struct RelationTriple {
  std::string table;
  std::string column;
  std::string value;

  std::string serialized() const;

  friend bool operator==(const RelationTriple&, const RelationTriple&) = default;
  friend auto operator<=>(const RelationTriple&, const RelationTriple&) = default;
};

/// Every (table, column, non-missing cell) triple with canonicalized values,
/// deduplicated in first-occurrence order (table order, then row-major).
std::vector<RelationTriple> enumerate_relations(const TableSet& ts);

/// Deterministic extractor: candidates whose value occurs in the report as a
/// whole token (boundaries are non-alphanumeric characters or string edges),
/// ordered by first occurrence, ties broken by candidate order.
std::vector<RelationTriple> extract_relations_lexical(
    const std::string& report, const std::vector<RelationTriple>& candidates);

/// Parses a bracketed "(t|c|v)" list, dropping malformed items.
std::vector<RelationTriple> parse_relation_list(const std::string& text);

struct LlmExtraction {
  std::vector<RelationTriple> relations;  // reply order, duplicates kept
  std::vector<bool> hallucinated;         // parallel to relations
  Usage usage;
};

struct LlmExtractOptions {
  std::string model;
  int max_tokens = 1024;
  double temperature = 0.0;
};

/// LLM-based extraction via the IE prompt. Items absent from the candidate
/// set are retained but flagged hallucinated; they count against RG
/// precision.
LlmExtraction extract_relations_llm(const std::string& report,
                                    const std::vector<RelationTriple>& candidates,
                                    ChatBackend& backend, const TemplateSet& templates,
                                    const LlmExtractOptions& options);

struct RgResult {
  double count = 0.0;
  double precision = 0.0;  // percent; 0 when nothing was extracted
};

/// Relation Generation: how much of the extraction is supported by the
/// tables. Duplicates in `extracted` are counted per occurrence.
RgResult rg(const std::vector<RelationTriple>& extracted,
            const std::set<RelationTriple>& table_relations);

struct CsResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Content Selection over set-deduplicated triples.
CsResult cs(const std::vector<RelationTriple>& gen, const std::vector<RelationTriple>& gold);

/// Restricted Damerau-Levenshtein (optimal string alignment): insertions,
/// deletions, substitutions and adjacent transpositions, no element edited
/// twice.
template <typename Seq>
std::size_t dld(const Seq& a, const Seq& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t best = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        best = std::min(best, d[i - 2][j - 2] + 1);
      }
      d[i][j] = best;
    }
  }
  return d[n][m];
}

/// Content Ordering: 100 * (1 - dld / max length); 100 when both sequences
/// are empty. Sequences keep duplicates and order.
double co(const std::vector<RelationTriple>& gen, const std::vector<RelationTriple>& gold);

/// One row of the results table, in its column order:
/// RG #, RG P%, CS P%, CS R%, CS F%, CO DLD%, Time, Cost.
struct SampleMetrics {
  double rg_count = 0.0;
  double rg_precision = 0.0;
  double cs_precision = 0.0;
  double cs_recall = 0.0;
  double cs_f1 = 0.0;
  double co_dld = 0.0;
  double seconds = 0.0;
  double cost_milli_usd = 0.0;
};

struct CorpusMetrics {
  SampleMetrics mean;
  std::size_t n = 0;
};

/// Extraction strategy: report + candidates -> ordered triples.
using Extractor = std::function<std::vector<RelationTriple>(
    const std::string&, const std::vector<RelationTriple>&)>;

struct GenerationCost {
  double seconds = 0.0;
  double cost_milli_usd = 0.0;
};

/// Extracts from both reports against the table's candidate relations, then
/// computes RG against the tables and CS/CO against the gold extraction.
SampleMetrics score_sample(const std::string& gen_report, const std::string& gold_report,
                           const TableSet& ts, const Extractor& extractor,
                           const GenerationCost& cost = {});

/// Field-wise arithmetic mean. Throws EmptyCorpus on no samples.
CorpusMetrics aggregate(const std::vector<SampleMetrics>& samples);

/// CSV report: one row per sample plus a final mean row.
std::string metrics_to_csv(const std::vector<std::pair<std::string, SampleMetrics>>& rows);

/// Aligned text table mirroring the results-table column order.
std::string metrics_to_text(const std::vector<std::pair<std::string, SampleMetrics>>& rows);

}  // namespace tot
