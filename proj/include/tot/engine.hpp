#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tot/llm.hpp"
#include "tot/ops.hpp"
#include "tot/prompts.hpp"
#include "tot/table.hpp"

namespace tot {

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MergePolicy { EveryNode, RootOnly };

std::string_view merge_policy_name(MergePolicy policy);
std::optional<MergePolicy> parse_merge_policy(std::string_view name);

struct StageBudgets {
  int planning = kDefaultPlanningTokens;
  int write = kDefaultWriteTokens;
  int generating = kDefaultGeneratingTokens;
};

struct EngineConfig {
  int max_depth = 5;
  int max_degree = 5;
  TableFormat table_format = TableFormat::Csv;
  MergePolicy merge_policy = MergePolicy::RootOnly;
  OperationPool enabled_pool = OperationPool::all_non_root();
  std::string model = "gpt-4o-mini";
  StageBudgets budgets;
  double temperature = 0.0;
  int parallelism = 1;

  /// A pool without write() could never terminate early; we forbid it.
  void validate() const;
};

/// Everything one tree node receives.
struct NodeContext {
  TableSet tables;
  OperationHistory history;
  OperationPool pool;
  int depth = 0;
};

struct TableSummary {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct NodeTrace;

struct ChildTrace {
  std::string call;    // canonical rendered call
  std::string status;  // "ok" | "op_error"
  std::string error;   // set when status == "op_error"
  std::unique_ptr<NodeTrace> node;
};

struct NodeTrace {
  int depth = 0;
  std::vector<std::string> history;
  std::vector<std::string> pool;
  std::vector<TableSummary> tables;
  std::optional<std::string> planned_text;  // raw planner reply; absent for leaves
  std::vector<std::string> plan;            // executed children, canonical form
  std::vector<std::string> diagnostics;
  std::vector<ChildTrace> children;  // planned order, regardless of completion order
  std::string text;
  Usage usage;  // this node's own backend calls only
  double seconds = 0.0;
};

struct RunTrace {
  NodeTrace root;
  Usage total_usage;
  double total_seconds = 0.0;    // end-to-end wall time
  Decimal total_cost_milli_usd;  // 0 when the model has no pricing entry
  std::string model;
};

struct RunResult {
  std::string report;
  RunTrace trace;
};

/// One planned node: single planning request, parse, pool filter, degree
/// truncation, write() fallback.
struct PlanResult {
  std::vector<OperationCall> calls;
  std::string raw_text;
  std::vector<std::string> diagnostics;
  Usage usage;
};

PlanResult plan_node(const NodeContext& ctx, const EngineConfig& cfg,
                     ChatBackend& backend, const TemplateSet& templates);

/// Bottom-up merge. A single text is returned unchanged with no backend
/// call; under RootOnly, non-root merges newline-concatenate; every LLM merge
/// preserves child order in the REPORTS binding.
std::string merge_reports(const std::vector<std::string>& texts, bool at_root,
                          const EngineConfig& cfg, ChatBackend& backend,
                          const TemplateSet& templates, Usage* usage_out);

/// Runs the full plan/execute/merge tree over `ts` and returns the root text
/// with a complete trace.
RunResult run(const TableSet& ts, const EngineConfig& cfg, ChatBackend& backend,
              const TemplateSet& templates, const PricingTable& pricing = {});

/// Share of each operation kind among tree edges entering every depth,
/// aggregated over the given traces. Columns [depth, kind, usage_rate]; rates
/// per depth sum to 1 up to the 12-decimal rounding of each rate.
Table operation_usage_by_depth(const std::vector<const RunTrace*>& traces);

/// Trace serialization. Timings are omitted when `include_timings` is false
/// so byte-exact comparisons are possible across runs.
std::string trace_to_json(const RunTrace& trace, bool include_timings = true);
RunTrace trace_from_json(const std::string& json_text);

}  // namespace tot
