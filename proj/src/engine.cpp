#include "tot/engine.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <mutex>

#include "json.hpp"

namespace tot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TableSummary> summarize(const TableSet& ts) {
  std::vector<TableSummary> out;
  out.reserve(ts.tables.size());
  for (const Table& t : ts.tables) out.push_back({t.name, t.n_rows(), t.n_cols()});
  return out;
}

std::vector<std::string> history_strings(const OperationHistory& history) {
  std::vector<std::string> out;
  out.reserve(history.calls.size());
  for (const OperationCall& c : history.calls) out.push_back(render_call(c));
  return out;
}

std::vector<std::string> pool_strings(const OperationPool& pool) {
  std::vector<std::string> out;
  for (OperationKind k : pool.kinds()) out.emplace_back(operation_name(k));
  return out;
}

// Grants up to `limit - 1` extra worker slots (the caller's own thread is the
// first). Children that fail to get a slot run inline, so tree recursion can
// never deadlock on the limiter.
class TaskLimiter {
 public:
  explicit TaskLimiter(int limit) : available_(limit > 0 ? limit - 1 : 0) {}

  bool try_acquire() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (available_ == 0) return false;
    --available_;
    return true;
  }

  void release() {
    std::lock_guard<std::mutex> lock(mutex_);
    ++available_;
  }

 private:
  std::mutex mutex_;
  int available_;
};

struct EngineState {
  const EngineConfig& cfg;
  ChatBackend& backend;
  const TemplateSet& templates;
  TaskLimiter limiter;
};

ChatResponse write_leaf_text(const NodeContext& ctx, EngineState& state, Usage& usage) {
  PromptBindings bindings;
  bindings.set("TABLE_DESCRIPTION", state.templates.table_description)
      .set("TABLE_FORMAT", std::string(table_format_name(state.cfg.table_format)))
      .set("WRITE_TOKENS", std::to_string(state.cfg.budgets.write))
      .set("TABLES", render_table_set(ctx.tables, state.cfg.table_format, true));
  const RenderedPrompt prompt = render_prompt(state.templates.write, bindings);
  ChatRequest request{prompt.system, prompt.user, state.cfg.budgets.write,
                      state.cfg.temperature, state.cfg.model};
  ChatResponse response = state.backend.complete(request);
  usage += response.usage;
  return response;
}

NodeTrace make_node_shell(const NodeContext& ctx) {
  NodeTrace trace;
  trace.depth = ctx.depth;
  trace.history = history_strings(ctx.history);
  trace.pool = pool_strings(ctx.pool);
  trace.tables = summarize(ctx.tables);
  return trace;
}

// A child that terminates immediately: planner-chosen write(), forced write
// after an operation error, or any node entered at max depth.
NodeTrace write_leaf_node(const NodeContext& ctx, EngineState& state) {
  const auto start = Clock::now();
  NodeTrace trace = make_node_shell(ctx);
  ChatResponse response = write_leaf_text(ctx, state, trace.usage);
  trace.text = std::move(response.text);
  trace.seconds = seconds_since(start);
  return trace;
}

NodeContext child_context(const NodeContext& parent, const OperationCall& call,
                          TableSet tables) {
  NodeContext child;
  child.tables = std::move(tables);
  child.history = parent.history.extended(call);
  child.pool = shrink_pool(parent.pool, call.kind());
  child.depth = parent.depth + 1;
  return child;
}

NodeTrace execute_node(const NodeContext& ctx, EngineState& state);

ChildTrace execute_child(const NodeContext& parent, const OperationCall& call,
                         EngineState& state) {
  ChildTrace child;
  child.call = render_call(call);

  if (call.kind() == OperationKind::Write) {
    child.status = "ok";
    child.node = std::make_unique<NodeTrace>(
        write_leaf_node(child_context(parent, call, parent.tables), state));
    return child;
  }

  TableSet transformed;
  try {
    transformed = apply_call(call, parent.tables);
  } catch (const OpError& e) {
    // Degraded continuation: the failing child becomes a write leaf over the
    // parent's tables instead of aborting the run.
    child.status = "op_error";
    child.error = e.what();
    child.node = std::make_unique<NodeTrace>(
        write_leaf_node(child_context(parent, OperationCall::write(), parent.tables), state));
    return child;
  }
  child.status = "ok";
  child.node = std::make_unique<NodeTrace>(
      execute_node(child_context(parent, call, std::move(transformed)), state));
  return child;
}

NodeTrace execute_node(const NodeContext& ctx, EngineState& state) {
  if (ctx.depth >= state.cfg.max_depth) {
    return write_leaf_node(ctx, state);  // depth guard: write immediately
  }

  const auto start = Clock::now();
  NodeTrace trace = make_node_shell(ctx);

  PlanResult plan = plan_node(ctx, state.cfg, state.backend, state.templates);
  trace.planned_text = plan.raw_text;
  trace.diagnostics = std::move(plan.diagnostics);
  trace.usage += plan.usage;
  for (const OperationCall& call : plan.calls) trace.plan.push_back(render_call(call));

  // Children may run concurrently; results are assembled in planned order.
  std::vector<ChildTrace> children(plan.calls.size());
  std::vector<std::future<ChildTrace>> futures(plan.calls.size());
  for (std::size_t i = 0; i < plan.calls.size(); ++i) {
    const OperationCall& call = plan.calls[i];
    if (state.limiter.try_acquire()) {
      futures[i] = std::async(std::launch::async, [&state, &ctx, &call] {
        struct Release {
          TaskLimiter& limiter;
          ~Release() { limiter.release(); }
        } release{state.limiter};
        return execute_child(ctx, call, state);
      });
    } else {
      children[i] = execute_child(ctx, call, state);
    }
  }
  for (std::size_t i = 0; i < futures.size(); ++i) {
    if (futures[i].valid()) children[i] = futures[i].get();
  }

  std::vector<std::string> texts;
  texts.reserve(children.size());
  for (const ChildTrace& child : children) texts.push_back(child.node->text);
  trace.children = std::move(children);

  trace.text = merge_reports(texts, ctx.depth == 0, state.cfg, state.backend,
                             state.templates, &trace.usage);
  trace.seconds = seconds_since(start);
  return trace;
}

void accumulate(const NodeTrace& node, Usage& usage) {
  usage += node.usage;
  for (const ChildTrace& child : node.children) accumulate(*child.node, usage);
}

}  // namespace

std::string_view merge_policy_name(MergePolicy policy) {
  return policy == MergePolicy::RootOnly ? "root_only" : "every_node";
}

std::optional<MergePolicy> parse_merge_policy(std::string_view name) {
  if (name == "root_only") return MergePolicy::RootOnly;
  if (name == "every_node") return MergePolicy::EveryNode;
  return std::nullopt;
}

void EngineConfig::validate() const {
  if (max_depth <= 0) throw EngineError("max_depth must be positive");
  if (max_degree <= 0) throw EngineError("max_degree must be positive");
  if (parallelism <= 0) throw EngineError("parallelism must be positive");
  if (!enabled_pool.contains(OperationKind::Write)) {
    throw EngineError("operation pool must contain write()");
  }
  if (budgets.planning <= 0 || budgets.write <= 0 || budgets.generating <= 0) {
    throw EngineError("token budgets must be positive");
  }
}

PlanResult plan_node(const NodeContext& ctx, const EngineConfig& cfg,
                     ChatBackend& backend, const TemplateSet& templates) {
  PromptBindings bindings;
  bindings.set("TABLE_DESCRIPTION", templates.table_description)
      .set("OPERATION_DESCRIPTION", templates.operation_description)
      .set("TABLE_FORMAT", std::string(table_format_name(cfg.table_format)))
      .set("MAX_DEPTH", std::to_string(cfg.max_depth))
      .set("MAX_DEGREE", std::to_string(cfg.max_degree))
      .set("PLANNING_TOKENS", std::to_string(cfg.budgets.planning))
      .set("TABLES", render_table_set(ctx.tables, cfg.table_format, true))
      .set("OPERATION_HISTORY", ctx.history.render())
      .set("OPERATION_POOL", ctx.pool.render());
  const RenderedPrompt prompt = render_prompt(templates.planning, bindings);

  ChatRequest request{prompt.system, prompt.user, cfg.budgets.planning,
                      cfg.temperature, cfg.model};
  const ChatResponse response = backend.complete(request);

  PlanResult result;
  result.raw_text = response.text;
  result.usage = response.usage;

  ParsedPlan parsed = parse_plan(response.text);
  for (const PlanDiagnostic& d : parsed.diagnostics) {
    result.diagnostics.push_back(std::string(diagnostic_kind_name(d.kind)) + ": " + d.detail);
  }
  if (parsed.used_fallback) result.diagnostics.push_back("Fallback: write()");

  for (const OperationCall& call : parsed.calls) {
    if (!ctx.pool.contains(call.kind())) {
      result.diagnostics.push_back("PoolViolation: " + render_call(call));
      continue;
    }
    if (result.calls.size() >= static_cast<std::size_t>(cfg.max_degree)) {
      result.diagnostics.push_back("Truncated: " + render_call(call));
      continue;
    }
    result.calls.push_back(call);
  }
  if (result.calls.empty()) {
    result.diagnostics.push_back("Fallback: write()");
    result.calls.push_back(OperationCall::write());
  }
  return result;
}

std::string merge_reports(const std::vector<std::string>& texts, bool at_root,
                          const EngineConfig& cfg, ChatBackend& backend,
                          const TemplateSet& templates, Usage* usage_out) {
  if (texts.empty()) throw EngineError("merge_reports: no texts");
  if (texts.size() == 1) return texts.front();  // no LLM needed for one child

  if (cfg.merge_policy == MergePolicy::RootOnly && !at_root) {
    std::string joined;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (i > 0) joined += "\n";
      joined += texts[i];
    }
    return joined;
  }

  std::string reports;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i > 0) reports += "\n\n";
    reports += texts[i];
  }
  PromptBindings bindings;
  bindings.set("GENERATING_TOKENS", std::to_string(cfg.budgets.generating))
      .set("REPORTS", reports);
  const RenderedPrompt prompt = render_prompt(templates.generating, bindings);
  ChatRequest request{prompt.system, prompt.user, cfg.budgets.generating,
                      cfg.temperature, cfg.model};
  ChatResponse response = backend.complete(request);
  if (usage_out) *usage_out += response.usage;
  return response.text;
}

RunResult run(const TableSet& ts, const EngineConfig& cfg, ChatBackend& backend,
              const TemplateSet& templates, const PricingTable& pricing) {
  cfg.validate();
  if (ts.tables.empty()) throw EngineError("run: empty table set");
  ts.validate();

  EngineState state{cfg, backend, templates, TaskLimiter(cfg.parallelism)};
  NodeContext root;
  root.tables = ts;
  root.history = OperationHistory::initial();
  root.pool = cfg.enabled_pool;
  root.depth = 0;

  const auto start = Clock::now();
  RunResult result;
  result.trace.root = execute_node(root, state);
  result.trace.total_seconds = seconds_since(start);
  result.trace.model = cfg.model;
  accumulate(result.trace.root, result.trace.total_usage);
  if (pricing.has(cfg.model)) {
    result.trace.total_cost_milli_usd =
        estimate_cost(result.trace.total_usage, cfg.model, pricing);
  }
  result.report = result.trace.root.text;
  return result;
}

namespace {

// 12-decimal rendering of count/total via long division; counts are small,
// and per-depth rates then sum to 1 within 1e-9.
Decimal ratio_decimal(std::size_t count, std::size_t total) {
  std::string digits = std::to_string(count / total);
  std::size_t remainder = count % total;
  for (int i = 0; i < 12; ++i) {
    remainder *= 10;
    digits.push_back(static_cast<char>('0' + remainder / total));
    remainder %= total;
  }
  auto parsed = Decimal::parse(digits.substr(0, digits.size() - 12) + "." +
                               digits.substr(digits.size() - 12));
  return *parsed;
}

void count_edges(const NodeTrace& node,
                 std::map<int, std::map<OperationKind, std::size_t>>& counts) {
  for (const ChildTrace& child : node.children) {
    const std::size_t paren = child.call.find('(');
    const auto kind = operation_from_name(child.call.substr(0, paren));
    if (kind) counts[node.depth + 1][*kind] += 1;
    count_edges(*child.node, counts);
  }
}

}  // namespace

Table operation_usage_by_depth(const std::vector<const RunTrace*>& traces) {
  if (traces.empty()) throw EngineError("operation_usage_by_depth: no traces");
  std::map<int, std::map<OperationKind, std::size_t>> counts;
  for (const RunTrace* trace : traces) count_edges(trace->root, counts);

  Table out;
  out.name = "operation_usage";
  out.columns = {"depth", "kind", "usage_rate"};
  for (const auto& [depth, kinds] : counts) {
    std::size_t total = 0;
    for (const auto& [kind, n] : kinds) total += n;
    if (total == 0) continue;
    for (const auto& [kind, n] : kinds) {
      out.rows.push_back({CellValue::number(static_cast<std::int64_t>(depth)),
                          CellValue::text(std::string(operation_name(kind))),
                          CellValue::number(ratio_decimal(n, total))});
    }
  }
  return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json node_to_json(const NodeTrace& node, bool include_timings) {
  ordered_json j;
  j["depth"] = node.depth;
  j["history"] = node.history;
  j["pool"] = node.pool;
  j["tables"] = ordered_json::array();
  for (const TableSummary& t : node.tables) {
    j["tables"].push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  }
  if (node.planned_text) {
    j["planned_text"] = *node.planned_text;
  } else {
    j["planned_text"] = nullptr;
  }
  j["plan"] = node.plan;
  j["diagnostics"] = node.diagnostics;
  j["children"] = ordered_json::array();
  for (const ChildTrace& child : node.children) {
    ordered_json c;
    c["call"] = child.call;
    c["status"] = child.status;
    if (!child.error.empty()) c["error"] = child.error;
    c["node"] = node_to_json(*child.node, include_timings);
    j["children"].push_back(std::move(c));
  }
  j["text"] = node.text;
  j["usage"] = {{"input_tokens", node.usage.input_tokens},
                {"output_tokens", node.usage.output_tokens}};
  if (include_timings) j["seconds"] = node.seconds;
  return j;
}

NodeTrace node_from_json(const ordered_json& j) {
  NodeTrace node;
  node.depth = j.at("depth").get<int>();
  node.history = j.value("history", std::vector<std::string>{});
  node.pool = j.value("pool", std::vector<std::string>{});
  if (j.contains("tables")) {
    for (const auto& t : j.at("tables")) {
      node.tables.push_back({t.value("name", ""), t.value("rows", std::size_t{0}),
                             t.value("cols", std::size_t{0})});
    }
  }
  if (j.contains("planned_text") && !j.at("planned_text").is_null()) {
    node.planned_text = j.at("planned_text").get<std::string>();
  }
  node.plan = j.value("plan", std::vector<std::string>{});
  node.diagnostics = j.value("diagnostics", std::vector<std::string>{});
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) {
      ChildTrace child;
      child.call = c.value("call", "");
      child.status = c.value("status", "");
      child.error = c.value("error", "");
      child.node = std::make_unique<NodeTrace>(node_from_json(c.at("node")));
      node.children.push_back(std::move(child));
    }
  }
  node.text = j.value("text", "");
  if (j.contains("usage")) {
    node.usage.input_tokens = j.at("usage").value("input_tokens", std::int64_t{0});
    node.usage.output_tokens = j.at("usage").value("output_tokens", std::int64_t{0});
  }
  node.seconds = j.value("seconds", 0.0);
  return node;
}

}  // namespace

std::string trace_to_json(const RunTrace& trace, bool include_timings) {
  ordered_json j;
  j["schema"] = "tot-trace/1";
  j["model"] = trace.model;
  ordered_json totals;
  totals["input_tokens"] = trace.total_usage.input_tokens;
  totals["output_tokens"] = trace.total_usage.output_tokens;
  totals["cost_milli_usd"] = trace.total_cost_milli_usd.str();
  if (include_timings) totals["seconds"] = trace.total_seconds;
  j["totals"] = std::move(totals);
  j["root"] = node_to_json(trace.root, include_timings);
  return j.dump(2) + "\n";
}

RunTrace trace_from_json(const std::string& json_text) {
  const auto j = ordered_json::parse(json_text);
  RunTrace trace;
  trace.model = j.value("model", "");
  if (j.contains("totals")) {
    const auto& totals = j.at("totals");
    trace.total_usage.input_tokens = totals.value("input_tokens", std::int64_t{0});
    trace.total_usage.output_tokens = totals.value("output_tokens", std::int64_t{0});
    trace.total_seconds = totals.value("seconds", 0.0);
    if (totals.contains("cost_milli_usd")) {
      if (auto d = Decimal::parse(totals.at("cost_milli_usd").get<std::string>())) {
        trace.total_cost_milli_usd = *d;
      }
    }
  }
  trace.root = node_from_json(j.at("root"));
  return trace;
}

}  // namespace tot
