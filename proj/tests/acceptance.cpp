// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "random_planner.hpp"
#include "reference_ops.hpp"
#include "test_support.hpp"
#include "tot/config.hpp"
#include "tot/datasets.hpp"
#include "tot/engine.hpp"
#include "tot/eval.hpp"
#include "tot/llm.hpp"
#include "tot/ops.hpp"
#include "tot/prompts.hpp"
#include "tot/table.hpp"

using namespace tot;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(const std::string& criterion, bool ok, const std::string& detail = "") {
  std::printf("%s — %s%s%s\n", ok ? "PASS" : "FAIL", criterion.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Operation-algebra oracle equivalence
void criterion_operation_algebra() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::size_t checked = 0;
  for (int iter = 0; iter < 1200; ++iter) {
    const TableSet ts = tot_test::random_table_set(rng);
    const OperationCall call = tot_test::random_valid_call(rng, ts);
    TableSet mine, ref;
    bool my_error = false, ref_error = false;
    try {
      mine = apply_call(call, ts);
    } catch (const OpError&) {
      my_error = true;
    }
    try {
      ref = tot_ref::ref_apply(call, ts);
    } catch (const OpError&) {
      ref_error = true;
    }
    if (my_error != ref_error || (!my_error && !tot_ref::table_sets_equal(mine, ref))) {
      report("operation-algebra oracle equivalence", false,
             "divergence on " + render_call(call));
      return;
    }
    ++checked;
  }
  const double elapsed = seconds_since(start);
  report("operation-algebra oracle equivalence", checked >= 1000 && elapsed < 10.0,
         std::to_string(checked) + " randomized tables in " + std::to_string(elapsed) + "s");
}

// ---------------------------------------------------------------------------
// 2. Parser round-trip + fuzz
OperationCall random_roundtrip_call(std::mt19937_64& rng) {
  auto word = [&rng] {
    static const std::vector<std::string> pool = {"rally",  "winner", "score",   "a,b",
                                                  "x(y)",   "it's",   "qu\"ote", " pad ",
                                                  "[deep]", "slash\\", "net shot", ""};
    return pool[rng() % pool.size()];
  };
  switch (rng() % 7) {
    case 0:
      return OperationCall::write();
    case 1:
      return OperationCall::select_table({word(), word()});
    case 2: {
      std::vector<std::size_t> indices = {rng() % 30};
      if (rng() % 2 == 0) {
        const std::size_t extra = rng() % 30;
        if (extra != indices[0]) indices.push_back(extra);
      }
      return OperationCall::select_row(std::move(indices));
    }
    case 3:
      return OperationCall::select_col({word()});
    case 4:
      return OperationCall::count({word(), word()});
    case 5:
      return OperationCall::sort(
          {{word(), rng() % 2 == 0 ? SortOrder::Asc : SortOrder::Desc},
           {word(), rng() % 2 == 0 ? SortOrder::Asc : SortOrder::Desc}});
    default: {
      static const std::vector<Comparator> comparators = {
          Comparator::Eq, Comparator::Ne, Comparator::Gt, Comparator::Ge,
          Comparator::Lt, Comparator::Le, Comparator::Contains};
      return OperationCall::filter(word(), comparators[rng() % comparators.size()], word());
    }
  }
}

void criterion_parser_roundtrip() {
  std::mt19937_64 rng(103);
  for (int iter = 0; iter < 1200; ++iter) {
    std::vector<OperationCall> calls;
    const std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) calls.push_back(random_roundtrip_call(rng));
    std::string text = "[";
    for (std::size_t i = 0; i < calls.size(); ++i) {
      if (i > 0) text += ", ";
      text += render_call(calls[i]);
    }
    text += "]";
    const ParsedPlan plan = parse_plan(text);
    if (plan.calls.size() != calls.size()) {
      report("parser round-trip", false, "length drift on: " + text);
      return;
    }
    for (std::size_t i = 0; i < calls.size(); ++i) {
      if (!(plan.calls[i] == calls[i])) {
        report("parser round-trip", false, "value drift on: " + text);
        return;
      }
    }
  }
  report("parser round-trip", true, "1200 randomized call lists");

  // Fuzz parse_plan on random byte strings for 10 seconds: no crash, and
  // inputs with no extractable call fall back to [write()].
  const auto start = Clock::now();
  std::mt19937_64 fuzz_rng(107);
  std::size_t fuzzed = 0;
  bool fallback_ok = true;
  while (seconds_since(start) < 10.0) {
    std::string bytes;
    const std::size_t len = fuzz_rng() % 200;
    for (std::size_t i = 0; i < len; ++i) {
      bytes.push_back(static_cast<char>(fuzz_rng() % 256));
    }
    const ParsedPlan plan = parse_plan(bytes);
    if (plan.calls.empty()) fallback_ok = false;
    if (plan.used_fallback &&
        !(plan.calls.size() == 1 && plan.calls[0].kind() == OperationKind::Write)) {
      fallback_ok = false;
    }
    ++fuzzed;
  }
  report("parser fuzz (10s, no crash, write() fallback)", fallback_ok,
         std::to_string(fuzzed) + " inputs");
}

// ---------------------------------------------------------------------------
// 3. DLD correctness
std::size_t dld_oracle(const std::string& a, const std::string& b, std::size_t i = 0,
                       std::size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = dld_oracle(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, dld_oracle(a, b, i + 1, j) + 1);
  best = std::min(best, dld_oracle(a, b, i, j + 1) + 1);
  if (i + 1 < a.size() && j + 1 < b.size() && a[i] == b[j + 1] && a[i + 1] == b[j]) {
    best = std::min(best, dld_oracle(a, b, i + 2, j + 2) + 1);
  }
  return best;
}

void criterion_dld() {
  const auto start = Clock::now();
  std::vector<std::string> sequences = {""};
  std::vector<std::string> frontier = {""};
  for (int len = 1; len <= 5; ++len) {
    std::vector<std::string> next;
    for (const std::string& s : frontier) {
      for (char c : {'a', 'b', 'c'}) next.push_back(s + c);
    }
    sequences.insert(sequences.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const std::string& a : sequences) {
    for (const std::string& b : sequences) {
      if (dld(a, b) != dld_oracle(a, b)) {
        report("DLD exhaustive oracle (3 symbols, lengths <= 5)", false,
               "'" + a + "' vs '" + b + "'");
        return;
      }
    }
  }
  const std::size_t pairs = sequences.size() * sequences.size();
  report("DLD exhaustive oracle (3 symbols, lengths <= 5)", true,
         std::to_string(pairs) + " pairs");

  // Pairwise metric axioms on 10,000 random pairs: symmetry, identity of
  // indiscernibles, non-negativity and the length bounds. The triangle
  // inequality is a triple property and provably fails for the restricted
  // (OSA) variant this distance is pinned to: d(ca,ac)=1 and d(ac,abc)=1 yet
  // d(ca,abc)=3, the same example the exhaustive oracle fixes at 3.
  std::mt19937_64 rng(109);
  auto random_seq = [&rng] {
    std::string s;
    for (std::size_t i = rng() % 9; i > 0; --i) s.push_back(static_cast<char>('a' + rng() % 5));
    return s;
  };
  bool axioms = true;
  for (int iter = 0; iter < 10000; ++iter) {
    const std::string a = random_seq();
    const std::string b = random_seq();
    const std::size_t ab = dld(a, b);
    if (ab != dld(b, a)) axioms = false;
    if ((ab == 0) != (a == b)) axioms = false;
    if (ab > std::max(a.size(), b.size())) axioms = false;
    if (ab + std::min(a.size(), b.size()) < std::max(a.size(), b.size())) axioms = false;
  }
  const double elapsed = seconds_since(start);
  report("DLD pairwise metric axioms (10000 random pairs)", axioms && elapsed < 30.0,
         std::to_string(elapsed) + "s");
}

// ---------------------------------------------------------------------------
// 4. Metric identities
bool close2(double value, double expected) { return std::abs(value - expected) < 0.005; }

void criterion_metric_identities() {
  const RelationTriple a{"t", "c", "a"};
  const RelationTriple b{"t", "c", "b"};
  const CsResult identity = cs({a, b}, {b, a});
  bool ok = close2(identity.precision, 100.0) && close2(identity.recall, 100.0) &&
            close2(identity.f1, 100.0);
  ok = ok && close2(co({a, b}, {a, b}), 100.0);

  TableSet ts;
  ts.tables.push_back(tot_test::make_table("rally", {"winner"}, {{"A"}, {"B"}}));
  const SampleMetrics micro =
      score_sample("B won the match.", "A lost to B.", ts, extract_relations_lexical);
  ok = ok && micro.rg_count == 1.0 && close2(micro.rg_precision, 100.0) &&
       close2(micro.cs_precision, 100.0) && close2(micro.cs_recall, 50.0) &&
       close2(micro.cs_f1, 66.67) && close2(micro.co_dld, 50.0);
  report("metric identities + worked micro-case (RG 1/100, CS 100/50/66.67, CO 50)", ok);
}

// ---------------------------------------------------------------------------
// 5. Tree structural invariants under randomized scripted planners
struct TreeStats {
  int max_depth = 0;
  std::size_t planning_nodes = 0;
  std::size_t leaves = 0;
  std::size_t max_children = 0;
  bool max_depth_nodes_are_leaves = true;
  bool path_kinds_distinct = true;
};

void walk(const NodeTrace& node, int engine_max_depth, std::set<std::string> used,
          TreeStats& stats) {
  stats.max_depth = std::max(stats.max_depth, node.depth);
  stats.max_children = std::max(stats.max_children, node.children.size());
  if (node.planned_text.has_value()) ++stats.planning_nodes;
  if (node.children.empty()) ++stats.leaves;
  if (node.depth >= engine_max_depth && !node.children.empty()) {
    stats.max_depth_nodes_are_leaves = false;
  }
  for (const ChildTrace& child : node.children) {
    std::set<std::string> child_used = used;
    const std::string name = child.call.substr(0, child.call.find('('));
    if (child.status == "ok" && name != "write") {
      if (!child_used.insert(name).second) stats.path_kinds_distinct = false;
    }
    walk(*child.node, engine_max_depth, child_used, stats);
  }
}

// Counts requests flowing into any backend; used to verify call formulas.
struct RecordingBackend : ChatBackend {
  ChatBackend& inner;
  std::vector<ChatRequest> seen;
  std::mutex mutex;
  explicit RecordingBackend(ChatBackend& inner) : inner(inner) {}
  ChatResponse complete(const ChatRequest& request) override {
    {
      std::lock_guard<std::mutex> lock(mutex);
      seen.push_back(request);
    }
    return inner.complete(request);
  }
};

void criterion_tree_invariants() {
  const TemplateSet templates = builtin_templates(tot_test::badminton_profile());
  std::mt19937_64 rng(113);
  bool ok = true;
  std::string detail;
  for (int iter = 0; iter < 520 && ok; ++iter) {
    EngineConfig cfg;
    cfg.max_depth = 1 + static_cast<int>(rng() % 4);
    cfg.max_degree = 1 + static_cast<int>(rng() % 4);
    cfg.parallelism = 1 + static_cast<int>(rng() % 2);
    tot_test::RandomPlannerBackend planner(rng());
    RecordingBackend backend(planner);
    std::mt19937_64 table_rng(rng());
    const TableSet ts = tot_test::random_table_set(table_rng);
    const RunResult result = run(ts, cfg, backend, templates);

    TreeStats stats;
    walk(result.trace.root, cfg.max_depth, {}, stats);
    if (stats.max_depth > cfg.max_depth) {
      ok = false;
      detail = "depth bound violated";
    }
    if (!stats.max_depth_nodes_are_leaves) {
      ok = false;
      detail = "max-depth node is not a write leaf";
    }
    if (stats.max_children > static_cast<std::size_t>(cfg.max_degree)) {
      ok = false;
      detail = "degree bound violated";
    }
    if (!stats.path_kinds_distinct) {
      ok = false;
      detail = "pool shrinking violated on a path";
    }
    // Backend-call count under MergeRootOnly:
    // (#planning nodes) + (#leaves) + (1 if the root has >= 2 children).
    const std::size_t merge = result.trace.root.children.size() >= 2 ? 1 : 0;
    if (backend.seen.size() != stats.planning_nodes + stats.leaves + merge) {
      ok = false;
      detail = "backend-call formula violated";
    }
  }
  report("tree structural invariants + call-count formula (520 randomized scripted runs)",
         ok, detail);
}

// ---------------------------------------------------------------------------
// 6 + 7. Golden deterministic run, optimization checks, call-count formula
ScriptedBackend golden_backend() {
  ScriptedBackend backend;
  backend.add_rule({{{ScriptCondition::Field::User, "## Operation Pool"},
                     {ScriptCondition::Field::User, "select_table(rally)"}},
                    "[write()]",
                    {120, 8},
                    "planning"});
  backend.add_rule({{{ScriptCondition::Field::User, "## Operation Pool"}},
                    "[select_table(rally), write()]",
                    {200, 12},
                    "planning"});
  backend.add_rule({{{ScriptCondition::Field::User, "## Reports"}},
                    "Final merged report.",
                    {90, 40},
                    "generating"});
  backend.add_rule({{{ScriptCondition::Field::User, "## Tables"},
                     {ScriptCondition::Field::User, "## game"}},
                    "Text about the whole match.",
                    {150, 30},
                    "write"});
  backend.add_rule({{{ScriptCondition::Field::User, "## Tables"}},
                    "Text about the rally table.",
                    {80, 25},
                    "write"});
  return backend;
}

std::size_t count_planning_requests(const std::vector<ChatRequest>& requests) {
  std::size_t n = 0;
  for (const ChatRequest& r : requests) {
    if (r.user.find("## Operation Pool") != std::string::npos) ++n;
  }
  return n;
}

std::size_t count_generating_requests(const std::vector<ChatRequest>& requests) {
  std::size_t n = 0;
  for (const ChatRequest& r : requests) {
    if (r.user.find("## Reports") != std::string::npos) ++n;
  }
  return n;
}

void criterion_golden_run() {
  const TemplateSet templates = builtin_templates(tot_test::badminton_profile());
  EngineConfig cfg;
  cfg.max_depth = 3;
  cfg.parallelism = 1;

  ScriptedBackend backend = golden_backend();
  const RunResult first = run(tot_test::rally_fixture(), cfg, backend, templates);
  const std::string first_trace = trace_to_json(first.trace, /*include_timings=*/false);

  const std::string golden_path = std::string(TOT_TEST_DATA_DIR) + "/golden/two_level_run";
  const std::string expected_report = read_text_file(golden_path + "_report.golden");
  const std::string expected_trace = read_text_file(golden_path + "_trace.golden");

  bool ok = first.report + "\n" == expected_report;
  std::string detail = ok ? "" : "report drifted from golden";
  if (ok && first_trace != expected_trace) {
    ok = false;
    detail = "trace drifted from golden";
  }

  cfg.parallelism = 4;
  for (int round = 0; round < 3 && ok; ++round) {
    ScriptedBackend parallel_backend = golden_backend();
    const RunResult parallel = run(tot_test::rally_fixture(), cfg, parallel_backend, templates);
    if (parallel.report != first.report ||
        trace_to_json(parallel.trace, false) != first_trace) {
      ok = false;
      detail = "parallelism changed the output";
    }
  }
  report("deterministic golden run (byte-exact report + trace, parallelism 1 and 4)", ok,
         detail);
}

void criterion_optimizations() {
  const TemplateSet templates = builtin_templates(tot_test::badminton_profile());
  bool ok = true;
  std::string detail;

  // Single-child merge: zero generating calls.
  {
    ScriptedBackend backend;
    backend.add_rule({{{ScriptCondition::Field::User, "## Operation Pool"}},
                      "[write()]",
                      {10, 5},
                      "planning"});
    backend.add_rule({{{ScriptCondition::Field::User, "## Tables"}}, "only", {1, 1}, "write"});
    EngineConfig cfg;
    cfg.max_depth = 3;
    run(tot_test::rally_fixture(), cfg, backend, templates);
    if (count_generating_requests(backend.requests()) != 0) {
      ok = false;
      detail = "single-child merge issued a generating call";
    }
  }
  // MergeRootOnly: exactly one generating call with a multi-child root, and
  // exactly one planning call per planning node.
  {
    ScriptedBackend backend = golden_backend();
    EngineConfig cfg;
    cfg.max_depth = 3;
    const RunResult result = run(tot_test::rally_fixture(), cfg, backend, templates);
    const auto requests = backend.requests();
    if (count_generating_requests(requests) != 1) {
      ok = false;
      detail = "root-only policy issued more than one generating call";
    }
    TreeStats stats;
    walk(result.trace.root, cfg.max_depth, {}, stats);
    if (count_planning_requests(requests) != stats.planning_nodes) {
      ok = false;
      detail = "planning calls != planning nodes (single-step violated)";
    }
    // Backend-call formula under MergeRootOnly.
    const std::size_t merge = result.trace.root.children.size() >= 2 ? 1 : 0;
    if (requests.size() != stats.planning_nodes + stats.leaves + merge) {
      ok = false;
      detail = "backend-call count formula violated on the golden run";
    }
  }
  // One planning request per planning node across randomized runs.
  {
    std::mt19937_64 rng(127);
    for (int iter = 0; iter < 40 && ok; ++iter) {
      EngineConfig cfg;
      cfg.max_depth = 1 + static_cast<int>(rng() % 3);
      cfg.max_degree = 1 + static_cast<int>(rng() % 4);
      tot_test::RandomPlannerBackend planner(rng());
      RecordingBackend recorder(planner);
      std::mt19937_64 table_rng(rng());
      const TableSet ts = tot_test::random_table_set(table_rng);
      const RunResult result = run(ts, cfg, recorder, templates);
      TreeStats stats;
      walk(result.trace.root, cfg.max_depth, {}, stats);
      if (count_planning_requests(recorder.seen) != stats.planning_nodes) {
        ok = false;
        detail = "single-step planning violated on a randomized run";
      }
    }
  }
  report("efficiency optimizations (single-child merge, root-only merge, one-step planning)",
         ok, detail);
}

// ---------------------------------------------------------------------------
// 8. Cost accounting
void criterion_cost() {
  PricingTable pricing;
  pricing.models["gpt-4o-mini"] = {Decimal::parse("0.15")->shifted_pow10(-6),
                                   Decimal::parse("0.60")->shifted_pow10(-6)};
  bool ok = estimate_cost({1000, 500}, "gpt-4o-mini", pricing).str() == "0.45";
  std::string detail = ok ? "" : "pinned case != 0.45 milli-USD";

  // The unit is milli-dollars: 1M input tokens at $0.15/M must equal 150.
  if (ok && estimate_cost({1000000, 0}, "gpt-4o-mini", pricing).str() != "150") {
    ok = false;
    detail = "cost unit is not $0.001 USD";
  }

  std::mt19937_64 rng(131);
  for (int iter = 0; iter < 1000 && ok; ++iter) {
    const Usage a{static_cast<std::int64_t>(rng() % 2000000),
                  static_cast<std::int64_t>(rng() % 2000000)};
    const Usage b{static_cast<std::int64_t>(rng() % 2000000),
                  static_cast<std::int64_t>(rng() % 2000000)};
    if (!(estimate_cost(a, "gpt-4o-mini", pricing) + estimate_cost(b, "gpt-4o-mini", pricing) ==
          estimate_cost(a + b, "gpt-4o-mini", pricing))) {
      ok = false;
      detail = "linearity violated";
    }
  }
  report("cost accounting (exact linearity, 0.45 milli-USD case, unit check)", ok, detail);
}

// ---------------------------------------------------------------------------
// 9. Preprocessing
void criterion_preprocessing() {
  bool ok = true;
  std::string detail;

  // Synthetic 3-rally stroke file: exactly 3 rows, each the last stroke.
  {
    TableSet strokes;
    strokes.tables.push_back(tot_test::make_table(
        "stroke", {"set", "rally", "stroke", "ball_type"},
        {{"1", "1", "1", "serve"},
         {"1", "1", "2", "smash"},
         {"1", "2", "1", "serve"},
         {"1", "2", "2", "lob"},
         {"1", "2", "3", "net shot"},
         {"1", "3", "1", "clear"}}));
    ShuttlesetSpec spec;
    spec.group_columns = {"set", "rally"};
    spec.columns = {"rally", "ball_type"};
    const TableSet out = preprocess_shuttleset(strokes, spec);
    if (out.tables[0].n_rows() != 3) {
      ok = false;
      detail = "shuttleset row count";
    } else if (!(out.tables[0].rows[0][1] == CellValue::text("smash") &&
                 out.tables[0].rows[1][1] == CellValue::text("net shot") &&
                 out.tables[0].rows[2][1] == CellValue::text("clear"))) {
      ok = false;
      detail = "shuttleset did not keep last strokes";
    }
  }
  // Synthetic MLB record: all-missing stat rows dropped, partial rows kept.
  if (ok) {
    DatasetProfile profile;
    profile.name = "mlb-mini";
    profile.sport = "baseball";
    profile.mlb.stat_columns = {"h", "rbi"};
    const std::string record = R"({
      "game": {"d": 1}, "home_line": {"t": "H"}, "vis_line": {"t": "V"},
      "box_score": [
        {"player": "A", "h": 2, "rbi": 1},
        {"player": "B", "h": null, "rbi": null},
        {"player": "C", "h": null, "rbi": 3}
      ],
      "play_by_play": [{"inning": 1}]
    })";
    const TableSet out = preprocess_mlb(record, profile);
    const Table* box = out.find("box_score");
    if (box == nullptr || box->n_rows() != 2 ||
        !(box->rows[0][0] == CellValue::text("A") && box->rows[1][0] == CellValue::text("C"))) {
      ok = false;
      detail = "mlb drop rule";
    }
  }
  // Split 58 at 40:9:9: exact sizes, seed-deterministic.
  if (ok) {
    std::vector<Sample> samples;
    for (int i = 0; i < 58; ++i) {
      Sample s;
      s.id = "s" + std::to_string(i);
      s.tables.tables.push_back(tot_test::make_table("t", {"v"}, {{std::to_string(i)}}));
      s.gold_report = "r";
      samples.push_back(std::move(s));
    }
    const SplitResult a = split(samples, {40, 9, 9, 2024});
    const SplitResult b = split(samples, {40, 9, 9, 2024});
    if (a.train.size() != 40 || a.validation.size() != 9 || a.test.size() != 9) {
      ok = false;
      detail = "split sizes";
    }
    for (std::size_t i = 0; ok && i < a.test.size(); ++i) {
      if (a.test[i].id != b.test[i].id) {
        ok = false;
        detail = "split not seed-deterministic";
      }
    }
  }
  report("preprocessing (shuttleset last-stroke, mlb N/A drop, 40:9:9 split)", ok, detail);
}

// ---------------------------------------------------------------------------
// 10. Serialization golden files
void criterion_serialization() {
  const TableSet fixture = tot_test::rally_fixture();
  const std::string dir = std::string(TOT_TEST_DATA_DIR) + "/golden/";
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<TableFormat, std::string>> cases = {
      {TableFormat::Csv, "render_csv.golden"},
      {TableFormat::Pipe, "render_pipe.golden"},
      {TableFormat::Markdown, "render_markdown.golden"},
      {TableFormat::Html, "render_html.golden"},
  };
  for (const auto& [format, file] : cases) {
    const std::string expected = read_text_file(dir + file);
    const std::string actual = render_table_set(fixture, format, true) + "\n";
    if (actual != expected) {
      ok = false;
      detail = file + " drifted";
    }
  }
  // CSV round-trip through parse_csv_table.
  if (ok) {
    for (const Table& t : fixture.tables) {
      const std::string rendered =
          render_table_set(TableSet{{t}}, TableFormat::Csv, false);
      const Table parsed = parse_csv_table(rendered.substr(rendered.find('\n') + 1), t.name);
      if (!(parsed.columns == t.columns) || parsed.rows.size() != t.rows.size()) {
        ok = false;
        detail = "csv round-trip shape";
        break;
      }
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (!(parsed.rows[r] == t.rows[r])) {
          ok = false;
          detail = "csv round-trip cells";
        }
      }
    }
  }
  report("serialization golden files (CSV/PIPE/Markdown/HTML) + CSV round-trip", ok, detail);
}

}  // namespace

int main() {
  criterion_operation_algebra();
  criterion_parser_roundtrip();
  criterion_dld();
  criterion_metric_identities();
  criterion_tree_invariants();
  criterion_golden_run();
  criterion_optimizations();
  criterion_cost();
  criterion_preprocessing();
  criterion_serialization();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
