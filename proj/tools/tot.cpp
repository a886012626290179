// Command-line entry point: generate | evaluate | baseline | usage-stats |
// init-templates. Exit codes: 0 success, 1 config error, 2 partial failures,
// 3 backend exhaustion.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tot/config.hpp"
#include "tot/datasets.hpp"
#include "tot/engine.hpp"
#include "tot/eval.hpp"
#include "tot/llm.hpp"
#include "tot/prompts.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartialFailure = 2;
constexpr int kExitBackendExhausted = 3;

struct CommonFlags {
  std::string config_file;
  std::optional<std::string> dataset_dir;
  std::optional<std::string> out_dir;
  std::optional<std::string> templates_dir;
  std::optional<int> max_depth;
  std::optional<int> max_degree;
  std::optional<std::string> table_format;
  std::optional<std::string> merge_policy;
  std::optional<std::string> pool;
  std::optional<std::string> model;
  std::optional<int> parallelism;
  std::optional<std::string> backend_type;
  std::optional<std::string> base_url;
  std::optional<std::string> script_file;
  std::optional<std::string> extraction;
  std::optional<std::string> split_use;
  std::optional<std::int64_t> token_budget;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON run configuration file");
  cmd->add_option("--dataset", flags.dataset_dir, "Dataset directory (profile.json + samples)");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--templates", flags.templates_dir, "Prompt template directory");
  cmd->add_option("--max-depth", flags.max_depth, "Maximum tree depth");
  cmd->add_option("--max-degree", flags.max_degree, "Maximum children per node");
  cmd->add_option("--format", flags.table_format, "Table format: CSV, PIPE, Markdown, HTML");
  cmd->add_option("--merge-policy", flags.merge_policy, "root_only or every_node");
  cmd->add_option("--pool", flags.pool, "Comma-separated operation pool");
  cmd->add_option("--model", flags.model, "Model name");
  cmd->add_option("--parallelism", flags.parallelism, "Concurrent child subtrees");
  cmd->add_option("--backend", flags.backend_type, "Backend type: http or scripted");
  cmd->add_option("--base-url", flags.base_url, "Chat-completions base URL");
  cmd->add_option("--script", flags.script_file, "Scripted backend rule file");
  cmd->add_option("--extraction", flags.extraction, "Relation extraction: lexical or llm");
  cmd->add_option("--split-use", flags.split_use, "Which split to run: train/validation/test/all");
  cmd->add_option("--budget", flags.token_budget, "Corpus-level token budget");
}

tot::RunConfig resolve_config(const CommonFlags& flags) {
  tot::RunConfig config;
  if (!flags.config_file.empty()) config = tot::RunConfig::load(flags.config_file);
  if (flags.dataset_dir) config.dataset_dir = *flags.dataset_dir;
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.templates_dir) config.templates_dir = *flags.templates_dir;
  if (flags.max_depth) config.engine.max_depth = *flags.max_depth;
  if (flags.max_degree) config.engine.max_degree = *flags.max_degree;
  if (flags.table_format) {
    const auto format = tot::parse_table_format(*flags.table_format);
    if (!format) throw tot::ConfigError("unknown table format: " + *flags.table_format);
    config.engine.table_format = *format;
  }
  if (flags.merge_policy) {
    const auto policy = tot::parse_merge_policy(*flags.merge_policy);
    if (!policy) throw tot::ConfigError("unknown merge policy: " + *flags.merge_policy);
    config.engine.merge_policy = *policy;
  }
  if (flags.pool) {
    std::vector<std::string> names;
    std::string current;
    for (char c : *flags.pool) {
      if (c == ',') {
        if (!current.empty()) names.push_back(current);
        current.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        current.push_back(c);
      }
    }
    if (!current.empty()) names.push_back(current);
    config.engine.enabled_pool = tot::OperationPool::from_names(names);
  }
  if (flags.model) config.engine.model = *flags.model;
  if (flags.parallelism) config.engine.parallelism = *flags.parallelism;
  if (flags.backend_type) config.backend.type = *flags.backend_type;
  if (flags.base_url) config.backend.base_url = *flags.base_url;
  if (flags.script_file) config.backend.script_file = *flags.script_file;
  if (flags.extraction) config.extraction = *flags.extraction;
  if (flags.split_use) config.split.use = *flags.split_use;
  if (flags.token_budget) config.token_budget = *flags.token_budget;
  config.validate();
  return config;
}

struct LoadedRun {
  tot::DatasetProfile profile;
  std::vector<tot::Sample> samples;
  tot::TemplateSet templates;
};

LoadedRun load_run(const tot::RunConfig& config) {
  LoadedRun run{
      tot::DatasetProfile::load((fs::path(config.dataset_dir) / "profile.json").string()),
      {},
      {}};
  run.templates = config.templates_dir.empty()
                      ? tot::builtin_templates(run.profile)
                      : tot::load_templates(config.templates_dir, run.profile);

  std::vector<tot::Sample> all = tot::load_samples(config.dataset_dir, run.profile);
  if (config.split.use == "all") {
    run.samples = std::move(all);
  } else {
    tot::SplitSpec spec{config.split.train, config.split.validation, config.split.test,
                        config.split.seed};
    tot::SplitResult result = tot::split(std::move(all), spec);
    if (config.split.use == "train") run.samples = std::move(result.train);
    else if (config.split.use == "validation") run.samples = std::move(result.validation);
    else run.samples = std::move(result.test);
  }
  return run;
}

struct SampleOutcome {
  std::string id;
  bool ok = false;
  std::string error;
  tot::Usage usage;
  double seconds = 0.0;
  std::string cost_milli_usd = "0";
};

void write_manifest(const tot::RunConfig& config, const std::vector<SampleOutcome>& outcomes) {
  ordered_json manifest;
  manifest["schema"] = "tot-manifest/1";
  manifest["config"] = ordered_json::parse(config.to_json_text());
  tot::Usage total;
  ordered_json samples = ordered_json::array();
  double total_seconds = 0.0;
  tot::Decimal total_cost;
  int failures = 0;
  for (const SampleOutcome& outcome : outcomes) {
    ordered_json s;
    s["id"] = outcome.id;
    s["status"] = outcome.ok ? "ok" : "failed";
    if (!outcome.error.empty()) s["error"] = outcome.error;
    s["input_tokens"] = outcome.usage.input_tokens;
    s["output_tokens"] = outcome.usage.output_tokens;
    s["seconds"] = outcome.seconds;
    s["cost_milli_usd"] = outcome.cost_milli_usd;
    samples.push_back(std::move(s));
    total += outcome.usage;
    total_seconds += outcome.seconds;
    if (auto d = tot::Decimal::parse(outcome.cost_milli_usd)) total_cost = total_cost + *d;
    if (!outcome.ok) ++failures;
  }
  manifest["samples"] = std::move(samples);
  manifest["totals"] = {{"input_tokens", total.input_tokens},
                        {"output_tokens", total.output_tokens},
                        {"seconds", total_seconds},
                        {"cost_milli_usd", total_cost.str()},
                        {"failures", failures}};
  tot::write_file_atomic((fs::path(config.out_dir) / "manifest.json").string(),
                         manifest.dump(2) + "\n");
}

int run_generation(const tot::RunConfig& config, bool baseline_mode) {
  LoadedRun run = load_run(config);
  tot::BackendHandle handle = tot::make_backend(config);

  std::vector<SampleOutcome> outcomes;
  bool backend_exhausted = false;
  for (const tot::Sample& sample : run.samples) {
    SampleOutcome outcome;
    outcome.id = sample.id;
    const fs::path sample_dir = fs::path(config.out_dir) / sample.id;
    try {
      if (baseline_mode) {
        // One whole-table prompt, one reply.
        tot::PromptBindings bindings;
        bindings.set("TABLE_DESCRIPTION", run.templates.table_description)
            .set("TABLE_FORMAT",
                 std::string(tot::table_format_name(config.engine.table_format)))
            .set("GENERATING_TOKENS", std::to_string(config.engine.budgets.generating))
            .set("TABLES",
                 tot::render_table_set(sample.tables, config.engine.table_format, true));
        const tot::RenderedPrompt prompt =
            tot::render_prompt(run.templates.baseline, bindings);
        const auto start = std::chrono::steady_clock::now();
        tot::ChatResponse response = handle.effective().complete(
            {prompt.system, prompt.user, config.engine.budgets.generating,
             config.engine.temperature, config.engine.model});
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        tot::RunTrace trace;
        trace.model = config.engine.model;
        trace.root.depth = 0;
        trace.root.history = {"root()"};
        trace.root.text = response.text;
        trace.root.usage = response.usage;
        trace.root.seconds = seconds;
        for (const tot::Table& t : sample.tables.tables) {
          trace.root.tables.push_back({t.name, t.n_rows(), t.n_cols()});
        }
        trace.total_usage = response.usage;
        trace.total_seconds = seconds;
        if (config.pricing.has(config.engine.model)) {
          trace.total_cost_milli_usd =
              tot::estimate_cost(response.usage, config.engine.model, config.pricing);
        }
        tot::write_file_atomic((sample_dir / "report.txt").string(), response.text + "\n");
        tot::write_file_atomic((sample_dir / "trace.json").string(),
                               tot::trace_to_json(trace));
        outcome.usage = trace.total_usage;
        outcome.seconds = trace.total_seconds;
        outcome.cost_milli_usd = trace.total_cost_milli_usd.str();
      } else {
        tot::RunResult result = tot::run(sample.tables, config.engine, handle.effective(),
                                         run.templates, config.pricing);
        tot::write_file_atomic((sample_dir / "report.txt").string(), result.report + "\n");
        tot::write_file_atomic((sample_dir / "trace.json").string(),
                               tot::trace_to_json(result.trace));
        outcome.usage = result.trace.total_usage;
        outcome.seconds = result.trace.total_seconds;
        outcome.cost_milli_usd = result.trace.total_cost_milli_usd.str();
      }
      outcome.ok = true;
      std::cerr << "[tot] " << sample.id << ": ok\n";
    } catch (const tot::BudgetExceeded& e) {
      outcome.error = e.what();
      backend_exhausted = true;
      std::cerr << "[tot] " << sample.id << ": " << e.what() << "\n";
    } catch (const tot::TransportError& e) {
      outcome.error = e.what();
      backend_exhausted = true;
      std::cerr << "[tot] " << sample.id << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
      outcome.error = e.what();
      std::cerr << "[tot] " << sample.id << ": failed: " << e.what() << "\n";
    }
    outcomes.push_back(std::move(outcome));
    if (backend_exhausted) break;
  }
  write_manifest(config, outcomes);

  if (backend_exhausted) return kExitBackendExhausted;
  const bool any_failed =
      std::any_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok; });
  return any_failed ? kExitPartialFailure : kExitOk;
}

int run_evaluation(const tot::RunConfig& config) {
  LoadedRun run = load_run(config);

  std::vector<std::string> missing;
  for (const tot::Sample& sample : run.samples) {
    if (!fs::exists(fs::path(config.out_dir) / sample.id / "report.txt")) {
      missing.push_back(sample.id);
    }
  }
  if (!missing.empty()) {
    std::cerr << "[tot] missing generated reports for:";
    for (const std::string& id : missing) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitPartialFailure;
  }

  tot::BackendHandle handle;
  tot::Extractor extractor;
  if (config.extraction == "llm") {
    handle = tot::make_backend(config);
    tot::LlmExtractOptions options;
    options.model = config.engine.model;
    extractor = [&handle, &run, options](const std::string& report,
                                         const std::vector<tot::RelationTriple>& candidates) {
      return tot::extract_relations_llm(report, candidates, handle.effective(),
                                        run.templates, options)
          .relations;
    };
  } else {
    extractor = tot::extract_relations_lexical;
  }

  std::vector<std::pair<std::string, tot::SampleMetrics>> rows;
  for (const tot::Sample& sample : run.samples) {
    const fs::path sample_dir = fs::path(config.out_dir) / sample.id;
    std::string report = tot::read_text_file((sample_dir / "report.txt").string());
    while (!report.empty() && (report.back() == '\n' || report.back() == '\r')) report.pop_back();

    tot::GenerationCost cost;
    const fs::path trace_path = sample_dir / "trace.json";
    if (fs::exists(trace_path)) {
      const tot::RunTrace trace =
          tot::trace_from_json(tot::read_text_file(trace_path.string()));
      cost.seconds = trace.total_seconds;
      cost.cost_milli_usd = trace.total_cost_milli_usd.to_double();
    }

    const auto candidates = tot::enumerate_relations(sample.tables);
    const auto gen_rel = extractor(report, candidates);
    const auto gold_rel = extractor(sample.gold_report, candidates);
    ordered_json gen_dump = ordered_json::array();
    for (const auto& triple : gen_rel) gen_dump.push_back(triple.serialized());
    ordered_json gold_dump = ordered_json::array();
    for (const auto& triple : gold_rel) gold_dump.push_back(triple.serialized());
    tot::write_file_atomic((sample_dir / "relations_gen.json").string(),
                           gen_dump.dump(2) + "\n");
    tot::write_file_atomic((sample_dir / "relations_gold.json").string(),
                           gold_dump.dump(2) + "\n");

    rows.emplace_back(sample.id,
                      tot::score_sample(report, sample.gold_report, sample.tables,
                                        extractor, cost));
  }

  const std::string csv = tot::metrics_to_csv(rows);
  const std::string text = tot::metrics_to_text(rows);
  tot::write_file_atomic((fs::path(config.out_dir) / "metrics.csv").string(), csv);
  tot::write_file_atomic((fs::path(config.out_dir) / "metrics.txt").string(), text);
  std::cout << text;
  return kExitOk;
}

int run_usage_stats(const std::string& trace_dir, const std::string& out_file) {
  std::vector<tot::RunTrace> traces;
  if (!fs::exists(trace_dir)) {
    std::cerr << "[tot] no such directory: " << trace_dir << "\n";
    return kExitConfigError;
  }
  for (const auto& entry : fs::recursive_directory_iterator(trace_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "trace.json") {
      traces.push_back(tot::trace_from_json(tot::read_text_file(entry.path().string())));
    }
  }
  if (traces.empty()) {
    std::cerr << "[tot] no trace.json files under " << trace_dir << "\n";
    return kExitPartialFailure;
  }
  std::vector<const tot::RunTrace*> views;
  views.reserve(traces.size());
  for (const tot::RunTrace& t : traces) views.push_back(&t);
  const tot::Table table = tot::operation_usage_by_depth(views);
  const std::string csv =
      tot::render_table_set(tot::TableSet{{table}}, tot::TableFormat::Csv, false);
  // Strip the "## operation_usage" header line for a plain CSV file.
  const std::size_t newline = csv.find('\n');
  const std::string body = newline == std::string::npos ? csv : csv.substr(newline + 1);
  if (out_file.empty()) {
    std::cout << body << "\n";
  } else {
    tot::write_file_atomic(out_file, body + "\n");
  }
  return kExitOk;
}

int run_init_templates(const std::string& out_dir) {
  for (tot::TemplateId id :
       {tot::TemplateId::Planning, tot::TemplateId::Write, tot::TemplateId::Generating,
        tot::TemplateId::Ie, tot::TemplateId::SinglePromptBaseline}) {
    const fs::path path =
        fs::path(out_dir) / (std::string(tot::template_id_name(id)) + ".txt");
    tot::write_file_atomic(path.string(), tot::builtin_template_file_text(id));
    std::cerr << "[tot] wrote " << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-structured table-to-text report generation and evaluation"};
  app.require_subcommand(1);

  CommonFlags generate_flags;
  CLI::App* generate = app.add_subcommand("generate", "Run the report-generation tree");
  add_common_flags(generate, generate_flags);

  CommonFlags evaluate_flags;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score generated reports (RG/CS/CO)");
  add_common_flags(evaluate, evaluate_flags);

  CommonFlags baseline_flags;
  std::string strategy = "single_prompt";
  CLI::App* baseline = app.add_subcommand("baseline", "Run a baseline generation strategy");
  baseline->add_option("--strategy", strategy, "Baseline strategy (single_prompt)");
  add_common_flags(baseline, baseline_flags);

  std::string trace_dir;
  std::string stats_out;
  CLI::App* usage_stats =
      app.add_subcommand("usage-stats", "Per-depth operation usage rates from traces");
  usage_stats->add_option("--traces", trace_dir, "Directory containing trace.json files")
      ->required();
  usage_stats->add_option("--out", stats_out, "Output CSV file (stdout when omitted)");

  std::string templates_out = "templates";
  CLI::App* init_templates =
      app.add_subcommand("init-templates", "Write the built-in prompt templates to disk");
  init_templates->add_option("--out", templates_out, "Template directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return run_generation(resolve_config(generate_flags), false);
    if (evaluate->parsed()) return run_evaluation(resolve_config(evaluate_flags));
    if (baseline->parsed()) {
      if (strategy != "single_prompt") {
        std::cerr << "[tot] unknown baseline strategy: " << strategy << "\n";
        return kExitConfigError;
      }
      return run_generation(resolve_config(baseline_flags), true);
    }
    if (usage_stats->parsed()) return run_usage_stats(trace_dir, stats_out);
    if (init_templates->parsed()) return run_init_templates(templates_out);
  } catch (const tot::ConfigError& e) {
    std::cerr << "[tot] config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const tot::BudgetExceeded& e) {
    std::cerr << "[tot] " << e.what() << "\n";
    return kExitBackendExhausted;
  } catch (const std::exception& e) {
    std::cerr << "[tot] error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
