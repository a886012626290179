#include "tot/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

namespace tot {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ModelPricing pricing_from_json(const ordered_json& entry) {
  ModelPricing pricing;
  const auto parse_price = [&](const char* per_mtok, const char* per_token) {
    if (entry.contains(per_mtok)) {
      const auto d = Decimal::parse(entry.at(per_mtok).get<std::string>());
      if (!d) throw ConfigError(std::string("bad decimal in pricing field ") + per_mtok);
      return d->shifted_pow10(-6);
    }
    if (entry.contains(per_token)) {
      const auto d = Decimal::parse(entry.at(per_token).get<std::string>());
      if (!d) throw ConfigError(std::string("bad decimal in pricing field ") + per_token);
      return *d;
    }
    throw ConfigError(std::string("pricing entry needs ") + per_mtok + " or " + per_token);
  };
  pricing.input_price_per_token = parse_price("input_per_mtok", "input_per_token");
  pricing.output_price_per_token = parse_price("output_per_mtok", "output_per_token");
  if (pricing.input_price_per_token.negative() || pricing.output_price_per_token.negative()) {
    throw ConfigError("pricing must be non-negative");
  }
  return pricing;
}

PricingTable pricing_table_from_json(const ordered_json& doc) {
  PricingTable table;
  for (const auto& [model, entry] : doc.items()) {
    table.models[model] = pricing_from_json(entry);
  }
  return table;
}

}  // namespace

PricingTable pricing_from_json_text(const std::string& json_text) {
  return pricing_table_from_json(ordered_json::parse(json_text));
}

RunConfig RunConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path));
}

RunConfig RunConfig::from_json_text(const std::string& json_text) {
  const auto doc = ordered_json::parse(json_text);
  RunConfig config;
  config.dataset_dir = doc.value("dataset_dir", "");
  config.templates_dir = doc.value("templates_dir", "");
  config.out_dir = doc.value("out_dir", "out");
  config.extraction = doc.value("extraction", "lexical");
  if (doc.contains("token_budget") && !doc.at("token_budget").is_null()) {
    config.token_budget = doc.at("token_budget").get<std::int64_t>();
  }

  if (doc.contains("engine")) {
    const auto& e = doc.at("engine");
    config.engine.max_depth = e.value("max_depth", 5);
    config.engine.max_degree = e.value("max_degree", 5);
    if (e.contains("table_format")) {
      const std::string name = e.at("table_format").get<std::string>();
      const auto format = parse_table_format(name);
      if (!format) throw ConfigError("unknown table format: " + name);
      config.engine.table_format = *format;
    }
    if (e.contains("merge_policy")) {
      const std::string name = e.at("merge_policy").get<std::string>();
      const auto policy = parse_merge_policy(name);
      if (!policy) throw ConfigError("unknown merge policy: " + name);
      config.engine.merge_policy = *policy;
    }
    if (e.contains("enabled_pool")) {
      config.engine.enabled_pool =
          OperationPool::from_names(e.at("enabled_pool").get<std::vector<std::string>>());
    }
    config.engine.model = e.value("model", config.engine.model);
    config.engine.budgets.planning = e.value("planning_tokens", kDefaultPlanningTokens);
    config.engine.budgets.write = e.value("write_tokens", kDefaultWriteTokens);
    config.engine.budgets.generating = e.value("generating_tokens", kDefaultGeneratingTokens);
    config.engine.temperature = e.value("temperature", 0.0);
    config.engine.parallelism = e.value("parallelism", 1);
  }

  if (doc.contains("backend")) {
    const auto& b = doc.at("backend");
    config.backend.type = b.value("type", "http");
    config.backend.base_url = b.value("base_url", "");
    config.backend.path = b.value("path", "/v1/chat/completions");
    config.backend.script_file = b.value("script_file", "");
    config.backend.max_retries = b.value("max_retries", 3);
    config.backend.retry_backoff_ms = b.value("retry_backoff_ms", 250);
    config.backend.timeout_seconds = b.value("timeout_seconds", 120);
  }

  if (doc.contains("split")) {
    const auto& s = doc.at("split");
    if (s.contains("ratios")) {
      const auto ratios = s.at("ratios").get<std::vector<int>>();
      if (ratios.size() != 3) throw ConfigError("split.ratios must have 3 entries");
      config.split.train = ratios[0];
      config.split.validation = ratios[1];
      config.split.test = ratios[2];
    }
    config.split.seed = s.value("seed", std::uint64_t{0});
    config.split.use = s.value("use", "all");
  }

  if (doc.contains("pricing")) {
    config.pricing = pricing_table_from_json(doc.at("pricing"));
  }
  return config;
}

std::string RunConfig::to_json_text() const {
  ordered_json doc;
  doc["dataset_dir"] = dataset_dir;
  doc["templates_dir"] = templates_dir;
  ordered_json e;
  e["max_depth"] = engine.max_depth;
  e["max_degree"] = engine.max_degree;
  e["table_format"] = std::string(table_format_name(engine.table_format));
  e["merge_policy"] = std::string(merge_policy_name(engine.merge_policy));
  std::vector<std::string> pool_names;
  for (OperationKind k : engine.enabled_pool.kinds()) {
    pool_names.emplace_back(operation_name(k));
  }
  e["enabled_pool"] = pool_names;
  e["model"] = engine.model;
  e["planning_tokens"] = engine.budgets.planning;
  e["write_tokens"] = engine.budgets.write;
  e["generating_tokens"] = engine.budgets.generating;
  e["temperature"] = engine.temperature;
  e["parallelism"] = engine.parallelism;
  doc["engine"] = std::move(e);
  ordered_json b;
  b["type"] = backend.type;
  b["base_url"] = backend.base_url;
  b["path"] = backend.path;
  b["script_file"] = backend.script_file;
  b["max_retries"] = backend.max_retries;
  b["retry_backoff_ms"] = backend.retry_backoff_ms;
  b["timeout_seconds"] = backend.timeout_seconds;
  doc["backend"] = std::move(b);
  ordered_json s;
  s["ratios"] = std::vector<int>{split.train, split.validation, split.test};
  s["seed"] = split.seed;
  s["use"] = split.use;
  doc["split"] = std::move(s);
  ordered_json pricing_json = ordered_json::object();
  for (const auto& [model, p] : pricing.models) {
    pricing_json[model] = {{"input_per_token", p.input_price_per_token.str()},
                           {"output_per_token", p.output_price_per_token.str()}};
  }
  doc["pricing"] = std::move(pricing_json);
  doc["extraction"] = extraction;
  doc["out_dir"] = out_dir;
  if (token_budget) {
    doc["token_budget"] = *token_budget;
  } else {
    doc["token_budget"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

void RunConfig::validate() const {
  engine.validate();
  if (dataset_dir.empty()) throw ConfigError("dataset_dir is required");
  if (backend.type != "http" && backend.type != "scripted") {
    throw ConfigError("backend.type must be 'http' or 'scripted'");
  }
  if (backend.type == "http" && backend.base_url.empty()) {
    throw ConfigError("http backend requires base_url");
  }
  if (backend.type == "scripted" && backend.script_file.empty()) {
    throw ConfigError("scripted backend requires script_file");
  }
  if (extraction != "lexical" && extraction != "llm") {
    throw ConfigError("extraction must be 'lexical' or 'llm'");
  }
  if (split.use != "train" && split.use != "validation" && split.use != "test" &&
      split.use != "all") {
    throw ConfigError("split.use must be train, validation, test or all");
  }
  if (extraction == "llm" && backend.type == "scripted") {
    ScriptedBackend probe(ScriptedBackend::rules_from_json_file(backend.script_file));
    if (!probe.has_stage("ie")) {
      throw ConfigError(
          "llm extraction with a scripted backend requires a script rule tagged "
          "\"stage\": \"ie\"");
    }
  }
}

BackendHandle make_backend(const RunConfig& config) {
  BackendHandle handle;
  if (config.backend.type == "scripted") {
    auto scripted = std::make_unique<ScriptedBackend>(
        ScriptedBackend::rules_from_json_file(config.backend.script_file));
    handle.scripted = scripted.get();
    handle.backend = std::move(scripted);
  } else {
    HttpBackendConfig http;
    http.base_url = config.backend.base_url;
    http.path = config.backend.path;
    http.max_retries = config.backend.max_retries;
    http.retry_backoff_ms = config.backend.retry_backoff_ms;
    http.timeout_seconds = config.backend.timeout_seconds;
    if (const char* key = std::getenv("TOT_API_KEY")) http.api_key = key;
    handle.backend = std::make_unique<HttpBackend>(std::move(http));
  }
  if (config.token_budget) {
    handle.budgeted = std::make_unique<BudgetedBackend>(*handle.backend, *config.token_budget);
  }
  return handle;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.parent_path() /
                        (target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + temp.string());
    out << content;
  }
  fs::rename(temp, target);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace tot
