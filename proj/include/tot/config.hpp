#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "tot/datasets.hpp"
#include "tot/engine.hpp"
#include "tot/llm.hpp"

namespace tot {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BackendConfig {
  std::string type = "http";  // http | scripted
  std::string base_url;
  std::string path = "/v1/chat/completions";
  std::string script_file;
  int max_retries = 3;
  int retry_backoff_ms = 250;
  int timeout_seconds = 120;
};

struct SplitConfig {
  int train = 40;
  int validation = 9;
  int test = 9;
  std::uint64_t seed = 0;
  std::string use = "all";  // train | validation | test | all
};

/// Full description of one run; the manifest echoes it back so a run can be
/// reproduced from its outputs alone.
struct RunConfig {
  std::string dataset_dir;
  std::string templates_dir;  // optional; built-in texts when empty
  EngineConfig engine;
  BackendConfig backend;
  SplitConfig split;
  PricingTable pricing;
  std::string extraction = "lexical";  // lexical | llm
  std::string out_dir = "out";
  std::optional<std::int64_t> token_budget;

  static RunConfig load(const std::string& path);
  static RunConfig from_json_text(const std::string& json_text);
  std::string to_json_text() const;
  void validate() const;
};

/// Instantiates the configured backend (http or scripted). The scripted
/// backend pointer is also exposed for request inspection.
struct BackendHandle {
  std::unique_ptr<ChatBackend> backend;
  ScriptedBackend* scripted = nullptr;  // non-null when type == scripted
  std::unique_ptr<BudgetedBackend> budgeted;

  ChatBackend& effective() { return budgeted ? *budgeted : *backend; }
};

BackendHandle make_backend(const RunConfig& config);

/// Parses pricing config: {"model": {"input_per_mtok": "0.15", ...}} with
/// exact-decimal price strings per million tokens.
PricingTable pricing_from_json_text(const std::string& json_text);

void write_file_atomic(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tot
