#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tot/decimal.hpp"

namespace tot {

struct LlmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Production transport failed after exhausting the retry budget.
struct TransportError : LlmError {
  using LlmError::LlmError;
};
/// The scripted backend had no rule matching the request.
struct NoScriptMatch : LlmError {
  using LlmError::LlmError;
};
/// A configured corpus-level token budget would be surpassed.
struct BudgetExceeded : LlmError {
  using LlmError::LlmError;
};
struct UnknownModel : LlmError {
  explicit UnknownModel(const std::string& model);
};

struct ChatRequest {
  std::string system;
  std::string user;
  int max_tokens = 1024;
  double temperature = 0.0;
  std::string model;
};

struct Usage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  Usage& operator+=(const Usage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  friend Usage operator+(Usage a, const Usage& b) { return a += b; }
  friend bool operator==(const Usage&, const Usage&) = default;
};

struct ChatResponse {
  std::string text;
  Usage usage;
};

/// Chat-completion contract. Implementations must tolerate concurrent
/// complete() calls.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct ScriptCondition {
  enum class Field { System, User };
  Field field = Field::User;
  std::string contains;
};

struct ScriptRule {
  std::vector<ScriptCondition> conditions;  // all must hold
  std::string response;
  Usage usage;
  std::string stage;  // optional label: planning | write | generating | ie | baseline
};

/// Deterministic backend for tests and replayed runs: the first rule whose
/// conditions all hold supplies the reply. Requests are recorded in arrival
/// order for later assertion.
class ScriptedBackend : public ChatBackend {
 public:
  ScriptedBackend() = default;
  explicit ScriptedBackend(std::vector<ScriptRule> rules);

  static std::vector<ScriptRule> rules_from_json_text(const std::string& json_text);
  static std::vector<ScriptRule> rules_from_json_file(const std::string& path);

  void add_rule(ScriptRule rule);
  ChatResponse complete(const ChatRequest& request) override;

  std::vector<ChatRequest> requests() const;
  std::size_t request_count() const;
  bool has_stage(const std::string& stage) const;

 private:
  std::vector<ScriptRule> rules_;
  // Owned so the backend stays movable; complete() serializes match/record.
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  std::vector<ChatRequest> recorded_;
};

struct HttpBackendConfig {
  std::string base_url;                       // e.g. http://localhost:8000
  std::string path = "/v1/chat/completions";  // OpenAI-compatible endpoint
  std::string api_key;                        // usually from TOT_API_KEY
  int max_retries = 3;                        // transient transport failures
  int retry_backoff_ms = 250;                 // doubled per attempt
  int timeout_seconds = 120;
};

/// Production client for any server speaking the common chat-completions
/// JSON schema. Retries transient transport failures with exponential
/// backoff, then throws TransportError.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ChatResponse complete(const ChatRequest& request) override;

 private:
  HttpBackendConfig config_;
};

/// Decorator enforcing a corpus-level token budget: once the accumulated
/// input+output tokens reach the budget, further calls throw BudgetExceeded
/// before touching the wrapped backend.
class BudgetedBackend : public ChatBackend {
 public:
  BudgetedBackend(ChatBackend& inner, std::int64_t max_total_tokens);
  ChatResponse complete(const ChatRequest& request) override;
  std::int64_t used_tokens() const;

 private:
  ChatBackend& inner_;
  std::int64_t budget_;
  mutable std::mutex mutex_;
  std::int64_t used_ = 0;
};

struct ModelPricing {
  Decimal input_price_per_token;   // USD
  Decimal output_price_per_token;  // USD
};

struct PricingTable {
  std::map<std::string, ModelPricing> models;

  bool has(const std::string& model) const { return models.count(model) > 0; }
};

/// usage * price, reported in milli-dollars ($0.001 USD). Exact decimal
/// arithmetic, so cost is strictly linear in usage.
Decimal estimate_cost(const Usage& usage, const std::string& model,
                      const PricingTable& pricing);

}  // namespace tot
