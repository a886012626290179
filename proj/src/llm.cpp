#include "tot/llm.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace tot {

namespace {

void validate_request(const ChatRequest& request) {
  if (request.system.empty()) throw std::invalid_argument("chat request: empty system prompt");
  if (request.user.empty()) throw std::invalid_argument("chat request: empty user prompt");
  if (request.max_tokens <= 0) throw std::invalid_argument("chat request: max_tokens must be positive");
  if (request.temperature < 0.0) throw std::invalid_argument("chat request: negative temperature");
}

bool condition_holds(const ScriptCondition& cond, const ChatRequest& request) {
  const std::string& haystack =
      cond.field == ScriptCondition::Field::System ? request.system : request.user;
  return haystack.find(cond.contains) != std::string::npos;
}

}  // namespace

UnknownModel::UnknownModel(const std::string& model)
    : LlmError("no pricing entry for model: " + model) {}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules)
    : rules_(std::move(rules)) {}

std::vector<ScriptRule> ScriptedBackend::rules_from_json_text(const std::string& json_text) {
  const auto doc = nlohmann::json::parse(json_text);
  std::vector<ScriptRule> rules;
  for (const auto& rule_json : doc.at("rules")) {
    ScriptRule rule;
    if (rule_json.contains("match")) {
      const auto& matches = rule_json.at("match");
      const auto parse_condition = [](const nlohmann::json& m) {
        ScriptCondition cond;
        const std::string field = m.value("field", "user");
        if (field == "system") {
          cond.field = ScriptCondition::Field::System;
        } else if (field == "user") {
          cond.field = ScriptCondition::Field::User;
        } else {
          throw LlmError("script condition field must be 'system' or 'user', got: " + field);
        }
        cond.contains = m.at("contains").get<std::string>();
        return cond;
      };
      if (matches.is_array()) {
        for (const auto& m : matches) rule.conditions.push_back(parse_condition(m));
      } else {
        rule.conditions.push_back(parse_condition(matches));
      }
    }
    rule.response = rule_json.at("response").get<std::string>();
    rule.usage.input_tokens = rule_json.value("input_tokens", std::int64_t{0});
    rule.usage.output_tokens = rule_json.value("output_tokens", std::int64_t{0});
    rule.stage = rule_json.value("stage", "");
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<ScriptRule> ScriptedBackend::rules_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LlmError("cannot open script file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return rules_from_json_text(buffer.str());
}

void ScriptedBackend::add_rule(ScriptRule rule) {
  rules_.push_back(std::move(rule));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  validate_request(request);
  std::lock_guard<std::mutex> lock(*mutex_);
  recorded_.push_back(request);
  for (const ScriptRule& rule : rules_) {
    bool all = true;
    for (const ScriptCondition& cond : rule.conditions) {
      if (!condition_holds(cond, request)) {
        all = false;
        break;
      }
    }
    if (all) return ChatResponse{rule.response, rule.usage};
  }
  const std::string preview = request.user.substr(0, 120);
  throw NoScriptMatch("no script rule matches request (user prompt starts: \"" +
                      preview + "\")");
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
  std::lock_guard<std::mutex> lock(*mutex_);
  return recorded_;
}

std::size_t ScriptedBackend::request_count() const {
  std::lock_guard<std::mutex> lock(*mutex_);
  return recorded_.size();
}

bool ScriptedBackend::has_stage(const std::string& stage) const {
  for (const ScriptRule& rule : rules_) {
    if (rule.stage == stage) return true;
  }
  return false;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw LlmError("http backend: base_url is required");
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  validate_request(request);

  nlohmann::json body = {
      {"model", request.model},
      {"messages",
       {{{"role", "system"}, {"content", request.system}},
        {{"role", "user"}, {"content", request.user}}}},
      {"max_tokens", request.max_tokens},
      {"temperature", request.temperature},
  };
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto backoff =
          std::chrono::milliseconds(config_.retry_backoff_ms) * (1 << (attempt - 1));
      std::this_thread::sleep_for(backoff);
    }
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto result = client.Post(config_.path, headers, payload, "application/json");
    if (!result) {
      last_error = "transport failure: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_error = "server error: HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200) {
      throw TransportError("chat completion failed: HTTP " +
                           std::to_string(result->status) + ": " + result->body);
    }
    try {
      const auto doc = nlohmann::json::parse(result->body);
      ChatResponse response;
      response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
      if (doc.contains("usage")) {
        response.usage.input_tokens = doc["usage"].value("prompt_tokens", std::int64_t{0});
        response.usage.output_tokens = doc["usage"].value("completion_tokens", std::int64_t{0});
      }
      return response;
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("malformed chat completion response: ") + e.what());
    }
  }
  throw TransportError("chat completion failed after " +
                       std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

BudgetedBackend::BudgetedBackend(ChatBackend& inner, std::int64_t max_total_tokens)
    : inner_(inner), budget_(max_total_tokens) {}

ChatResponse BudgetedBackend::complete(const ChatRequest& request) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (used_ >= budget_) {
      throw BudgetExceeded("token budget of " + std::to_string(budget_) +
                           " exhausted (used " + std::to_string(used_) + ")");
    }
  }
  ChatResponse response = inner_.complete(request);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    used_ += response.usage.input_tokens + response.usage.output_tokens;
  }
  return response;
}

std::int64_t BudgetedBackend::used_tokens() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return used_;
}

Decimal estimate_cost(const Usage& usage, const std::string& model,
                      const PricingTable& pricing) {
  const auto it = pricing.models.find(model);
  if (it == pricing.models.end()) throw UnknownModel(model);
  const Decimal cost_usd =
      Decimal::from_int(usage.input_tokens) * it->second.input_price_per_token +
      Decimal::from_int(usage.output_tokens) * it->second.output_price_per_token;
  return cost_usd.shifted_pow10(3);  // milli-dollars
}

}  // namespace tot
