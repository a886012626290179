#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tot/datasets.hpp"

namespace tot {

struct PromptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundPlaceholder : PromptError {
  explicit UnboundPlaceholder(const std::string& name);
};
struct UnknownPlaceholder : PromptError {
  explicit UnknownPlaceholder(const std::string& name);
};

enum class TemplateId { Planning, Write, Generating, Ie, SinglePromptBaseline };

std::string_view template_id_name(TemplateId id);
std::optional<TemplateId> template_id_from_name(std::string_view name);

/// System/user prompt pair with `{NAME}` placeholders. Every placeholder in
/// the body must belong to the declared set for the template's id; that is
/// checked when templates are built or loaded.
struct PromptTemplate {
  TemplateId id = TemplateId::Planning;
  std::string system;
  std::string user;

  /// Placeholder names found in the body, in first-appearance order.
  std::vector<std::string> placeholders() const;
};

/// Placeholder names recognized for a template id.
const std::vector<std::string>& declared_placeholders(TemplateId id);

class PromptBindings {
 public:
  PromptBindings& set(std::string name, std::string value);
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct RenderedPrompt {
  std::string system;
  std::string user;
};

/// Replaces every placeholder with its binding. Bindings must cover the
/// template's placeholders exactly: a missing one raises UnboundPlaceholder,
/// an extraneous one raises UnknownPlaceholder.
RenderedPrompt render_prompt(const PromptTemplate& tpl, const PromptBindings& bindings);

/// The five templates plus the profile-derived description texts that the
/// engine binds at render time.
struct TemplateSet {
  PromptTemplate planning;
  PromptTemplate write;
  PromptTemplate generating;
  PromptTemplate ie;
  PromptTemplate baseline;
  std::string table_description;
  std::string operation_description;

  const PromptTemplate& get(TemplateId id) const;
};

/// Built-in template texts with the profile's sport (and optional IE example)
/// substituted into the role sentences.
TemplateSet builtin_templates(const DatasetProfile& profile);

/// Loads templates/<id>.txt files (`---SYSTEM---` / `---USER---` separator
/// lines) and applies the same profile substitution. Missing files fall back
/// to the built-in texts.
TemplateSet load_templates(const std::string& dir, const DatasetProfile& profile);

/// Raw built-in template text for one id, before profile substitution;
/// exactly what init-templates writes to disk.
std::string builtin_template_file_text(TemplateId id);

/// Default per-stage token budgets, bound into the corresponding prompt
/// placeholders and used as the request max_tokens.
inline constexpr int kDefaultPlanningTokens = 256;
inline constexpr int kDefaultWriteTokens = 512;
inline constexpr int kDefaultGeneratingTokens = 1024;

}  // namespace tot
