#include "tot/prompts.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tot/ops.hpp"

namespace tot {

namespace detail {
extern const char* const kPlanningSystem;
extern const char* const kPlanningUser;
extern const char* const kWriteSystem;
extern const char* const kWriteUser;
extern const char* const kGeneratingSystem;
extern const char* const kGeneratingUser;
extern const char* const kIeSystem;
extern const char* const kIeUser;
extern const char* const kBaselineSystem;
extern const char* const kBaselineUser;
}  // namespace detail

namespace {

namespace fs = std::filesystem;

bool is_placeholder_char(char c) {
  return (c >= 'A' && c <= 'Z') || c == '_';
}

// Scans `text` for {NAME} placeholders (NAME = uppercase letters and
// underscores). Anything else in braces is literal text.
void collect_placeholders(std::string_view text, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && is_placeholder_char(text[j])) ++j;
    if (j > i + 1 && j < text.size() && text[j] == '}') {
      std::string name(text.substr(i + 1, j - i - 1));
      if (std::find(out.begin(), out.end(), name) == out.end()) {
        out.push_back(std::move(name));
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
}

std::string substitute(std::string_view text,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && is_placeholder_char(text[j])) ++j;
    if (j > i + 1 && j < text.size() && text[j] == '}') {
      const std::string name(text.substr(i + 1, j - i - 1));
      const auto it = values.find(name);
      if (it != values.end()) {
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string replace_macro(std::string text, std::string_view macro,
                          const std::string& value) {
  const std::string token = "{" + std::string(macro) + "}";
  std::size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

void validate_template(const PromptTemplate& tpl) {
  const auto& declared = declared_placeholders(tpl.id);
  for (const std::string& name : tpl.placeholders()) {
    if (std::find(declared.begin(), declared.end(), name) == declared.end()) {
      throw UnknownPlaceholder(name);
    }
  }
}

PromptTemplate make_template(TemplateId id, std::string_view system,
                             std::string_view user, const DatasetProfile& profile) {
  PromptTemplate tpl;
  tpl.id = id;
  tpl.system = replace_macro(std::string(system), "SPORT", profile.sport);
  tpl.system = replace_macro(std::move(tpl.system), "EXAMPLE", profile.ie_example);
  tpl.user = replace_macro(std::string(user), "SPORT", profile.sport);
  tpl.user = replace_macro(std::move(tpl.user), "EXAMPLE", profile.ie_example);
  validate_template(tpl);
  return tpl;
}

struct RawTemplate {
  std::string system;
  std::string user;
};

RawTemplate builtin_raw(TemplateId id) {
  switch (id) {
    case TemplateId::Planning: return {detail::kPlanningSystem, detail::kPlanningUser};
    case TemplateId::Write: return {detail::kWriteSystem, detail::kWriteUser};
    case TemplateId::Generating: return {detail::kGeneratingSystem, detail::kGeneratingUser};
    case TemplateId::Ie: return {detail::kIeSystem, detail::kIeUser};
    case TemplateId::SinglePromptBaseline:
      return {detail::kBaselineSystem, detail::kBaselineUser};
  }
  throw PromptError("unreachable template id");
}

RawTemplate parse_template_file(const std::string& text, const std::string& path) {
  const std::string system_marker = "---SYSTEM---\n";
  const std::string user_marker = "---USER---\n";
  const std::size_t system_pos = text.find(system_marker);
  const std::size_t user_pos = text.find(user_marker);
  if (system_pos == std::string::npos || user_pos == std::string::npos ||
      user_pos < system_pos) {
    throw PromptError("template file needs ---SYSTEM--- and ---USER--- separator lines: " + path);
  }
  RawTemplate raw;
  raw.system = text.substr(system_pos + system_marker.size(),
                           user_pos - system_pos - system_marker.size());
  raw.user = text.substr(user_pos + user_marker.size());
  return raw;
}

}  // namespace

UnboundPlaceholder::UnboundPlaceholder(const std::string& name)
    : PromptError("placeholder {" + name + "} has no binding") {}

UnknownPlaceholder::UnknownPlaceholder(const std::string& name)
    : PromptError("placeholder {" + name + "} does not belong to this template") {}

std::string_view template_id_name(TemplateId id) {
  switch (id) {
    case TemplateId::Planning: return "planning";
    case TemplateId::Write: return "write";
    case TemplateId::Generating: return "generating";
    case TemplateId::Ie: return "ie";
    case TemplateId::SinglePromptBaseline: return "single_prompt_baseline";
  }
  return "planning";
}

std::optional<TemplateId> template_id_from_name(std::string_view name) {
  if (name == "planning") return TemplateId::Planning;
  if (name == "write") return TemplateId::Write;
  if (name == "generating") return TemplateId::Generating;
  if (name == "ie") return TemplateId::Ie;
  if (name == "single_prompt_baseline") return TemplateId::SinglePromptBaseline;
  return std::nullopt;
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> out;
  collect_placeholders(system, out);
  collect_placeholders(user, out);
  return out;
}

const std::vector<std::string>& declared_placeholders(TemplateId id) {
  static const std::vector<std::string> planning = {
      "TABLE_DESCRIPTION", "OPERATION_DESCRIPTION", "TABLE_FORMAT", "MAX_DEPTH",
      "MAX_DEGREE",        "PLANNING_TOKENS",       "TABLES",       "OPERATION_HISTORY",
      "OPERATION_POOL"};
  static const std::vector<std::string> write = {"TABLE_DESCRIPTION", "TABLE_FORMAT",
                                                 "WRITE_TOKENS", "TABLES"};
  static const std::vector<std::string> generating = {"GENERATING_TOKENS", "REPORTS"};
  static const std::vector<std::string> ie = {"TABLE_DESCRIPTION", "REPORT",
                                              "TABLE_RELATION"};
  static const std::vector<std::string> baseline = {"TABLE_DESCRIPTION", "TABLE_FORMAT",
                                                    "GENERATING_TOKENS", "TABLES"};
  switch (id) {
    case TemplateId::Planning: return planning;
    case TemplateId::Write: return write;
    case TemplateId::Generating: return generating;
    case TemplateId::Ie: return ie;
    case TemplateId::SinglePromptBaseline: return baseline;
  }
  return planning;
}

PromptBindings& PromptBindings::set(std::string name, std::string value) {
  values_[std::move(name)] = std::move(value);
  return *this;
}

RenderedPrompt render_prompt(const PromptTemplate& tpl, const PromptBindings& bindings) {
  const std::vector<std::string> found = tpl.placeholders();
  for (const auto& [name, value] : bindings.values()) {
    (void)value;
    if (std::find(found.begin(), found.end(), name) == found.end()) {
      throw UnknownPlaceholder(name);
    }
  }
  for (const std::string& name : found) {
    if (!bindings.values().count(name)) throw UnboundPlaceholder(name);
  }
  return {substitute(tpl.system, bindings.values()),
          substitute(tpl.user, bindings.values())};
}

const PromptTemplate& TemplateSet::get(TemplateId id) const {
  switch (id) {
    case TemplateId::Planning: return planning;
    case TemplateId::Write: return write;
    case TemplateId::Generating: return generating;
    case TemplateId::Ie: return ie;
    case TemplateId::SinglePromptBaseline: return baseline;
  }
  return planning;
}

TemplateSet builtin_templates(const DatasetProfile& profile) {
  TemplateSet set;
  for (TemplateId id : {TemplateId::Planning, TemplateId::Write, TemplateId::Generating,
                        TemplateId::Ie, TemplateId::SinglePromptBaseline}) {
    const RawTemplate raw = builtin_raw(id);
    PromptTemplate tpl = make_template(id, raw.system, raw.user, profile);
    switch (id) {
      case TemplateId::Planning: set.planning = std::move(tpl); break;
      case TemplateId::Write: set.write = std::move(tpl); break;
      case TemplateId::Generating: set.generating = std::move(tpl); break;
      case TemplateId::Ie: set.ie = std::move(tpl); break;
      case TemplateId::SinglePromptBaseline: set.baseline = std::move(tpl); break;
    }
  }
  set.table_description = profile.table_description_text();
  set.operation_description = operation_descriptions();
  return set;
}

TemplateSet load_templates(const std::string& dir, const DatasetProfile& profile) {
  TemplateSet set = builtin_templates(profile);
  for (TemplateId id : {TemplateId::Planning, TemplateId::Write, TemplateId::Generating,
                        TemplateId::Ie, TemplateId::SinglePromptBaseline}) {
    const fs::path path = fs::path(dir) / (std::string(template_id_name(id)) + ".txt");
    if (!fs::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PromptError("cannot open template file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const RawTemplate raw = parse_template_file(buffer.str(), path.string());
    PromptTemplate tpl = make_template(id, raw.system, raw.user, profile);
    switch (id) {
      case TemplateId::Planning: set.planning = std::move(tpl); break;
      case TemplateId::Write: set.write = std::move(tpl); break;
      case TemplateId::Generating: set.generating = std::move(tpl); break;
      case TemplateId::Ie: set.ie = std::move(tpl); break;
      case TemplateId::SinglePromptBaseline: set.baseline = std::move(tpl); break;
    }
  }
  return set;
}

std::string builtin_template_file_text(TemplateId id) {
  const RawTemplate raw = builtin_raw(id);
  return "---SYSTEM---\n" + raw.system + "---USER---\n" + raw.user;
}

}  // namespace tot
