#include "tot/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

namespace tot {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string trim_copy(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string canonical_value(const CellValue& cell) {
  if (cell.is_number()) return cell.number_value().str();
  return trim_copy(cell.text_value());
}

void check_component(const std::string& component, const char* what) {
  if (component.find('|') != std::string::npos) {
    throw PipeInComponent(std::string("relation ") + what + " contains '|': " + component);
  }
}

// First whole-token occurrence of `value` in `report`, or npos.
std::size_t first_token_occurrence(const std::string& report, const std::string& value) {
  if (value.empty()) return std::string::npos;
  std::size_t pos = 0;
  while ((pos = report.find(value, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(report[pos - 1]);
    const std::size_t end = pos + value.size();
    const bool right_ok = end >= report.size() || !is_word_char(report[end]);
    if (left_ok && right_ok) return pos;
    ++pos;
  }
  return std::string::npos;
}

double percent(double numerator, double denominator) {
  return denominator == 0.0 ? 0.0 : 100.0 * numerator / denominator;
}

std::string format2(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

std::string RelationTriple::serialized() const {
  return "(" + table + "|" + column + "|" + value + ")";
}

std::vector<RelationTriple> enumerate_relations(const TableSet& ts) {
  std::vector<RelationTriple> out;
  std::set<RelationTriple> seen;
  for (const Table& t : ts.tables) {
    check_component(t.name, "table");
    for (const std::string& col : t.columns) check_component(col, "column");
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c].is_missing()) continue;
        RelationTriple triple{t.name, t.columns[c], canonical_value(row[c])};
        check_component(triple.value, "value");
        if (seen.insert(triple).second) out.push_back(std::move(triple));
      }
    }
  }
  return out;
}

std::vector<RelationTriple> extract_relations_lexical(
    const std::string& report, const std::vector<RelationTriple>& candidates) {
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (position, candidate index)
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t pos = first_token_occurrence(report, candidates[i].value);
    if (pos != std::string::npos) hits.emplace_back(pos, i);
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RelationTriple> out;
  out.reserve(hits.size());
  for (const auto& [pos, idx] : hits) {
    (void)pos;
    out.push_back(candidates[idx]);
  }
  return out;
}

std::vector<RelationTriple> parse_relation_list(const std::string& text) {
  std::vector<RelationTriple> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '(') {
      ++i;
      continue;
    }
    const std::size_t close = text.find(')', i);
    if (close == std::string::npos) break;
    const std::string body = text.substr(i + 1, close - i - 1);
    const std::size_t p1 = body.find('|');
    const std::size_t p2 = p1 == std::string::npos ? std::string::npos : body.find('|', p1 + 1);
    if (p2 != std::string::npos && body.find('|', p2 + 1) == std::string::npos) {
      RelationTriple triple;
      triple.table = trim_copy(body.substr(0, p1));
      triple.column = trim_copy(body.substr(p1 + 1, p2 - p1 - 1));
      triple.value = trim_copy(body.substr(p2 + 1));
      out.push_back(std::move(triple));
    }
    i = close + 1;
  }
  return out;
}

LlmExtraction extract_relations_llm(const std::string& report,
                                    const std::vector<RelationTriple>& candidates,
                                    ChatBackend& backend, const TemplateSet& templates,
                                    const LlmExtractOptions& options) {
  if (candidates.empty()) throw EvalError("extract_relations_llm: no candidate relations");

  std::string table_relation = "[";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0) table_relation += ", ";
    table_relation += candidates[i].serialized();
  }
  table_relation += "]";

  PromptBindings bindings;
  bindings.set("TABLE_DESCRIPTION", templates.table_description)
      .set("REPORT", report)
      .set("TABLE_RELATION", table_relation);
  const RenderedPrompt prompt = render_prompt(templates.ie, bindings);
  ChatRequest request{prompt.system, prompt.user, options.max_tokens,
                      options.temperature, options.model};
  const ChatResponse response = backend.complete(request);

  LlmExtraction extraction;
  extraction.usage = response.usage;
  extraction.relations = parse_relation_list(response.text);
  const std::set<RelationTriple> known(candidates.begin(), candidates.end());
  extraction.hallucinated.reserve(extraction.relations.size());
  for (const RelationTriple& triple : extraction.relations) {
    extraction.hallucinated.push_back(known.count(triple) == 0);
  }
  return extraction;
}

RgResult rg(const std::vector<RelationTriple>& extracted,
            const std::set<RelationTriple>& table_relations) {
  RgResult result;
  result.count = static_cast<double>(extracted.size());
  if (extracted.empty()) return result;  // precision defined as 0 on empty
  std::size_t supported = 0;
  for (const RelationTriple& triple : extracted) {
    if (table_relations.count(triple)) ++supported;
  }
  result.precision = percent(static_cast<double>(supported), result.count);
  return result;
}

CsResult cs(const std::vector<RelationTriple>& gen, const std::vector<RelationTriple>& gold) {
  const std::set<RelationTriple> gen_set(gen.begin(), gen.end());
  const std::set<RelationTriple> gold_set(gold.begin(), gold.end());
  std::size_t both = 0;
  for (const RelationTriple& triple : gen_set) {
    if (gold_set.count(triple)) ++both;
  }
  CsResult result;
  result.precision = percent(static_cast<double>(both), static_cast<double>(gen_set.size()));
  result.recall = percent(static_cast<double>(both), static_cast<double>(gold_set.size()));
  if (result.precision + result.recall > 0.0) {
    result.f1 = 2.0 * result.precision * result.recall / (result.precision + result.recall);
  }
  return result;
}

double co(const std::vector<RelationTriple>& gen, const std::vector<RelationTriple>& gold) {
  const std::size_t longest = std::max(gen.size(), gold.size());
  if (longest == 0) return 100.0;  // two empty sequences are identical
  const std::size_t distance = dld(gen, gold);
  return 100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(longest));
}

SampleMetrics score_sample(const std::string& gen_report, const std::string& gold_report,
                           const TableSet& ts, const Extractor& extractor,
                           const GenerationCost& cost) {
  const std::vector<RelationTriple> candidates = enumerate_relations(ts);
  const std::vector<RelationTriple> gen_rel = extractor(gen_report, candidates);
  const std::vector<RelationTriple> gold_rel = extractor(gold_report, candidates);

  SampleMetrics metrics;
  const std::set<RelationTriple> table_set(candidates.begin(), candidates.end());
  const RgResult r = rg(gen_rel, table_set);
  metrics.rg_count = r.count;
  metrics.rg_precision = r.precision;
  const CsResult c = cs(gen_rel, gold_rel);
  metrics.cs_precision = c.precision;
  metrics.cs_recall = c.recall;
  metrics.cs_f1 = c.f1;
  metrics.co_dld = co(gen_rel, gold_rel);
  metrics.seconds = cost.seconds;
  metrics.cost_milli_usd = cost.cost_milli_usd;
  return metrics;
}

CorpusMetrics aggregate(const std::vector<SampleMetrics>& samples) {
  if (samples.empty()) throw EmptyCorpus("aggregate: no samples");
  CorpusMetrics corpus;
  corpus.n = samples.size();
  for (const SampleMetrics& s : samples) {
    corpus.mean.rg_count += s.rg_count;
    corpus.mean.rg_precision += s.rg_precision;
    corpus.mean.cs_precision += s.cs_precision;
    corpus.mean.cs_recall += s.cs_recall;
    corpus.mean.cs_f1 += s.cs_f1;
    corpus.mean.co_dld += s.co_dld;
    corpus.mean.seconds += s.seconds;
    corpus.mean.cost_milli_usd += s.cost_milli_usd;
  }
  const double n = static_cast<double>(samples.size());
  corpus.mean.rg_count /= n;
  corpus.mean.rg_precision /= n;
  corpus.mean.cs_precision /= n;
  corpus.mean.cs_recall /= n;
  corpus.mean.cs_f1 /= n;
  corpus.mean.co_dld /= n;
  corpus.mean.seconds /= n;
  corpus.mean.cost_milli_usd /= n;
  return corpus;
}

namespace {

std::vector<std::pair<std::string, SampleMetrics>> with_mean_row(
    std::vector<std::pair<std::string, SampleMetrics>> rows) {
  std::vector<SampleMetrics> bare;
  bare.reserve(rows.size());
  for (const auto& [id, m] : rows) {
    (void)id;
    bare.push_back(m);
  }
  rows.emplace_back("mean", aggregate(bare).mean);
  return rows;
}

std::vector<std::string> metric_cells(const SampleMetrics& m) {
  return {format2(m.rg_count), format2(m.rg_precision), format2(m.cs_precision),
          format2(m.cs_recall), format2(m.cs_f1),       format2(m.co_dld),
          format2(m.seconds),   format2(m.cost_milli_usd)};
}

}  // namespace

std::string metrics_to_csv(const std::vector<std::pair<std::string, SampleMetrics>>& rows) {
  std::string out =
      "id,rg_count,rg_precision,cs_precision,cs_recall,cs_f1,co_dld,time_seconds,cost_milli_usd\n";
  for (const auto& [id, m] : with_mean_row(rows)) {
    out += id;
    for (const std::string& cell : metric_cells(m)) out += "," + cell;
    out += "\n";
  }
  return out;
}

std::string metrics_to_text(const std::vector<std::pair<std::string, SampleMetrics>>& rows) {
  const std::vector<std::string> header = {"Sample", "RG #",    "RG P%", "CS P%", "CS R%",
                                           "CS F%",  "CO DLD%", "Time",  "Cost"};
  std::vector<std::vector<std::string>> grid;
  grid.push_back(header);
  for (const auto& [id, m] : with_mean_row(rows)) {
    std::vector<std::string> row = {id};
    for (std::string& cell : metric_cells(m)) row.push_back(std::move(cell));
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += "  ";
      out += row[i];
      out.append(widths[i] - row[i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

}  // namespace tot
