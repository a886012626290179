#include "tot/ops.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

namespace tot {

namespace {

constexpr std::array<std::string_view, kOperationKindCount> kOperationNames = {
    "root",   "select_table", "select_row", "select_col",
    "count",  "sort",         "filter",     "write",
};

constexpr std::array<OperationKind, kOperationKindCount> kAllKinds = {
    OperationKind::Root,   OperationKind::SelectTable, OperationKind::SelectRow,
    OperationKind::SelectCol, OperationKind::Count,    OperationKind::Sort,
    OperationKind::Filter, OperationKind::Write,
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

NoSuchTable::NoSuchTable(const std::string& name)
    : OpError("no such table: " + name) {}

BadComparator::BadComparator(const std::string& symbol)
    : OpError("unknown comparator: " + symbol) {}

std::string_view operation_name(OperationKind kind) {
  return kOperationNames[static_cast<std::size_t>(kind)];
}

std::optional<OperationKind> operation_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOperationNames.size(); ++i) {
    if (kOperationNames[i] == name) return kAllKinds[i];
  }
  return std::nullopt;
}

std::string_view comparator_symbol(Comparator cmp) {
  switch (cmp) {
    case Comparator::Eq: return "==";
    case Comparator::Ne: return "!=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Contains: return "contains";
  }
  return "==";
}

std::optional<Comparator> parse_comparator(std::string_view symbol) {
  if (symbol == "==") return Comparator::Eq;
  if (symbol == "!=") return Comparator::Ne;
  if (symbol == ">") return Comparator::Gt;
  if (symbol == ">=") return Comparator::Ge;
  if (symbol == "<") return Comparator::Lt;
  if (symbol == "<=") return Comparator::Le;
  if (symbol == "contains") return Comparator::Contains;
  return std::nullopt;
}

OperationKind OperationCall::kind() const {
  return static_cast<OperationKind>(payload.index());
}

OperationCall OperationCall::root() { return {args::Root{}}; }
OperationCall OperationCall::write() { return {args::Write{}}; }
OperationCall OperationCall::select_table(std::vector<std::string> names) {
  return {args::SelectTable{std::move(names)}};
}
OperationCall OperationCall::select_row(std::vector<std::size_t> indices) {
  return {args::SelectRow{std::move(indices)}};
}
OperationCall OperationCall::select_col(std::vector<std::string> columns) {
  return {args::SelectCol{std::move(columns)}};
}
OperationCall OperationCall::count(std::vector<std::string> columns) {
  return {args::Count{std::move(columns)}};
}
OperationCall OperationCall::sort(std::vector<SortKey> keys) {
  return {args::Sort{std::move(keys)}};
}
OperationCall OperationCall::filter(std::string column, Comparator cmp,
                                    std::string value) {
  return {args::Filter{std::move(column), cmp, std::move(value)}};
}

namespace {

bool arg_needs_quoting(std::string_view arg) {
  if (arg.empty()) return true;
  if (std::isspace(static_cast<unsigned char>(arg.front())) ||
      std::isspace(static_cast<unsigned char>(arg.back()))) {
    return true;
  }
  return arg.find_first_of(",()[]'\"\\\n\r") != std::string_view::npos;
}

std::string render_arg(std::string_view arg) {
  if (!arg_needs_quoting(arg)) return std::string(arg);
  std::string out = "\"";
  for (char c : arg) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_args(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ", ";
    out += render_arg(parts[i]);
  }
  return out;
}

}  // namespace

std::string render_call(const OperationCall& call) {
  const std::string name(operation_name(call.kind()));
  switch (call.kind()) {
    case OperationKind::Root:
    case OperationKind::Write:
      return name + "()";
    case OperationKind::SelectTable:
      return name + "(" + render_args(std::get<args::SelectTable>(call.payload).names) + ")";
    case OperationKind::SelectRow: {
      std::vector<std::string> parts;
      for (std::size_t idx : std::get<args::SelectRow>(call.payload).indices) {
        parts.push_back(std::to_string(idx));
      }
      return name + "(" + render_args(parts) + ")";
    }
    case OperationKind::SelectCol:
      return name + "(" + render_args(std::get<args::SelectCol>(call.payload).columns) + ")";
    case OperationKind::Count:
      return name + "(" + render_args(std::get<args::Count>(call.payload).columns) + ")";
    case OperationKind::Sort: {
      std::vector<std::string> parts;
      for (const SortKey& key : std::get<args::Sort>(call.payload).keys) {
        parts.push_back(key.column);
        parts.push_back(key.order == SortOrder::Asc ? "asc" : "desc");
      }
      return name + "(" + render_args(parts) + ")";
    }
    case OperationKind::Filter: {
      const auto& f = std::get<args::Filter>(call.payload);
      std::vector<std::string> parts = {f.column, std::string(comparator_symbol(f.cmp)), f.value};
      return name + "(" + render_args(parts) + ")";
    }
  }
  return name + "()";
}

OperationHistory OperationHistory::initial() {
  OperationHistory h;
  h.calls.push_back(OperationCall::root());
  return h;
}

OperationHistory OperationHistory::extended(const OperationCall& call) const {
  OperationHistory h = *this;
  h.calls.push_back(call);
  return h;
}

std::string OperationHistory::render() const {
  std::string out = "[";
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (i > 0) out += ", ";
    out += render_call(calls[i]);
  }
  out += "]";
  return out;
}

OperationPool OperationPool::all_non_root() {
  OperationPool pool;
  for (OperationKind k : kAllKinds) {
    if (k != OperationKind::Root) pool.insert(k);
  }
  return pool;
}

OperationPool OperationPool::of(std::initializer_list<OperationKind> kinds) {
  OperationPool pool;
  for (OperationKind k : kinds) pool.insert(k);
  return pool;
}

OperationPool OperationPool::from_names(const std::vector<std::string>& names) {
  OperationPool pool;
  for (const std::string& n : names) {
    auto kind = operation_from_name(n);
    if (!kind) throw OpError("unknown operation name in pool: " + n);
    pool.insert(*kind);
  }
  return pool;
}

bool OperationPool::contains(OperationKind kind) const {
  return mask_ & (1u << static_cast<unsigned>(kind));
}

void OperationPool::insert(OperationKind kind) {
  if (kind == OperationKind::Root) return;
  mask_ |= 1u << static_cast<unsigned>(kind);
}

std::size_t OperationPool::size() const {
  std::size_t n = 0;
  for (OperationKind k : kAllKinds) {
    if (contains(k)) ++n;
  }
  return n;
}

std::vector<OperationKind> OperationPool::kinds() const {
  std::vector<OperationKind> out;
  for (OperationKind k : kAllKinds) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string OperationPool::render() const {
  std::string out = "[";
  bool first = true;
  for (OperationKind k : kinds()) {
    if (!first) out += ", ";
    first = false;
    out += std::string(operation_name(k)) + "()";
  }
  out += "]";
  return out;
}

OperationPool shrink_pool(OperationPool pool, OperationKind used) {
  OperationPool out;
  for (OperationKind k : pool.kinds()) {
    if (k != used) out.insert(k);
  }
  return out;
}

std::string_view diagnostic_kind_name(PlanDiagnostic::Kind kind) {
  switch (kind) {
    case PlanDiagnostic::Kind::UnknownOperation: return "UnknownOperation";
    case PlanDiagnostic::Kind::BadArity: return "BadArity";
    case PlanDiagnostic::Kind::BadIndex: return "BadIndex";
    case PlanDiagnostic::Kind::BadOrder: return "BadOrder";
    case PlanDiagnostic::Kind::BadComparator: return "BadComparator";
  }
  return "UnknownOperation";
}

namespace {

// Splits `text` at top-level commas, honoring parentheses depth and quoted
// spans. Used both for the call list and for argument lists.
std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  int depth = 0;
  char quote = '\0';
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote != '\0') {
      if (c == '\\' && i + 1 < text.size()) {
        ++i;
      } else if (c == quote) {
        quote = '\0';
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth > 0) --depth;
    } else if (c == ',' && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

std::string decode_quoted(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size()) {
      out.push_back(body[i + 1]);
      ++i;
    } else {
      out.push_back(body[i]);
    }
  }
  return out;
}

// One raw argument: either a quoted string or a trimmed bare token.
std::string decode_arg(std::string_view raw) {
  std::string_view t = trim(raw);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
    return decode_quoted(t.substr(1, t.size() - 2));
  }
  return std::string(t);
}

struct CallParseResult {
  std::optional<OperationCall> call;
  std::vector<PlanDiagnostic> diagnostics;
};

void diag(CallParseResult& r, PlanDiagnostic::Kind kind, std::string detail) {
  r.diagnostics.push_back({kind, std::move(detail)});
}

CallParseResult parse_single_call(std::string_view text) {
  CallParseResult result;
  std::string_view t = trim(text);
  const std::size_t open = t.find('(');
  if (open == std::string_view::npos || t.back() != ')') {
    diag(result, PlanDiagnostic::Kind::UnknownOperation,
         "not an operation call: " + std::string(t));
    return result;
  }
  const std::string_view name = trim(t.substr(0, open));
  const std::string_view inner = t.substr(open + 1, t.size() - open - 2);
  const auto kind = operation_from_name(name);
  if (!kind) {
    diag(result, PlanDiagnostic::Kind::UnknownOperation, std::string(name));
    return result;
  }

  std::vector<std::string> arglist;
  if (!trim(inner).empty()) {
    for (std::string_view raw : split_top_level(inner)) {
      arglist.push_back(decode_arg(raw));
    }
  }

  const std::string rendered(t);
  switch (*kind) {
    case OperationKind::Root:
      // root() is never executable; planners may not schedule it.
      diag(result, PlanDiagnostic::Kind::UnknownOperation, "root() is not executable");
      return result;
    case OperationKind::Write:
      if (!arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "write() takes no arguments: " + rendered);
        return result;
      }
      result.call = OperationCall::write();
      return result;
    case OperationKind::SelectTable:
      if (arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "select_table needs at least one name");
        return result;
      }
      result.call = OperationCall::select_table(arglist);
      return result;
    case OperationKind::SelectRow: {
      if (arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "select_row needs at least one index");
        return result;
      }
      std::vector<std::size_t> indices;
      std::set<std::size_t> seen;
      for (const std::string& a : arglist) {
        if (a.empty() || a.find_first_not_of("0123456789") != std::string::npos) {
          diag(result, PlanDiagnostic::Kind::BadIndex, "not a row index: " + a);
          return result;
        }
        const std::size_t idx = std::stoull(a);
        if (!seen.insert(idx).second) {
          diag(result, PlanDiagnostic::Kind::BadIndex, "duplicate row index: " + a);
          return result;
        }
        indices.push_back(idx);
      }
      result.call = OperationCall::select_row(std::move(indices));
      return result;
    }
    case OperationKind::SelectCol:
      if (arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "select_col needs at least one column");
        return result;
      }
      result.call = OperationCall::select_col(arglist);
      return result;
    case OperationKind::Count:
      if (arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "count needs at least one column");
        return result;
      }
      result.call = OperationCall::count(arglist);
      return result;
    case OperationKind::Sort: {
      if (arglist.empty()) {
        diag(result, PlanDiagnostic::Kind::BadArity, "sort needs at least one column");
        return result;
      }
      std::vector<SortKey> keys;
      for (std::size_t i = 0; i < arglist.size(); i += 2) {
        SortKey key;
        key.column = arglist[i];
        if (i + 1 < arglist.size()) {
          std::string order = arglist[i + 1];
          std::transform(order.begin(), order.end(), order.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
          });
          if (order == "asc") {
            key.order = SortOrder::Asc;
          } else if (order == "desc") {
            key.order = SortOrder::Desc;
          } else {
            diag(result, PlanDiagnostic::Kind::BadOrder, "not a sort order: " + arglist[i + 1]);
            return result;
          }
        } else {
          key.order = SortOrder::Asc;  // odd tail defaults to ascending
        }
        keys.push_back(std::move(key));
      }
      result.call = OperationCall::sort(std::move(keys));
      return result;
    }
    case OperationKind::Filter: {
      if (arglist.size() != 3) {
        diag(result, PlanDiagnostic::Kind::BadArity,
             "filter takes (column, comparator, value): " + rendered);
        return result;
      }
      const auto cmp = parse_comparator(arglist[1]);
      if (!cmp) {
        diag(result, PlanDiagnostic::Kind::BadComparator, arglist[1]);
        return result;
      }
      result.call = OperationCall::filter(arglist[0], *cmp, arglist[2]);
      return result;
    }
  }
  diag(result, PlanDiagnostic::Kind::UnknownOperation, std::string(name));
  return result;
}

// Recovery: every maximal `name(...)` substring whose name is a known
// operation, scanned left to right.
std::vector<std::string_view> extract_call_substrings(std::string_view text) {
  std::vector<std::string_view> found;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_identifier_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && is_identifier_char(text[i])) ++i;
    const std::string_view name = text.substr(start, i - start);
    if (!operation_from_name(name)) continue;
    std::size_t j = i;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    if (j >= text.size() || text[j] != '(') continue;
    // Find the matching close paren, honoring quotes.
    int depth = 0;
    char quote = '\0';
    std::size_t end = std::string_view::npos;
    for (std::size_t k = j; k < text.size(); ++k) {
      const char c = text[k];
      if (quote != '\0') {
        if (c == '\\' && k + 1 < text.size()) ++k;
        else if (c == quote) quote = '\0';
        continue;
      }
      if (c == '\'' || c == '"') quote = c;
      else if (c == '(') ++depth;
      else if (c == ')') {
        --depth;
        if (depth == 0) {
          end = k;
          break;
        }
      }
    }
    if (end == std::string_view::npos) continue;
    found.push_back(text.substr(start, end + 1 - start));
    i = end + 1;
  }
  return found;
}

}  // namespace

ParsedPlan parse_plan(std::string_view text) {
  ParsedPlan plan;
  const std::string_view t = trim(text);

  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
    const std::string_view inner = t.substr(1, t.size() - 2);
    if (!trim(inner).empty()) {
      for (std::string_view item : split_top_level(inner)) {
        CallParseResult r = parse_single_call(item);
        for (auto& d : r.diagnostics) plan.diagnostics.push_back(std::move(d));
        if (r.call) plan.calls.push_back(std::move(*r.call));
      }
    }
  }

  if (plan.calls.empty()) {
    plan.used_recovery = true;
    for (std::string_view sub : extract_call_substrings(t)) {
      CallParseResult r = parse_single_call(sub);
      for (auto& d : r.diagnostics) plan.diagnostics.push_back(std::move(d));
      if (r.call) plan.calls.push_back(std::move(*r.call));
    }
  }

  if (plan.calls.empty()) {
    plan.used_fallback = true;
    plan.calls.push_back(OperationCall::write());
  }
  return plan;
}

std::string operation_descriptions() {
  return
      "- root(): Does nothing; represents the root node of the tree.\n"
      "- select_table(table_name, ...): Keeps only the named tables. Arguments are "
      "one or more table names.\n"
      "- select_row(row_index, ...): Keeps only the rows with the given indices from "
      "the \"row\" column. Arguments are one or more 0-based row indices.\n"
      "- select_col(column_name, ...): Keeps only the named columns. Arguments are "
      "one or more column names.\n"
      "- count(column_name, ...): Replaces each table with a one-row summary holding "
      "the number of unique values in the named columns. Arguments are one or more "
      "column names.\n"
      "- sort(column_name, order, ...): Sorts rows by the named columns. Arguments "
      "alternate between a column name and a sorting order (asc or desc).\n"
      "- filter(column_name, comparison, value): Keeps only the rows whose column "
      "value satisfies the comparison. The comparison must be one of ==, !=, >, >=, "
      "<, <=, contains.\n"
      "- write(): Writes a short text based on the tables; represents a leaf node of "
      "the tree.";
}

int compare_cells(const CellValue& a, const CellValue& b) {
  if (a.is_missing() && b.is_missing()) return 0;
  if (a.is_missing()) return 1;  // missing sorts last, regardless of order
  if (b.is_missing()) return -1;
  if (a.is_number() && b.is_number()) {
    return Decimal::compare(a.number_value(), b.number_value());
  }
  const int c = a.render().compare(b.render());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

TableSet apply_select_table(const std::vector<std::string>& names, const TableSet& ts) {
  if (names.empty()) throw OpError("select_table: empty name list");
  std::unordered_set<std::string_view> wanted;
  for (const std::string& n : names) {
    if (!ts.find(n)) throw NoSuchTable(n);
    wanted.insert(n);
  }
  TableSet out;
  for (const Table& t : ts.tables) {
    if (wanted.count(t.name)) out.tables.push_back(t);
  }
  return out;
}

TableSet apply_select_row(const std::vector<std::size_t>& indices, const TableSet& ts) {
  if (indices.empty()) throw OpError("select_row: empty index list");
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t max_index = sorted.back();

  TableSet out;
  bool any = false;
  for (const Table& t : ts.tables) {
    if (t.n_rows() > max_index) {
      Table kept;
      kept.name = t.name;
      kept.columns = t.columns;
      for (std::size_t idx : sorted) kept.rows.push_back(t.rows[idx]);
      out.tables.push_back(std::move(kept));
      any = true;
    } else {
      out.tables.push_back(t);
    }
  }
  if (!any) {
    throw RowIndexOutOfRange("select_row: no table has more than " +
                             std::to_string(max_index) + " rows");
  }
  return out;
}

TableSet apply_select_col(const std::vector<std::string>& cols, const TableSet& ts) {
  if (cols.empty()) throw OpError("select_col: empty column list");
  std::vector<std::string> requested;
  for (const std::string& c : cols) {
    if (std::find(requested.begin(), requested.end(), c) == requested.end()) {
      requested.push_back(c);
    }
  }

  TableSet out;
  bool any = false;
  for (const Table& t : ts.tables) {
    std::vector<std::size_t> keep;
    std::vector<std::string> kept_cols;
    for (const std::string& c : requested) {
      if (auto idx = t.column_index(c)) {
        keep.push_back(*idx);
        kept_cols.push_back(c);
      }
    }
    if (keep.empty()) {
      out.tables.push_back(t);
      continue;
    }
    any = true;
    Table projected;
    projected.name = t.name;
    projected.columns = std::move(kept_cols);
    for (const auto& row : t.rows) {
      std::vector<CellValue> cells;
      cells.reserve(keep.size());
      for (std::size_t idx : keep) cells.push_back(row[idx]);
      projected.rows.push_back(std::move(cells));
    }
    out.tables.push_back(std::move(projected));
  }
  if (!any) throw NoSuchColumn("select_col: no table has any of the requested columns");
  return out;
}

TableSet apply_count(const std::vector<std::string>& cols, const TableSet& ts) {
  if (cols.empty()) throw OpError("count: empty column list");
  std::vector<std::string> requested;
  for (const std::string& c : cols) {
    if (std::find(requested.begin(), requested.end(), c) == requested.end()) {
      requested.push_back(c);
    }
  }

  TableSet out;
  bool any = false;
  for (const Table& t : ts.tables) {
    std::vector<std::pair<std::string, std::size_t>> present;  // column -> index
    for (const std::string& c : requested) {
      if (auto idx = t.column_index(c)) present.emplace_back(c, *idx);
    }
    if (present.empty()) {
      out.tables.push_back(t);
      continue;
    }
    any = true;
    Table summary;
    summary.name = t.name + "__unique_counts";
    std::vector<CellValue> row;
    for (const auto& [col, idx] : present) {
      summary.columns.push_back(col);
      std::set<std::string> distinct;
      for (const auto& r : t.rows) {
        if (!r[idx].is_missing()) distinct.insert(r[idx].key());
      }
      row.push_back(CellValue::number(static_cast<std::int64_t>(distinct.size())));
    }
    summary.rows.push_back(std::move(row));
    out.tables.push_back(std::move(summary));
  }
  if (!any) throw NoSuchColumn("count: no table has any of the requested columns");
  return out;
}

TableSet apply_sort(const std::vector<SortKey>& keys, const TableSet& ts) {
  if (keys.empty()) throw OpError("sort: empty key list");

  TableSet out;
  bool any = false;
  for (const Table& t : ts.tables) {
    std::vector<std::size_t> key_cols;
    bool all_present = true;
    for (const SortKey& k : keys) {
      if (auto idx = t.column_index(k.column)) {
        key_cols.push_back(*idx);
      } else {
        all_present = false;
        break;
      }
    }
    if (!all_present) {
      out.tables.push_back(t);
      continue;
    }
    any = true;
    Table sorted = t;
    std::stable_sort(sorted.rows.begin(), sorted.rows.end(),
                     [&](const std::vector<CellValue>& a, const std::vector<CellValue>& b) {
                       for (std::size_t k = 0; k < keys.size(); ++k) {
                         const CellValue& ca = a[key_cols[k]];
                         const CellValue& cb = b[key_cols[k]];
                         // Missing-last is absolute: not flipped by direction.
                         if (ca.is_missing() || cb.is_missing()) {
                           const int c = compare_cells(ca, cb);
                           if (c != 0) return c < 0;
                           continue;
                         }
                         int c = compare_cells(ca, cb);
                         if (keys[k].order == SortOrder::Desc) c = -c;
                         if (c != 0) return c < 0;
                       }
                       return false;
                     });
    out.tables.push_back(std::move(sorted));
  }
  if (!any) throw NoSuchColumn("sort: no table has all of the key columns");
  return out;
}

namespace {

bool filter_matches(const CellValue& cell, Comparator cmp, const std::string& value) {
  if (cell.is_missing()) {
    // Missing never satisfies a comparator, except != against a non-missing value.
    return cmp == Comparator::Ne && value != "N/A";
  }
  if (cmp == Comparator::Contains) {
    return cell.render().find(value) != std::string::npos;
  }
  int c;
  const auto value_num = Decimal::parse(value);
  if (cell.is_number() && value_num) {
    c = Decimal::compare(cell.number_value(), *value_num);
  } else {
    const int raw = cell.render().compare(value);
    c = raw < 0 ? -1 : (raw > 0 ? 1 : 0);
  }
  switch (cmp) {
    case Comparator::Eq: return c == 0;
    case Comparator::Ne: return c != 0;
    case Comparator::Gt: return c > 0;
    case Comparator::Ge: return c >= 0;
    case Comparator::Lt: return c < 0;
    case Comparator::Le: return c <= 0;
    case Comparator::Contains: return false;  // handled above
  }
  return false;
}

}  // namespace

TableSet apply_filter(const std::string& column, Comparator cmp,
                      const std::string& value, const TableSet& ts) {
  TableSet out;
  bool any = false;
  for (const Table& t : ts.tables) {
    const auto idx = t.column_index(column);
    if (!idx) {
      out.tables.push_back(t);
      continue;
    }
    any = true;
    Table kept;
    kept.name = t.name;
    kept.columns = t.columns;
    for (const auto& row : t.rows) {
      if (filter_matches(row[*idx], cmp, value)) kept.rows.push_back(row);
    }
    out.tables.push_back(std::move(kept));
  }
  if (!any) throw NoSuchColumn("filter: no table has column '" + column + "'");
  return out;
}

TableSet apply_filter(const std::string& column, const std::string& comparator,
                      const std::string& value, const TableSet& ts) {
  const auto cmp = parse_comparator(comparator);
  if (!cmp) throw BadComparator(comparator);
  return apply_filter(column, *cmp, value, ts);
}

TableSet apply_call(const OperationCall& call, const TableSet& ts) {
  switch (call.kind()) {
    case OperationKind::SelectTable:
      return apply_select_table(std::get<args::SelectTable>(call.payload).names, ts);
    case OperationKind::SelectRow:
      return apply_select_row(std::get<args::SelectRow>(call.payload).indices, ts);
    case OperationKind::SelectCol:
      return apply_select_col(std::get<args::SelectCol>(call.payload).columns, ts);
    case OperationKind::Count:
      return apply_count(std::get<args::Count>(call.payload).columns, ts);
    case OperationKind::Sort:
      return apply_sort(std::get<args::Sort>(call.payload).keys, ts);
    case OperationKind::Filter: {
      const auto& f = std::get<args::Filter>(call.payload);
      return apply_filter(f.column, f.cmp, f.value, ts);
    }
    case OperationKind::Root:
    case OperationKind::Write:
      break;
  }
  throw OpError(std::string(operation_name(call.kind())) + "() is not executable");
}

}  // namespace tot
