#include "tot/table.hpp"

#include <algorithm>
#include <unordered_set>

namespace tot {

namespace {

constexpr std::string_view kMissingLiteral = "N/A";

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_markdown(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

bool csv_needs_quoting(std::string_view text) {
  if (text.empty()) return true;
  if (text == kMissingLiteral) return true;
  if (text.find_first_of(",\"\r\n") != std::string_view::npos) return true;
  // Numeric-looking text must be quoted or it would be re-typed on parse.
  return Decimal::parse(text).has_value();
}

std::string render_csv_cell(const CellValue& cell) {
  if (cell.is_missing()) return std::string(kMissingLiteral);
  if (cell.is_number()) return cell.number_value().str();
  const std::string& t = cell.text_value();
  if (!csv_needs_quoting(t)) return t;
  std::string out = "\"";
  for (char c : t) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void check_pipe_safe(std::string_view text, const std::string& table,
                     std::string_view what) {
  if (text.find_first_of("|\r\n") != std::string_view::npos) {
    throw PipeInCell("PIPE format cannot represent " + std::string(what) +
                     " containing '|' or a newline in table '" + table + "': " +
                     std::string(text));
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// Header names plus rendered cells for one table, with the synthetic row
// column already applied. Shared by all four formats.
struct RenderedGrid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RenderedGrid make_grid(const Table& table, bool with_row_index) {
  RenderedGrid grid;
  if (with_row_index) grid.header.push_back("row");
  grid.header.insert(grid.header.end(), table.columns.begin(), table.columns.end());
  grid.rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> row;
    row.reserve(grid.header.size());
    if (with_row_index) row.push_back(std::to_string(r));
    for (const CellValue& cell : table.rows[r]) row.push_back(cell.render());
    grid.rows.push_back(std::move(row));
  }
  return grid;
}

std::string render_table(const Table& table, TableFormat format,
                         bool with_row_index) {
  std::string out = "## " + table.name + "\n";
  switch (format) {
    case TableFormat::Csv: {
      std::vector<std::string> header;
      if (with_row_index) header.push_back("row");
      for (const std::string& c : table.columns) {
        header.push_back(csv_needs_quoting(c) ? render_csv_cell(CellValue::text(c)) : c);
      }
      out += join(header, ",");
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out.push_back('\n');
        std::vector<std::string> cells;
        if (with_row_index) cells.push_back(std::to_string(r));
        for (const CellValue& cell : table.rows[r]) cells.push_back(render_csv_cell(cell));
        out += join(cells, ",");
      }
      return out;
    }
    case TableFormat::Pipe: {
      RenderedGrid grid = make_grid(table, with_row_index);
      for (const std::string& h : grid.header) check_pipe_safe(h, table.name, "a column name");
      for (const auto& row : grid.rows) {
        for (const std::string& cell : row) check_pipe_safe(cell, table.name, "a cell");
      }
      out += join(grid.header, "|");
      for (const auto& row : grid.rows) {
        out.push_back('\n');
        out += join(row, "|");
      }
      return out;
    }
    case TableFormat::Markdown: {
      RenderedGrid grid = make_grid(table, with_row_index);
      std::vector<std::string> header;
      for (const std::string& h : grid.header) header.push_back(escape_markdown(h));
      out += "| " + join(header, " | ") + " |";
      out += "\n|";
      for (std::size_t i = 0; i < grid.header.size(); ++i) out += " --- |";
      for (const auto& row : grid.rows) {
        std::vector<std::string> cells;
        for (const std::string& cell : row) cells.push_back(escape_markdown(cell));
        out += "\n| " + join(cells, " | ") + " |";
      }
      return out;
    }
    case TableFormat::Html: {
      RenderedGrid grid = make_grid(table, with_row_index);
      out += "<table>\n<tr>";
      for (const std::string& h : grid.header) out += "<th>" + escape_html(h) + "</th>";
      out += "</tr>";
      for (const auto& row : grid.rows) {
        out += "\n<tr>";
        for (const std::string& cell : row) out += "<td>" + escape_html(cell) + "</td>";
        out += "</tr>";
      }
      out += "\n</table>";
      return out;
    }
  }
  throw TableError("unreachable table format");
}

}  // namespace

RaggedRow::RaggedRow(std::size_t line_number, std::size_t expected, std::size_t got)
    : TableError("ragged CSV row at line " + std::to_string(line_number) +
                 ": expected " + std::to_string(expected) + " fields, got " +
                 std::to_string(got)),
      line(line_number) {}

DuplicateTableName::DuplicateTableName(const std::string& name)
    : TableError("duplicate table name: " + name) {}

CellValue CellValue::text(std::string value) {
  CellValue v;
  v.value_ = std::move(value);
  return v;
}

CellValue CellValue::number(Decimal value) {
  CellValue v;
  v.value_ = std::move(value);
  return v;
}

CellValue CellValue::number(std::int64_t value) {
  return number(Decimal::from_int(value));
}

CellValue CellValue::from_field(std::string_view field) {
  if (field.empty() || field == kMissingLiteral) return missing();
  if (auto d = Decimal::parse(field)) return number(std::move(*d));
  return text(std::string(field));
}

std::string CellValue::render() const {
  if (is_missing()) return std::string(kMissingLiteral);
  if (is_number()) return number_value().str();
  return text_value();
}

std::string CellValue::key() const {
  if (is_missing()) return "m|";
  if (is_number()) return "n|" + number_value().str();
  return "t|" + text_value();
}

std::optional<std::size_t> Table::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) return i;
  }
  return std::nullopt;
}

void Table::validate() const {
  std::unordered_set<std::string_view> seen;
  for (const std::string& c : columns) {
    if (c.empty()) throw TableError("empty column name in table '" + name + "'");
    if (!seen.insert(c).second) {
      throw TableError("duplicate column '" + c + "' in table '" + name + "'");
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size()) {
      throw TableError("row " + std::to_string(r) + " of table '" + name +
                       "' has " + std::to_string(rows[r].size()) +
                       " cells, expected " + std::to_string(columns.size()));
    }
  }
}

const Table* TableSet::find(std::string_view name) const {
  for (const Table& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void TableSet::validate() const {
  std::unordered_set<std::string_view> names;
  for (const Table& t : tables) {
    if (t.name.empty()) throw TableError("table with empty name");
    if (!names.insert(t.name).second) throw DuplicateTableName(t.name);
    t.validate();
  }
}

std::optional<TableFormat> parse_table_format(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "csv") return TableFormat::Csv;
  if (lower == "pipe") return TableFormat::Pipe;
  if (lower == "markdown") return TableFormat::Markdown;
  if (lower == "html") return TableFormat::Html;
  return std::nullopt;
}

std::string_view table_format_name(TableFormat format) {
  switch (format) {
    case TableFormat::Csv: return "CSV";
    case TableFormat::Pipe: return "PIPE";
    case TableFormat::Markdown: return "Markdown";
    case TableFormat::Html: return "HTML";
  }
  return "CSV";
}

std::string render_table_set(const TableSet& ts, TableFormat format,
                             bool with_row_index) {
  std::string out;
  for (std::size_t i = 0; i < ts.tables.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += render_table(ts.tables[i], format, with_row_index);
  }
  return out;
}

Table parse_csv_table(std::string_view text, std::string name) {
  struct Field {
    std::string content;
    bool quoted = false;
  };
  struct Row {
    std::vector<Field> fields;
    std::size_t line = 1;
  };

  std::vector<Row> raw_rows;
  Row current;
  Field field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t i = 0;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field = Field{};
  };
  auto end_row = [&] {
    end_field();
    raw_rows.push_back(std::move(current));
    current = Row{};
    row_has_content = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.content.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.content.push_back(c);
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field.quoted = true;
        row_has_content = true;
        ++i;
        break;
      case ',':
        end_field();
        row_has_content = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        end_row();
        ++line;
        ++i;
        current.line = line;
        break;
      default:
        field.content.push_back(c);
        row_has_content = true;
        ++i;
        break;
    }
  }
  if (in_quotes) throw TableError("unterminated quoted field in table '" + name + "'");
  if (row_has_content || !current.fields.empty() || !field.content.empty()) {
    end_row();
  }

  if (raw_rows.empty()) throw EmptyHeader("empty CSV input for table '" + name + "'");

  Table table;
  table.name = std::move(name);
  const Row& header = raw_rows.front();
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    const std::string& col = header.fields[c].content;
    if (col.empty()) {
      throw EmptyHeader("empty column name at position " + std::to_string(c + 1) +
                        " in table '" + table.name + "'");
    }
    table.columns.push_back(col);
  }
  if (table.columns.empty()) throw EmptyHeader("CSV header has no columns");

  for (std::size_t r = 1; r < raw_rows.size(); ++r) {
    const Row& row = raw_rows[r];
    if (row.fields.size() != table.columns.size()) {
      throw RaggedRow(row.line, table.columns.size(), row.fields.size());
    }
    std::vector<CellValue> cells;
    cells.reserve(row.fields.size());
    for (const Field& f : row.fields) {
      cells.push_back(f.quoted ? CellValue::text(f.content)
                               : CellValue::from_field(f.content));
    }
    table.rows.push_back(std::move(cells));
  }
  table.validate();
  return table;
}

}  // namespace tot
