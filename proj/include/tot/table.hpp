#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tot/decimal.hpp"

namespace tot {

struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV body row whose field count differs from the header's.
struct RaggedRow : TableError {
  explicit RaggedRow(std::size_t line_number, std::size_t expected, std::size_t got);
  std::size_t line;
};

struct EmptyHeader : TableError {
  using TableError::TableError;
};

/// PIPE rendering has no escaping, so offending cells are rejected outright.
struct PipeInCell : TableError {
  using TableError::TableError;
};

struct DuplicateTableName : TableError {
  explicit DuplicateTableName(const std::string& name);
};

/// One table cell: free text, an exact decimal number, or missing.
/// Missing renders as the literal "N/A" in every serialization.
class CellValue {
 public:
  CellValue() = default;  // missing

  static CellValue missing() { return CellValue(); }
  static CellValue text(std::string value);
  static CellValue number(Decimal value);
  static CellValue number(std::int64_t value);

  /// Type inference used at ingestion: "" and "N/A" become missing, a plain
  /// decimal literal becomes a number, anything else is text.
  static CellValue from_field(std::string_view field);

  bool is_missing() const { return std::holds_alternative<std::monostate>(value_); }
  bool is_text() const { return std::holds_alternative<std::string>(value_); }
  bool is_number() const { return std::holds_alternative<Decimal>(value_); }

  const std::string& text_value() const { return std::get<std::string>(value_); }
  const Decimal& number_value() const { return std::get<Decimal>(value_); }

  /// Display form: "N/A" for missing, canonical decimal for numbers.
  std::string render() const;

  /// Identity string that distinguishes kind as well as content; used as a
  /// set/map key when counting distinct values.
  std::string key() const;

  friend bool operator==(const CellValue& a, const CellValue& b) = default;

 private:
  std::variant<std::monostate, std::string, Decimal> value_;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<CellValue>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return columns.size(); }
  std::optional<std::size_t> column_index(std::string_view column) const;

  /// Checks rectangularity and column-name uniqueness; throws TableError.
  void validate() const;
};

/// Ordered collection of uniquely named tables. Operations may drop or
/// replace tables but never reorder the survivors.
struct TableSet {
  std::vector<Table> tables;

  const Table* find(std::string_view name) const;
  void validate() const;
};

enum class TableFormat { Csv, Pipe, Markdown, Html };

/// Accepts the four names case-insensitively; anything else is rejected.
std::optional<TableFormat> parse_table_format(std::string_view name);
std::string_view table_format_name(TableFormat format);

/// Renders every table as a "## <name>" header line followed by the body in
/// the requested format, tables separated by one blank line. When
/// `with_row_index` is set, a leading synthetic "row" column carries the
/// current 0-based row positions. Byte-deterministic.
std::string render_table_set(const TableSet& ts, TableFormat format,
                             bool with_row_index);

/// Strict CSV reader (double-quote quoting, doubled-quote escaping). Unquoted
/// fields get type inference via CellValue::from_field; quoted fields always
/// stay text, which is what makes render/parse an exact round-trip.
Table parse_csv_table(std::string_view text, std::string name);

}  // namespace tot
