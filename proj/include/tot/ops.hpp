#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tot/table.hpp"

namespace tot {

struct OpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSuchTable : OpError {
  explicit NoSuchTable(const std::string& name);
};
struct RowIndexOutOfRange : OpError {
  using OpError::OpError;
};
struct NoSuchColumn : OpError {
  using OpError::OpError;
};
struct BadComparator : OpError {
  explicit BadComparator(const std::string& symbol);
};

enum class OperationKind {
  Root,
  SelectTable,
  SelectRow,
  SelectCol,
  Count,
  Sort,
  Filter,
  Write,
};

constexpr std::size_t kOperationKindCount = 8;

std::string_view operation_name(OperationKind kind);
std::optional<OperationKind> operation_from_name(std::string_view name);

enum class SortOrder { Asc, Desc };
enum class Comparator { Eq, Ne, Gt, Ge, Lt, Le, Contains };

std::string_view comparator_symbol(Comparator cmp);
std::optional<Comparator> parse_comparator(std::string_view symbol);

struct SortKey {
  std::string column;
  SortOrder order = SortOrder::Asc;
  friend bool operator==(const SortKey&, const SortKey&) = default;
};

namespace args {
struct Root {
  friend bool operator==(const Root&, const Root&) = default;
};
struct Write {
  friend bool operator==(const Write&, const Write&) = default;
};
struct SelectTable {
  std::vector<std::string> names;
  friend bool operator==(const SelectTable&, const SelectTable&) = default;
};
struct SelectRow {
  std::vector<std::size_t> indices;
  friend bool operator==(const SelectRow&, const SelectRow&) = default;
};
struct SelectCol {
  std::vector<std::string> columns;
  friend bool operator==(const SelectCol&, const SelectCol&) = default;
};
struct Count {
  std::vector<std::string> columns;
  friend bool operator==(const Count&, const Count&) = default;
};
struct Sort {
  std::vector<SortKey> keys;
  friend bool operator==(const Sort&, const Sort&) = default;
};
struct Filter {
  std::string column;
  Comparator cmp = Comparator::Eq;
  std::string value;
  friend bool operator==(const Filter&, const Filter&) = default;
};
}  // namespace args

/// One parsed operation with its typed argument payload. The payload variant
/// and OperationKind are kept in lock-step by construction.
struct OperationCall {
  std::variant<args::Root, args::SelectTable, args::SelectRow, args::SelectCol,
               args::Count, args::Sort, args::Filter, args::Write>
      payload;

  OperationKind kind() const;

  static OperationCall root();
  static OperationCall write();
  static OperationCall select_table(std::vector<std::string> names);
  static OperationCall select_row(std::vector<std::size_t> indices);
  static OperationCall select_col(std::vector<std::string> columns);
  static OperationCall count(std::vector<std::string> columns);
  static OperationCall sort(std::vector<SortKey> keys);
  static OperationCall filter(std::string column, Comparator cmp, std::string value);

  friend bool operator==(const OperationCall&, const OperationCall&) = default;
};

/// Canonical text form, e.g. `filter(score, >, 10)`. For every call other
/// than root(), parse_plan("[" + render_call(c) + "]") yields exactly [c]
/// (root is display-only: planners are not allowed to emit it).
std::string render_call(const OperationCall& call);

/// Root-to-node list of executed calls; always starts with root().
struct OperationHistory {
  std::vector<OperationCall> calls;

  static OperationHistory initial();
  OperationHistory extended(const OperationCall& call) const;
  std::size_t depth() const { return calls.size() - 1; }
  std::string render() const;
};

/// Set of operation kinds still available to a subtree. Root is stripped on
/// construction and can never be a member.
class OperationPool {
 public:
  OperationPool() = default;
  static OperationPool all_non_root();
  static OperationPool of(std::initializer_list<OperationKind> kinds);
  static OperationPool from_names(const std::vector<std::string>& names);

  bool contains(OperationKind kind) const;
  void insert(OperationKind kind);
  std::size_t size() const;
  bool empty() const { return mask_ == 0; }

  /// Members in canonical operation order.
  std::vector<OperationKind> kinds() const;
  std::string render() const;

  friend bool operator==(const OperationPool&, const OperationPool&) = default;

 private:
  unsigned mask_ = 0;
};

/// Pool minus the used kind; removing an absent kind is a no-op.
OperationPool shrink_pool(OperationPool pool, OperationKind used);

struct PlanDiagnostic {
  enum class Kind { UnknownOperation, BadArity, BadIndex, BadOrder, BadComparator };
  Kind kind;
  std::string detail;
};

std::string_view diagnostic_kind_name(PlanDiagnostic::Kind kind);

struct ParsedPlan {
  std::vector<OperationCall> calls;
  std::vector<PlanDiagnostic> diagnostics;
  bool used_recovery = false;
  bool used_fallback = false;
};

/// Total over arbitrary strings. Parses the bracketed call-list grammar the
/// planner is instructed to emit; if that yields nothing, a recovery pass
/// extracts every `name(...)` substring with a known operation name; if that
/// also yields nothing the result is the single call write(). Calls with
/// diagnostics are dropped, never repaired.
ParsedPlan parse_plan(std::string_view text);

/// Prompt-facing description of each operation and its argument format.
/// Generated from the same definitions the executor implements.
std::string operation_descriptions();

TableSet apply_select_table(const std::vector<std::string>& names, const TableSet& ts);
TableSet apply_select_row(const std::vector<std::size_t>& indices, const TableSet& ts);
TableSet apply_select_col(const std::vector<std::string>& cols, const TableSet& ts);
TableSet apply_count(const std::vector<std::string>& cols, const TableSet& ts);
TableSet apply_sort(const std::vector<SortKey>& keys, const TableSet& ts);
TableSet apply_filter(const std::string& column, Comparator cmp,
                      const std::string& value, const TableSet& ts);
/// String-comparator convenience; throws BadComparator on an unknown symbol.
TableSet apply_filter(const std::string& column, const std::string& comparator,
                      const std::string& value, const TableSet& ts);

/// Dispatches a parsed call to its apply_* function. root() and write() are
/// not executable and raise OpError.
TableSet apply_call(const OperationCall& call, const TableSet& ts);

/// Cell ordering used by sort: numeric when both cells are numbers, else
/// byte-wise on rendered text; missing sorts after everything.
int compare_cells(const CellValue& a, const CellValue& b);

}  // namespace tot
