#pragma once

// Shared fixtures and generators for the test suites. The random generators
// here are deliberately tiny and deterministic (seeded std::mt19937_64) so
// every failure reproduces.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tot/datasets.hpp"
#include "tot/llm.hpp"
#include "tot/ops.hpp"
#include "tot/table.hpp"

namespace tot_test {

inline tot::Table make_table(std::string name, std::vector<std::string> columns,
                             std::vector<std::vector<std::string>> rows) {
  tot::Table t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  for (const auto& row : rows) {
    std::vector<tot::CellValue> cells;
    for (const std::string& field : row) cells.push_back(tot::CellValue::from_field(field));
    t.rows.push_back(std::move(cells));
  }
  t.validate();
  return t;
}

inline tot::TableSet rally_fixture() {
  tot::TableSet ts;
  ts.tables.push_back(make_table("game",
                                 {"player", "sets_won"},
                                 {{"An Se Young", "2"}, {"Tai Tzu Ying", "1"}}));
  ts.tables.push_back(make_table("rally",
                                 {"rally", "winner", "shot_type", "score"},
                                 {{"1", "An Se Young", "smash", "21"},
                                  {"2", "Tai Tzu Ying", "net shot", "19"},
                                  {"3", "An Se Young", "clear", "N/A"}}));
  ts.validate();
  return ts;
}

inline tot::DatasetProfile badminton_profile() {
  tot::DatasetProfile profile;
  profile.name = "badminton-mini";
  profile.sport = "badminton";
  profile.table_descriptions = {
      {"game", {{"player", "The player name."}, {"sets_won", "Sets won by the player."}}},
      {"rally",
       {{"rally", "The rally number."},
        {"winner", "The player who won the rally."},
        {"shot_type", "The type of the final shot."},
        {"score", "The score after the rally."}}}};
  profile.ie_example =
      "## Report\n\nAn Se Young won rally 1 with a smash.\n\n## Report Relation\n\n"
      "[(rally|winner|An Se Young), (rally|rally|1), (rally|shot_type|smash)]";
  return profile;
}

// --- random table machinery -------------------------------------------------

struct TableGenOptions {
  std::size_t max_tables = 3;
  std::size_t max_rows = 8;
  std::size_t max_cols = 5;
};

inline std::string random_word(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {
      "net",  "smash", "drive", "lob",   "clear", "drop", "serve",
      "long", "short", "out",   "fault", "ace",   "rush", "push"};
  return words[rng() % words.size()];
}

inline tot::CellValue random_cell(std::mt19937_64& rng) {
  switch (rng() % 10) {
    case 0:
      return tot::CellValue::missing();
    case 1:
    case 2: {
      // Decimal with up to 3 fractional digits.
      const std::int64_t units = static_cast<std::int64_t>(rng() % 2000) - 1000;
      const int frac = static_cast<int>(rng() % 1000);
      std::string text = std::to_string(units) + "." + std::to_string(frac);
      return tot::CellValue::number(*tot::Decimal::parse(text));
    }
    case 3:
    case 4:
    case 5:
      return tot::CellValue::number(static_cast<std::int64_t>(rng() % 200) - 100);
    default:
      return tot::CellValue::text(random_word(rng));
  }
}

inline tot::TableSet random_table_set(std::mt19937_64& rng,
                                      const TableGenOptions& options = {}) {
  tot::TableSet ts;
  const std::size_t n_tables = 1 + rng() % options.max_tables;
  for (std::size_t t = 0; t < n_tables; ++t) {
    tot::Table table;
    table.name = "t" + std::to_string(t);
    const std::size_t n_cols = 1 + rng() % options.max_cols;
    for (std::size_t c = 0; c < n_cols; ++c) table.columns.push_back("c" + std::to_string(c));
    const std::size_t n_rows = rng() % (options.max_rows + 1);
    for (std::size_t r = 0; r < n_rows; ++r) {
      std::vector<tot::CellValue> row;
      for (std::size_t c = 0; c < n_cols; ++c) row.push_back(random_cell(rng));
      table.rows.push_back(std::move(row));
    }
    ts.tables.push_back(std::move(table));
  }
  return ts;
}

// A valid random call for `ts`: names and indices are drawn from what the
// tables actually contain, so apply_* must succeed.
inline tot::OperationCall random_valid_call(std::mt19937_64& rng, const tot::TableSet& ts) {
  auto random_table = [&]() -> const tot::Table& {
    return ts.tables[rng() % ts.tables.size()];
  };
  while (true) {
    switch (rng() % 6) {
      case 0: {
        std::vector<std::string> names;
        for (const tot::Table& t : ts.tables) {
          if (names.empty() || rng() % 2 == 0) names.push_back(t.name);
        }
        return tot::OperationCall::select_table(std::move(names));
      }
      case 1: {
        std::size_t max_rows = 0;
        for (const tot::Table& t : ts.tables) max_rows = std::max(max_rows, t.n_rows());
        if (max_rows == 0) continue;
        std::vector<std::size_t> indices;
        const std::size_t want = 1 + rng() % max_rows;
        for (std::size_t i = 0; i < max_rows && indices.size() < want; ++i) {
          if (rng() % 2 == 0) indices.push_back(i);
        }
        if (indices.empty()) indices.push_back(rng() % max_rows);
        if (rng() % 2 == 0) {
          std::shuffle(indices.begin(), indices.end(), rng);
        }
        return tot::OperationCall::select_row(std::move(indices));
      }
      case 2: {
        const tot::Table& t = random_table();
        std::vector<std::string> cols;
        for (const std::string& c : t.columns) {
          if (cols.empty() || rng() % 2 == 0) cols.push_back(c);
        }
        return tot::OperationCall::select_col(std::move(cols));
      }
      case 3: {
        const tot::Table& t = random_table();
        std::vector<std::string> cols;
        for (const std::string& c : t.columns) {
          if (cols.empty() || rng() % 3 == 0) cols.push_back(c);
        }
        return tot::OperationCall::count(std::move(cols));
      }
      case 4: {
        const tot::Table& t = random_table();
        std::vector<tot::SortKey> keys;
        for (const std::string& c : t.columns) {
          if (keys.empty() || rng() % 3 == 0) {
            keys.push_back({c, rng() % 2 == 0 ? tot::SortOrder::Asc : tot::SortOrder::Desc});
          }
        }
        return tot::OperationCall::sort(std::move(keys));
      }
      default: {
        const tot::Table& t = random_table();
        const std::string column = t.columns[rng() % t.columns.size()];
        static const std::vector<tot::Comparator> comparators = {
            tot::Comparator::Eq, tot::Comparator::Ne, tot::Comparator::Gt,
            tot::Comparator::Ge, tot::Comparator::Lt, tot::Comparator::Le,
            tot::Comparator::Contains};
        const tot::Comparator cmp = comparators[rng() % comparators.size()];
        std::string value;
        if (!t.rows.empty() && rng() % 2 == 0) {
          const auto idx = *t.column_index(column);
          value = t.rows[rng() % t.rows.size()][idx].render();
        } else {
          value = rng() % 2 == 0 ? random_word(rng)
                                 : std::to_string(static_cast<int>(rng() % 100) - 50);
        }
        return tot::OperationCall::filter(column, cmp, value);
      }
    }
  }
}

}  // namespace tot_test
