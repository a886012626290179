#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tot/table.hpp"

namespace tot {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingGroupColumn : DatasetError {
  explicit MissingGroupColumn(const std::string& column, const std::string& table);
};
struct MissingSection : DatasetError {
  explicit MissingSection(const std::string& name);
};
struct TooFewSamples : DatasetError {
  using DatasetError::DatasetError;
};

/// Rally-table preprocessing settings (stroke-level input).
struct ShuttlesetSpec {
  std::vector<std::string> group_columns = {"set", "rally"};
  std::vector<std::string> columns;  // kept source columns, in output order
  std::map<std::string, std::string> renames;
};

struct MlbSpec {
  /// box_score rows with every one of these columns missing are dropped.
  /// Empty means: consider all box_score columns.
  std::vector<std::string> stat_columns;
};

/// Everything dataset-specific that prompts and preprocessing need. All of it
/// lives in <dataset>/profile.json, never in code.
struct DatasetProfile {
  std::string name;
  std::string sport;
  /// table -> [(column, description)], in profile file order.
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
      table_descriptions;
  std::map<std::string, std::vector<std::string>> column_order;
  std::vector<std::string> table_order;
  std::string ie_example;
  std::string preprocess = "none";  // none | shuttleset | rotowire | mlb
  ShuttlesetSpec shuttleset;
  MlbSpec mlb;

  static DatasetProfile load(const std::string& path);
  static DatasetProfile from_json_text(const std::string& json_text);

  /// Prompt binding text: one "## table" block per table with one
  /// "- column: description" line per column.
  std::string table_description_text() const;
  void validate() const;
};

struct Sample {
  std::string id;
  TableSet tables;
  std::string gold_report;
};

struct SplitSpec {
  int train = 40;
  int validation = 9;
  int test = 9;
  std::uint64_t seed = 0;
};

struct SplitResult {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
};

/// Deterministic seeded shuffle then contiguous slicing by exact ratio
/// counts, remainder to train. Throws TooFewSamples when a nonzero ratio
/// would receive an empty split.
SplitResult split(std::vector<Sample> samples, const SplitSpec& spec);

/// Keeps the last stroke row of each rally group, projects to the configured
/// columns, applies renames. One output row per input group, groups in
/// first-appearance order.
TableSet preprocess_shuttleset(const TableSet& raw_tables, const ShuttlesetSpec& spec);

/// JSON record -> {game, home_line, vis_line, box_score}; scalar sections
/// become one-row tables, box_score rows are players.
TableSet preprocess_rotowire(const std::string& record_json_text,
                             const DatasetProfile& profile);

/// JSON record -> {game, home_line, vis_line, box_score, play_by_play};
/// box_score rows that are missing in every stat column are dropped.
TableSet preprocess_mlb(const std::string& record_json_text,
                        const DatasetProfile& profile);

/// Loads <dataset_dir>/<sample_id>/tables/*.csv + report.txt (directory
/// layout) or <dataset_dir>/samples.jsonl (one record per match), applying
/// the profile's preprocessing and column ordering.
std::vector<Sample> load_samples(const std::string& dataset_dir,
                                 const DatasetProfile& profile);

/// Applies profile table_order / column_order to a loaded sample.
TableSet apply_profile_order(TableSet ts, const DatasetProfile& profile);

}  // namespace tot
