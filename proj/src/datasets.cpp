#include "tot/datasets.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace tot {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CellValue cell_from_json(const ordered_json& value) {
  if (value.is_null()) return CellValue::missing();
  if (value.is_number_integer()) {
    return CellValue::number(value.get<std::int64_t>());
  }
  if (value.is_number_float()) {
    // Render through the default JSON representation, then re-parse; keeps
    // the cell an exact decimal.
    const std::string rendered = value.dump();
    if (auto d = Decimal::parse(rendered)) return CellValue::number(std::move(*d));
    return CellValue::text(rendered);
  }
  if (value.is_boolean()) return CellValue::text(value.get<bool>() ? "true" : "false");
  if (value.is_string()) return CellValue::from_field(value.get<std::string>());
  return CellValue::text(value.dump());
}

// Scalar JSON object -> one-row table, columns in file order.
Table table_from_object(const std::string& name, const ordered_json& obj) {
  Table t;
  t.name = name;
  std::vector<CellValue> row;
  for (const auto& [key, value] : obj.items()) {
    t.columns.push_back(key);
    row.push_back(cell_from_json(value));
  }
  t.rows.push_back(std::move(row));
  t.validate();
  return t;
}

// Array of JSON objects -> table, one row per object. Column set is the
// union of keys in first-appearance order; absent keys become missing.
Table table_from_array(const std::string& name, const ordered_json& arr) {
  Table t;
  t.name = name;
  for (const auto& obj : arr) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (std::find(t.columns.begin(), t.columns.end(), key) == t.columns.end()) {
        t.columns.push_back(key);
      }
    }
  }
  for (const auto& obj : arr) {
    std::vector<CellValue> row;
    row.reserve(t.columns.size());
    for (const std::string& col : t.columns) {
      if (obj.contains(col)) {
        row.push_back(cell_from_json(obj.at(col)));
      } else {
        row.push_back(CellValue::missing());
      }
    }
    t.rows.push_back(std::move(row));
  }
  t.validate();
  return t;
}

Table section_table(const ordered_json& record, const std::string& name) {
  if (!record.contains(name)) throw MissingSection(name);
  const auto& section = record.at(name);
  if (section.is_array()) return table_from_array(name, section);
  if (section.is_object()) return table_from_object(name, section);
  throw DatasetError("section '" + name + "' must be a JSON object or array");
}

Table reorder_table_columns(Table table, const std::vector<std::string>& order) {
  std::vector<std::size_t> permutation;
  std::vector<bool> taken(table.columns.size(), false);
  for (const std::string& col : order) {
    if (auto idx = table.column_index(col)) {
      if (!taken[*idx]) {
        permutation.push_back(*idx);
        taken[*idx] = true;
      }
    }
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (!taken[i]) permutation.push_back(i);
  }
  Table out;
  out.name = std::move(table.name);
  for (std::size_t idx : permutation) out.columns.push_back(table.columns[idx]);
  for (const auto& row : table.rows) {
    std::vector<CellValue> cells;
    cells.reserve(permutation.size());
    for (std::size_t idx : permutation) cells.push_back(row[idx]);
    out.rows.push_back(std::move(cells));
  }
  return out;
}

}  // namespace

MissingGroupColumn::MissingGroupColumn(const std::string& column, const std::string& table)
    : DatasetError("group column '" + column + "' not found in table '" + table + "'") {}

MissingSection::MissingSection(const std::string& name)
    : DatasetError("record is missing section '" + name + "'") {}

DatasetProfile DatasetProfile::load(const std::string& path) {
  return from_json_text(read_file(path));
}

DatasetProfile DatasetProfile::from_json_text(const std::string& json_text) {
  const auto doc = ordered_json::parse(json_text);
  DatasetProfile profile;
  profile.name = doc.at("name").get<std::string>();
  profile.sport = doc.at("sport").get<std::string>();
  if (doc.contains("table_descriptions")) {
    for (const auto& [table, cols] : doc.at("table_descriptions").items()) {
      std::vector<std::pair<std::string, std::string>> entries;
      for (const auto& [col, desc] : cols.items()) {
        entries.emplace_back(col, desc.get<std::string>());
      }
      profile.table_descriptions.emplace_back(table, std::move(entries));
    }
  }
  if (doc.contains("column_order")) {
    for (const auto& [table, cols] : doc.at("column_order").items()) {
      profile.column_order[table] = cols.get<std::vector<std::string>>();
    }
  }
  if (doc.contains("table_order")) {
    profile.table_order = doc.at("table_order").get<std::vector<std::string>>();
  }
  profile.ie_example = doc.value("ie_example", "");
  profile.preprocess = doc.value("preprocess", "none");
  if (doc.contains("shuttleset")) {
    const auto& s = doc.at("shuttleset");
    if (s.contains("group_columns")) {
      profile.shuttleset.group_columns = s.at("group_columns").get<std::vector<std::string>>();
    }
    if (s.contains("columns")) {
      profile.shuttleset.columns = s.at("columns").get<std::vector<std::string>>();
    }
    if (s.contains("renames")) {
      for (const auto& [from, to] : s.at("renames").items()) {
        profile.shuttleset.renames[from] = to.get<std::string>();
      }
    }
  }
  if (doc.contains("mlb") && doc.at("mlb").contains("stat_columns")) {
    profile.mlb.stat_columns = doc.at("mlb").at("stat_columns").get<std::vector<std::string>>();
  }
  profile.validate();
  return profile;
}

void DatasetProfile::validate() const {
  if (name.empty()) throw DatasetError("profile: name is required");
  if (sport.empty()) throw DatasetError("profile: sport is required");
  if (preprocess != "none" && preprocess != "shuttleset" && preprocess != "rotowire" &&
      preprocess != "mlb") {
    throw DatasetError("profile: unknown preprocess kind: " + preprocess);
  }
}

std::string DatasetProfile::table_description_text() const {
  std::string out;
  for (std::size_t i = 0; i < table_descriptions.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "## " + table_descriptions[i].first;
    for (const auto& [col, desc] : table_descriptions[i].second) {
      out += "\n- " + col + ": " + desc;
    }
  }
  return out;
}

SplitResult split(std::vector<Sample> samples, const SplitSpec& spec) {
  if (spec.train < 0 || spec.validation < 0 || spec.test < 0 ||
      spec.train + spec.validation + spec.test <= 0) {
    throw DatasetError("split: ratios must be non-negative and sum > 0");
  }
  const std::size_t n = samples.size();
  const std::uint64_t sum = static_cast<std::uint64_t>(spec.train) + spec.validation + spec.test;
  const std::size_t n_val = static_cast<std::size_t>(n * static_cast<std::uint64_t>(spec.validation) / sum);
  const std::size_t n_test = static_cast<std::size_t>(n * static_cast<std::uint64_t>(spec.test) / sum);
  const std::size_t n_train = n - n_val - n_test;
  if ((spec.train > 0 && n_train == 0) || (spec.validation > 0 && n_val == 0) ||
      (spec.test > 0 && n_test == 0)) {
    throw TooFewSamples("split: " + std::to_string(n) + " samples cannot fill ratio " +
                        std::to_string(spec.train) + ":" + std::to_string(spec.validation) +
                        ":" + std::to_string(spec.test));
  }

  // Hand-rolled Fisher-Yates: std::shuffle's output is implementation
  // defined, and the partition must be reproducible across platforms.
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(samples[i - 1], samples[j]);
  }

  SplitResult result;
  result.train.assign(std::make_move_iterator(samples.begin()),
                      std::make_move_iterator(samples.begin() + n_train));
  result.validation.assign(std::make_move_iterator(samples.begin() + n_train),
                           std::make_move_iterator(samples.begin() + n_train + n_val));
  result.test.assign(std::make_move_iterator(samples.begin() + n_train + n_val),
                     std::make_move_iterator(samples.end()));
  return result;
}

TableSet preprocess_shuttleset(const TableSet& raw_tables, const ShuttlesetSpec& spec) {
  TableSet out;
  for (const Table& t : raw_tables.tables) {
    std::vector<std::size_t> group_idx;
    for (const std::string& col : spec.group_columns) {
      const auto idx = t.column_index(col);
      if (!idx) throw MissingGroupColumn(col, t.name);
      group_idx.push_back(*idx);
    }

    // Last row wins per group; groups keep first-appearance order.
    std::vector<std::string> group_order;
    std::map<std::string, std::size_t> last_row;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::string key;
      for (std::size_t idx : group_idx) key += t.rows[r][idx].key() + "\x1f";
      if (!last_row.count(key)) group_order.push_back(key);
      last_row[key] = r;
    }

    std::vector<std::size_t> keep_cols;
    std::vector<std::string> out_columns;
    const auto& wanted = spec.columns.empty() ? t.columns : spec.columns;
    for (const std::string& col : wanted) {
      const auto idx = t.column_index(col);
      if (!idx) throw DatasetError("configured column '" + col + "' not found in table '" + t.name + "'");
      keep_cols.push_back(*idx);
      const auto rename = spec.renames.find(col);
      out_columns.push_back(rename == spec.renames.end() ? col : rename->second);
    }

    Table reduced;
    reduced.name = t.name;
    reduced.columns = std::move(out_columns);
    for (const std::string& key : group_order) {
      const auto& row = t.rows[last_row.at(key)];
      std::vector<CellValue> cells;
      cells.reserve(keep_cols.size());
      for (std::size_t idx : keep_cols) cells.push_back(row[idx]);
      reduced.rows.push_back(std::move(cells));
    }
    reduced.validate();
    out.tables.push_back(std::move(reduced));
  }
  out.validate();
  return out;
}

TableSet preprocess_rotowire(const std::string& record_json_text,
                             const DatasetProfile& profile) {
  const auto record = ordered_json::parse(record_json_text);
  TableSet ts;
  for (const char* name : {"game", "home_line", "vis_line", "box_score"}) {
    ts.tables.push_back(section_table(record, name));
  }
  ts.validate();
  return apply_profile_order(std::move(ts), profile);
}

TableSet preprocess_mlb(const std::string& record_json_text,
                        const DatasetProfile& profile) {
  const auto record = ordered_json::parse(record_json_text);
  TableSet ts;
  for (const char* name : {"game", "home_line", "vis_line", "box_score", "play_by_play"}) {
    ts.tables.push_back(section_table(record, name));
  }

  // Drop box_score rows that carry no stat at all.
  for (Table& t : ts.tables) {
    if (t.name != "box_score") continue;
    std::vector<std::size_t> stat_idx;
    if (profile.mlb.stat_columns.empty()) {
      for (std::size_t i = 0; i < t.columns.size(); ++i) stat_idx.push_back(i);
    } else {
      for (const std::string& col : profile.mlb.stat_columns) {
        if (auto idx = t.column_index(col)) stat_idx.push_back(*idx);
      }
    }
    std::vector<std::vector<CellValue>> kept;
    for (auto& row : t.rows) {
      const bool all_missing = std::all_of(stat_idx.begin(), stat_idx.end(),
                                           [&](std::size_t i) { return row[i].is_missing(); });
      if (!all_missing) kept.push_back(std::move(row));
    }
    t.rows = std::move(kept);
  }
  ts.validate();
  return apply_profile_order(std::move(ts), profile);
}

TableSet apply_profile_order(TableSet ts, const DatasetProfile& profile) {
  if (!profile.table_order.empty()) {
    TableSet reordered;
    std::vector<bool> taken(ts.tables.size(), false);
    for (const std::string& name : profile.table_order) {
      for (std::size_t i = 0; i < ts.tables.size(); ++i) {
        if (!taken[i] && ts.tables[i].name == name) {
          reordered.tables.push_back(std::move(ts.tables[i]));
          taken[i] = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < ts.tables.size(); ++i) {
      if (!taken[i]) reordered.tables.push_back(std::move(ts.tables[i]));
    }
    ts = std::move(reordered);
  }
  for (Table& t : ts.tables) {
    const auto it = profile.column_order.find(t.name);
    if (it != profile.column_order.end()) {
      t = reorder_table_columns(std::move(t), it->second);
    }
  }
  return ts;
}

std::vector<Sample> load_samples(const std::string& dataset_dir,
                                 const DatasetProfile& profile) {
  std::vector<Sample> samples;
  const fs::path root(dataset_dir);

  const fs::path jsonl = root / "samples.jsonl";
  if (fs::exists(jsonl)) {
    std::ifstream in(jsonl);
    if (!in) throw DatasetError("cannot open " + jsonl.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto record = ordered_json::parse(line);
      Sample sample;
      sample.id = record.contains("id") ? record.at("id").get<std::string>()
                                        : std::to_string(line_no);
      sample.gold_report = record.value("report", "");
      if (profile.preprocess == "rotowire") {
        sample.tables = preprocess_rotowire(line, profile);
      } else if (profile.preprocess == "mlb") {
        sample.tables = preprocess_mlb(line, profile);
      } else {
        throw DatasetError("samples.jsonl requires preprocess rotowire or mlb");
      }
      if (sample.gold_report.empty()) {
        throw DatasetError("sample '" + sample.id + "' has an empty report");
      }
      samples.push_back(std::move(sample));
    }
    return samples;
  }

  std::vector<fs::path> sample_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "tables")) {
      sample_dirs.push_back(entry.path());
    }
  }
  std::sort(sample_dirs.begin(), sample_dirs.end());

  for (const fs::path& dir : sample_dirs) {
    Sample sample;
    sample.id = dir.filename().string();

    std::vector<fs::path> csv_files;
    for (const auto& entry : fs::directory_iterator(dir / "tables")) {
      if (entry.path().extension() == ".csv") csv_files.push_back(entry.path());
    }
    std::sort(csv_files.begin(), csv_files.end());
    for (const fs::path& csv : csv_files) {
      sample.tables.tables.push_back(
          parse_csv_table(read_file(csv), csv.stem().string()));
    }
    sample.tables.validate();

    if (profile.preprocess == "shuttleset") {
      sample.tables = preprocess_shuttleset(sample.tables, profile.shuttleset);
    }
    sample.tables = apply_profile_order(std::move(sample.tables), profile);

    const fs::path report = dir / "report.txt";
    if (!fs::exists(report)) throw DatasetError("missing gold report: " + report.string());
    sample.gold_report = read_file(report);
    while (!sample.gold_report.empty() &&
           (sample.gold_report.back() == '\n' || sample.gold_report.back() == '\r')) {
      sample.gold_report.pop_back();
    }
    if (sample.gold_report.empty()) {
      throw DatasetError("sample '" + sample.id + "' has an empty report");
    }
    if (sample.tables.tables.empty()) {
      throw DatasetError("sample '" + sample.id + "' has no tables");
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace tot
