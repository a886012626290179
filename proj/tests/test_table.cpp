#include "tot/table.hpp"

#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace tot;
using tot_test::make_table;

namespace {

TableSet single(Table t) {
  TableSet ts;
  ts.tables.push_back(std::move(t));
  return ts;
}

// Extracts the rendered cell sequence (headers excluded) from each format's
// output, so the cross-format content property can be checked.
std::vector<std::string> cell_sequence(const Table& t) {
  std::vector<std::string> cells;
  for (const auto& row : t.rows) {
    for (const CellValue& cell : row) cells.push_back(cell.render());
  }
  return cells;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

TEST_CASE("minimal table renders per format") {
  const TableSet ts = single(make_table("rally", {"winner"}, {{"A"}}));
  CHECK(render_table_set(ts, TableFormat::Csv, false) == "## rally\nwinner\nA");
  CHECK(render_table_set(ts, TableFormat::Csv, true) == "## rally\nrow,winner\n0,A");
  CHECK(render_table_set(ts, TableFormat::Pipe, true) == "## rally\nrow|winner\n0|A");
}

TEST_CASE("tables are separated by one blank line") {
  TableSet ts;
  ts.tables.push_back(make_table("a", {"x"}, {{"1"}}));
  ts.tables.push_back(make_table("b", {"y"}, {}));
  CHECK(render_table_set(ts, TableFormat::Csv, false) == "## a\nx\n1\n\n## b\ny");
}

TEST_CASE("markdown and html renderings") {
  const TableSet ts = single(make_table("rally", {"winner"}, {{"A"}}));
  CHECK(render_table_set(ts, TableFormat::Markdown, true) ==
        "## rally\n| row | winner |\n| --- | --- |\n| 0 | A |");
  CHECK(render_table_set(ts, TableFormat::Html, true) ==
        "## rally\n<table>\n<tr><th>row</th><th>winner</th></tr>\n"
        "<tr><td>0</td><td>A</td></tr>\n</table>");
}

TEST_CASE("missing renders as N/A in all four formats") {
  Table t = make_table("t", {"a"}, {{"N/A"}});
  REQUIRE(t.rows[0][0].is_missing());
  for (TableFormat format : {TableFormat::Csv, TableFormat::Pipe, TableFormat::Markdown,
                             TableFormat::Html}) {
    CHECK(render_table_set(single(t), format, false).find("N/A") != std::string::npos);
  }
}

TEST_CASE("pipe rendering rejects cells containing the delimiter") {
  const TableSet ts = single(make_table("t", {"a"}, {{"x|y"}}));
  CHECK_THROWS_AS(render_table_set(ts, TableFormat::Pipe, false), PipeInCell);
  CHECK_NOTHROW(render_table_set(ts, TableFormat::Csv, false));
  // Markdown escapes instead.
  CHECK(render_table_set(ts, TableFormat::Markdown, false).find("x\\|y") != std::string::npos);
}

TEST_CASE("parse_csv_table reads the documented grammar") {
  SUBCASE("types are inferred") {
    const Table t = parse_csv_table("a,b\n1,x", "t");
    CHECK(t.columns == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == CellValue::number(1));
    CHECK(t.rows[0][1] == CellValue::text("x"));
  }
  SUBCASE("N/A and empty fields become missing") {
    const Table t = parse_csv_table("a\nN/A", "t");
    CHECK(t.rows[0][0].is_missing());
    const Table t2 = parse_csv_table("a,b\n,x", "t2");
    CHECK(t2.rows[0][0].is_missing());
  }
  SUBCASE("ragged rows report the line number") {
    try {
      parse_csv_table("a,b\n1", "t");
      FAIL("expected RaggedRow");
    } catch (const RaggedRow& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("empty input and empty column names are rejected") {
    CHECK_THROWS_AS(parse_csv_table("", "t"), EmptyHeader);
    CHECK_THROWS_AS(parse_csv_table("a,,c\n1,2,3", "t"), EmptyHeader);
  }
  SUBCASE("quoted fields stay text and support embedded syntax") {
    const Table t = parse_csv_table("a,b\n\"1\",\"x,\"\"y\"\"\"", "t");
    CHECK(t.rows[0][0] == CellValue::text("1"));
    CHECK(t.rows[0][1] == CellValue::text("x,\"y\""));
  }
  SUBCASE("quoted fields may contain newlines") {
    const Table t = parse_csv_table("a\n\"line1\nline2\"", "t");
    CHECK(t.rows[0][0] == CellValue::text("line1\nline2"));
  }
  SUBCASE("duplicate columns are rejected") {
    CHECK_THROWS_AS(parse_csv_table("a,a\n1,2", "t"), TableError);
  }
}

TEST_CASE("csv render/parse round-trip is exact on adversarial cells") {
  Table t;
  t.name = "nasty";
  t.columns = {"c0", "c1"};
  t.rows.push_back({CellValue::text("plain"), CellValue::number(*Decimal::parse("1.5"))});
  t.rows.push_back({CellValue::text("has,comma"), CellValue::text("has\"quote")});
  t.rows.push_back({CellValue::text("123"), CellValue::text("N/A")});
  t.rows.push_back({CellValue::missing(), CellValue::text("")});
  t.rows.push_back({CellValue::text("line\nbreak"), CellValue::number(-7)});
  t.validate();

  const std::string rendered = render_table_set(single(t), TableFormat::Csv, false);
  const std::string body = rendered.substr(rendered.find('\n') + 1);
  const Table parsed = parse_csv_table(body, "nasty");
  CHECK(tot_test::make_table("x", {"y"}, {}).name == "x");  // sanity for helper
  REQUIRE(parsed.columns == t.columns);
  REQUIRE(parsed.rows.size() == t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(parsed.rows[r] == t.rows[r]);
  }
}

TEST_CASE("csv round-trip property on random tables") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    const TableSet ts = tot_test::random_table_set(rng);
    for (const Table& t : ts.tables) {
      const std::string rendered = render_table_set(single(t), TableFormat::Csv, false);
      const std::string body = rendered.substr(rendered.find('\n') + 1);
      const Table parsed = parse_csv_table(body, t.name);
      CHECK(parsed.columns == t.columns);
      REQUIRE(parsed.rows.size() == t.rows.size());
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(parsed.rows[r] == t.rows[r]);
      }
    }
  }
}

TEST_CASE("renderings are injective on cell-content differences") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    TableSet ts = tot_test::random_table_set(rng);
    bool has_cell = false;
    for (const Table& t : ts.tables) has_cell |= !t.rows.empty();
    if (!has_cell) continue;

    TableSet mutated = ts;
    // Flip one cell to a rendering-distinct value.
    std::size_t table_idx = rng() % mutated.tables.size();
    while (mutated.tables[table_idx].rows.empty()) {
      table_idx = (table_idx + 1) % mutated.tables.size();
    }
    Table& t = mutated.tables[table_idx];
    auto& cell = t.rows[rng() % t.rows.size()][rng() % t.columns.size()];
    const std::string before = cell.render();
    cell = cell.render() == "changed" ? CellValue::text("changed2")
                                      : CellValue::text("changed");
    REQUIRE(cell.render() != before);

    for (TableFormat format : {TableFormat::Csv, TableFormat::Pipe, TableFormat::Markdown,
                               TableFormat::Html}) {
      CHECK(render_table_set(ts, format, false) != render_table_set(mutated, format, false));
    }
  }
}

TEST_CASE("csv distinguishes typed cells with identical renderings") {
  const TableSet number = single(make_table("t", {"a"}, {{"1"}}));
  TableSet text = number;
  text.tables[0].rows[0][0] = CellValue::text("1");
  CHECK(render_table_set(number, TableFormat::Csv, false) !=
        render_table_set(text, TableFormat::Csv, false));
}

TEST_CASE("all four formats carry the same cell content") {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 100; ++iter) {
    const TableSet ts = tot_test::random_table_set(rng);
    for (const Table& t : ts.tables) {
      const std::vector<std::string> want = cell_sequence(t);

      // CSV: reparse and re-render each cell.
      {
        const std::string rendered = render_table_set(single(t), TableFormat::Csv, false);
        const Table parsed = parse_csv_table(rendered.substr(rendered.find('\n') + 1), t.name);
        CHECK(cell_sequence(parsed) == want);
      }
      // PIPE: split rows on the delimiter.
      {
        const std::string rendered = render_table_set(single(t), TableFormat::Pipe, false);
        std::vector<std::string> cells;
        const auto lines = split_lines(rendered);
        for (std::size_t i = 2; i < lines.size(); ++i) {
          std::size_t start = 0;
          while (true) {
            const std::size_t bar = lines[i].find('|', start);
            if (bar == std::string::npos) {
              cells.push_back(lines[i].substr(start));
              break;
            }
            cells.push_back(lines[i].substr(start, bar - start));
            start = bar + 1;
          }
        }
        CHECK(cells == want);
      }
      // Markdown: strip the frame and split on the padded delimiter.
      {
        const std::string rendered =
            render_table_set(single(t), TableFormat::Markdown, false);
        std::vector<std::string> cells;
        const auto lines = split_lines(rendered);
        for (std::size_t i = 3; i < lines.size(); ++i) {  // skip name/header/dashes
          std::string body = lines[i].substr(2, lines[i].size() - 4);
          std::size_t start = 0;
          while (true) {
            const std::size_t bar = body.find(" | ", start);
            if (bar == std::string::npos) {
              cells.push_back(body.substr(start));
              break;
            }
            cells.push_back(body.substr(start, bar - start));
            start = bar + 3;
          }
        }
        CHECK(cells == want);
      }
      // HTML: harvest <td> spans.
      {
        const std::string rendered = render_table_set(single(t), TableFormat::Html, false);
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while ((pos = rendered.find("<td>", pos)) != std::string::npos) {
          const std::size_t end = rendered.find("</td>", pos);
          std::string cell = rendered.substr(pos + 4, end - pos - 4);
          // Undo the HTML escaping.
          for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{
                   {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}}) {
            std::size_t at = 0;
            while ((at = cell.find(from, at)) != std::string::npos) {
              cell.replace(at, from.size(), to);
              at += to.size();
            }
          }
          cells.push_back(cell);
          pos = end;
        }
        CHECK(cells == want);
      }
    }
  }
}

TEST_CASE("table format names round-trip and reject unknowns") {
  CHECK(parse_table_format("CSV") == TableFormat::Csv);
  CHECK(parse_table_format("markdown") == TableFormat::Markdown);
  CHECK(parse_table_format("HtMl") == TableFormat::Html);
  CHECK_FALSE(parse_table_format("tsv").has_value());
  CHECK(table_format_name(TableFormat::Pipe) == "PIPE");
}

TEST_CASE("table set invariants are validated") {
  TableSet ts;
  ts.tables.push_back(make_table("a", {"x"}, {}));
  ts.tables.push_back(make_table("a", {"y"}, {}));
  CHECK_THROWS_AS(ts.validate(), DuplicateTableName);
}
