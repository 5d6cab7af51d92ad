#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "sheafctx/catalog.hpp"
#include "sheafctx/io.hpp"

using namespace sheafctx;

namespace {

const char* const kChsh = R"({
  "scenario": {
    "measurements": ["A", "A'", "B", "B'"],
    "outcomes": ["0", "1"],
    "cover": [["A", "B"], ["A", "B'"], ["A'", "B"], ["A'", "B'"]]
  },
  "model": {
    "semiring": "probability",
    "rows": [
      {"context": ["A", "B"], "weights": {"00": "1/2", "11": "1/2"}},
      {"context": ["A", "B'"], "weights": {"00": "3/8", "01": "1/8", "10": "1/8", "11": "3/8"}},
      {"context": ["A'", "B"], "weights": {"00": "3/8", "01": "1/8", "10": "1/8", "11": "3/8"}},
      {"context": ["A'", "B'"], "weights": {"00": "1/8", "01": "3/8", "10": "3/8", "11": "1/8"}}
    ]
  }
})";

std::string with_rows(const std::string& rows, const std::string& semiring = "probability") {
  return R"({"scenario": {"measurements": ["A", "B"], "outcomes": ["0", "1"], "cover": [["A", "B"]]},
 "model": {"semiring": ")" +
         semiring + R"(", "rows": [)" + rows + "]}}";
}

ParseError parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, 0, "");
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CHSH file") {
    CHECK(parse_model(kChsh) == fixtures::chsh());
  }

  TEST_CASE("row sum 7/8 is rejected") {
    try {
      parse_model(with_rows(R"({"context": ["A", "B"], "weights": {"00": "1/2", "01": "3/8"}})"));
      FAIL("expected a ModelError");
    } catch (const ModelError& e) {
      CHECK(e.kind() == ModelError::Kind::NormalizationError);
    }
  }

  TEST_CASE("weights accept integers and reversed context order") {
    const auto e = parse_model(with_rows(R"({"context": ["B", "A"], "weights": {"01": 1}})", "boolean"));
    // "01" means B = 0, A = 1
    CHECK(e.row(0).support() == std::vector<AssignmentIndex>{2});
  }

  TEST_CASE("syntax errors carry positions") {
    const auto e = parse_error("{\"scenario\": [1,\n 2,,]}");
    CHECK(e.line() == 2);
    CHECK(e.column() == 4);
    CHECK(std::string(e.what()).find("parse error at line") == std::string::npos);
  }

  TEST_CASE("schema errors carry pointers") {
    const auto bad_weight = parse_error(with_rows(R"({"context": ["A", "B"], "weights": {"00": "x"}})"));
    CHECK(bad_weight.pointer() == "/model/rows/0/weights/00");
    CHECK(bad_weight.line() == 2);

    const auto bad_key = parse_error(with_rows(R"({"context": ["A", "B"], "weights": {"0": "1"}})"));
    CHECK(bad_key.pointer().starts_with("/model/rows/0/weights"));

    const auto missing = parse_error(R"({"scenario": {"measurements": ["A"], "outcomes": ["0"]}, "model": {}})");
    CHECK(missing.pointer() == "/scenario");

    const auto semiring = parse_error(with_rows("", "tropical"));
    CHECK(semiring.pointer() == "/model/semiring");

    const auto context = parse_error(with_rows(R"({"context": ["A", "Z"], "weights": {}})"));
    CHECK(context.pointer().starts_with("/model/rows/0/context"));
  }

  TEST_CASE("scenario errors surface") {
    CHECK_THROWS_AS(parse_model(R"({"scenario": {"measurements": ["A", "B"], "outcomes": ["0"], "cover": [["A"]]},
      "model": {"semiring": "boolean", "rows": []}})"),
                    std::exception);
  }

  TEST_CASE("round trip on every catalog model") {
    for (const auto& entry : catalog()) {
      CAPTURE(entry.name);
      const auto text = render_json(entry.model);
      CHECK(parse_model(text) == entry.model);
      CHECK(render_json(parse_model(text)) == text);
    }
  }

  TEST_CASE("csv rendering") {
    const auto csv = render_csv(fixtures::triangle());
    CHECK(csv.starts_with("context,assignment,value\nA B,00,0\nA B,01,1\n"));
    std::size_t lines = 0;
    for (const char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 12);
    const auto chsh = render_csv(fixtures::chsh());
    CHECK(chsh.find("A' B',01,3/8\n") != std::string::npos);
  }

  TEST_CASE("table rendering") {
    CHECK(render_table(fixtures::triangle()) ==
          "     00  01  10  11\n"
          "A B  0   1   1   0\n"
          "B C  0   1   1   0\n"
          "A C  0   1   1   0\n");
    CHECK(render_table(fixtures::chsh()) ==
          "       00   01   10   11\n"
          "A B    1/2  0    0    1/2\n"
          "A B'   3/8  1/8  1/8  3/8\n"
          "A' B   3/8  1/8  1/8  3/8\n"
          "A' B'  1/8  3/8  3/8  1/8\n");
    const auto mixed = validate_scenario({{"A", "B", "C"}, {"0", "1"}, {{"A", "B"}, {"C"}}});
    const std::vector<Distribution> rows{Distribution(Semiring::Boolean, Context{0, 1}, 2, {{0, 1}}),
                                         Distribution(Semiring::Boolean, Context{2}, 2, {{1, 1}})};
    CHECK(render_table(mixed, rows) ==
          "   0  1\n"
          "C  0  1\n"
          "\n"
          "     00  01  10  11\n"
          "A B  1   0   0   0\n");
  }

  TEST_CASE("files") {
    const auto path = std::filesystem::temp_directory_path() / "sheafctx_io_test.json";
    {
      std::ofstream out(path);
      out << kChsh;
    }
    CHECK(read_model_file(path) == fixtures::chsh());
    std::filesystem::remove(path);
    CHECK_THROWS(read_model_file(path));
  }
}
