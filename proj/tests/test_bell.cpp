#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sheafctx/bell.hpp"
#include "sheafctx/io.hpp"
#include "sheafctx/ksgen.hpp"

using namespace sheafctx;
using fixtures::bits;
using fixtures::table;

namespace {

const char* const kTriangleBell =
    "         00  01  10  11\n"
    "A@1 A@2  1   0   0   1\n"
    "A@1 B@2  0   1   1   0\n"
    "A@1 C@2  0   1   1   0\n"
    "B@1 A@2  0   1   1   0\n"
    "B@1 B@2  1   0   0   1\n"
    "B@1 C@2  0   1   1   0\n"
    "C@1 A@2  0   1   1   0\n"
    "C@1 B@2  0   1   1   0\n"
    "C@1 C@2  1   0   0   1\n";

}  // namespace

TEST_SUITE("bell") {
  TEST_CASE("codiagonal map") {
    const CodiagonalMap map(3, 2);
    CHECK(map.tagged(1, 1) == 4);
    CHECK(map.base_of(4) == 1);
    CHECK(map.site_of(4) == 1);
    CHECK(map.underline(Context{0, 3, 4}) == Context{0, 1});
    CHECK_THROWS_AS(map.tagged(3, 0), std::invalid_argument);

    // A@1 A@2
    CHECK(map.codiagonal_assignments(Context{0, 3}, 2).size() == 2);
    // A@1 B@2
    CHECK(map.codiagonal_assignments(Context{0, 4}, 2).size() == 4);
    const CodiagonalMap three(2, 3);
    // A@1 A@2 B@3
    CHECK(three.codiagonal_assignments(Context{0, 2, 5}, 2).size() == 4);

    const Assignment bad{Context{0, 3}, {0, 1}};
    CHECK_FALSE(map.is_codiagonal(bad));
    CHECK_THROWS_AS(map.underline(bad), std::invalid_argument);
    const Assignment good{Context{0, 3, 4}, {1, 1, 0}};
    CHECK(map.underline(good) == Assignment{Context{0, 1}, {1, 0}});
    CHECK(map.lift(map.underline(good), good.context) == good);
  }

  TEST_CASE("underline commutes with restriction") {
    const CodiagonalMap map(3, 3);
    for (const auto& s : map.codiagonal_assignments(Context{0, 1, 3, 5, 7}, 2)) {
      const Context v{1, 3, 7};
      CHECK(map.underline(s.restrict_to(v)) == map.underline(s).restrict_to(map.underline(v)));
    }
  }

  TEST_CASE("triangle Bell table") {
    const auto result = bellify(fixtures::triangle());
    REQUIRE(std::holds_alternative<BellModel>(result));
    const auto& bell = std::get<BellModel>(result);
    CHECK(render_table(bell.model) == kTriangleBell);
    CHECK(bell.structure.party_count() == 2);
    CHECK(bell.structure.max_settings() == 3);
    CHECK(is_strongly_contextual(bell.model));
    const auto check = global_section_bijection_check(fixtures::triangle(), bell);
    CHECK(check.holds);
    CHECK(check.base_sections == 0);
    CHECK(check.bell_sections == 0);
    CHECK(check.base_class == ContextualityClass::StronglyContextual);
    CHECK(check.bell_class == ContextualityClass::StronglyContextual);
  }

  TEST_CASE("one measurement on two sites") {
    const auto f = table({"M"}, {{"M"}}, Semiring::Boolean, {bits("10")});
    const auto bell = bell_construction(f, 2);
    REQUIRE(bell.model.rows().size() == 1);
    CHECK(bell.model.scenario().measurements() == std::vector<std::string>{"M@1", "M@2"});
    CHECK(bell.model.row(0).support() == std::vector<AssignmentIndex>{0});
    CHECK_THROWS_AS(bell_construction(f, 0), BellError);

    const auto g = table({"M", "N"}, {{"M"}, {"N"}}, Semiring::Boolean, {bits("10"), bits("01")});
    CHECK(bell_construction(g, 1).model.rows().size() == 2);
    CHECK_THROWS_AS(bell_construction(g, 2), BellError);
  }

  TEST_CASE("non-codiagonal assignments carry no weight") {
    const auto s = validate_scenario({{"A", "B", "C"}, {"0", "1"}, {{"A", "B"}, {"A", "C"}, {"B", "C"}}});
    const auto f = gen::product_model(s, {Rational(1, 3), Rational(1, 2), Rational(3, 4)});
    const auto bell = bell_construction(f, 2);
    CHECK(bell.model.semiring() == Semiring::Probability);
    for (std::size_t i = 0; i < bell.model.rows().size(); ++i) {
      const auto& c = bell.model.scenario().cover()[i];
      for (const auto& [index, w] : bell.model.row(i).weights()) {
        const Assignment a{c, decode_assignment(index, c.size(), 2)};
        CHECK(bell.map.is_codiagonal(a));
        CHECK(w == context_distribution(f, bell.map.underline(c)).weight(bell.map.underline(a)));
      }
    }
    const auto check = global_section_bijection_check(f, bell);
    CHECK(check.holds);
    CHECK(check.base_class == ContextualityClass::NonContextual);
    CHECK(check.bell_class == ContextualityClass::NonContextual);
    CHECK(check.base_sections == 8);
  }

  TEST_CASE("uniform full-support model") {
    const auto f = table({"A", "B", "C"}, {{"A", "B"}, {"A", "C"}, {"B", "C"}}, Semiring::Boolean,
                         {bits("1111"), bits("1111"), bits("1111")});
    const auto bell = bell_construction(f, 2);
    const auto check = global_section_bijection_check(f, bell);
    CHECK(check.holds);
    CHECK(check.base_sections == 8);
    CHECK(check.bell_sections == 8);
    CHECK(check.bell_class == ContextualityClass::NonContextual);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(bell_construction(fixtures::ex_sig(), 2), BellError);
    CHECK_THROWS_AS(bellify(fixtures::chsh()), BellError);
    const auto tri = fixtures::triangle();
    const auto other = bell_construction(
        table({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}, {"C", "A"}}, Semiring::Boolean,
              {bits("1001"), bits("1001"), bits("1001")}),
        2);
    CHECK_THROWS_AS(global_section_bijection_check(tri, other), BellError);
  }

  TEST_CASE("bellify agrees with the extension report") {
    const auto e = fixtures::ex_sig();
    const auto report = canonical_extension(e, power_cover(4, 2));
    const auto result = bellify(e);
    CHECK(std::holds_alternative<BellModel>(result) == report.well_defined());
    if (report.well_defined())
      CHECK(global_section_bijection_check(report.model(), std::get<BellModel>(result)).holds);
    else
      CHECK(std::get<ExtensionReport>(result).status.index() == report.status.index());
  }

  TEST_CASE("bijection holds on random models") {
    std::mt19937_64 rng(43);
    int built = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const auto x = 3 + rng() % 2;
      const auto s = gen::random_scenario(rng, x, 2, 2 + rng() % 3);
      const auto e = gen::random_boolean_model(rng, s);
      const auto result = bellify(e);
      if (!std::holds_alternative<BellModel>(result)) continue;
      ++built;
      const auto& bell = std::get<BellModel>(result);
      CHECK(bell.model.scenario().cover().size() ==
            oracle::power(x, s.max_context_size()));
      const auto f = canonical_extension(e, power_cover(x, s.max_context_size())).model();
      const auto check = global_section_bijection_check(f, bell);
      CHECK(check.holds);
      CHECK(check.bell_sections == oracle::global_sections(e).size());
      CHECK(is_strongly_contextual(bell.model) == oracle::global_sections(e).empty());
    }
    CHECK(built > 10);
  }
}
