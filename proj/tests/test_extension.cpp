#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sheafctx/extension.hpp"
#include "sheafctx/solver.hpp"

using namespace sheafctx;
using fixtures::bits;
using fixtures::ctx;
using fixtures::table;

namespace {

Cover cover_of(const Scenario& s, const std::vector<std::vector<std::string>>& members) {
  Cover out;
  for (const auto& m : members) out.push_back(s.context_from_labels(m));
  return out;
}

std::vector<AssignmentIndex> oracle_support(const EmpiricalModel& e, const Context& c) {
  std::vector<AssignmentIndex> out;
  const auto q = e.scenario().outcome_count();
  for (const auto& values : oracle::sections(e, c)) out.push_back(encode_assignment(values, q));
  return out;
}

}  // namespace

TEST_SUITE("extension") {
  TEST_CASE("ex-sig on {ABD, BCD} is incompatible at BD = 01") {
    const auto e = fixtures::ex_sig();
    const auto target = cover_of(e.scenario(), {{"A", "B", "D"}, {"B", "C", "D"}});
    const auto report = canonical_extension(e, target);
    REQUIRE(std::holds_alternative<ExtensionReport::Incompatible>(report.status));
    const auto& v = std::get<ExtensionReport::Incompatible>(report.status).violation;
    CHECK(v.first == ctx(e.scenario(), {"A", "B", "D"}));
    CHECK(v.second == ctx(e.scenario(), {"B", "C", "D"}));
    CHECK(v.overlap == ctx(e.scenario(), {"B", "D"}));
    CHECK(assignment_string(v.assignment, 2, e.scenario()) == "01");
    CHECK(v.first_value == 1);
    CHECK(v.second_value == 0);

    REQUIRE(report.candidate.size() == 2);
    CHECK(report.candidate[0].support().size() == 8);
    CHECK(report.candidate[1].support() == std::vector<AssignmentIndex>{0, 7});

    // a non-canonical extension does exist: B = D on ABD
    const auto f = brute_force_extension(e, target);
    REQUIRE(f.has_value());
    CHECK(f->row(0).support() == std::vector<AssignmentIndex>{0, 3, 4, 7});
    CHECK(f->row(1).support() == std::vector<AssignmentIndex>{0, 7});
    CHECK(is_extension(*f, e));
    CHECK(check_submodel_proposition(e, *f));
    for (std::size_t d = 0; d < e.scenario().cover().size(); ++d) {
      const auto& c = e.scenario().cover()[d];
      for (std::size_t i = 0; i < 2; ++i)
        if (c.is_subset_of(target[i])) CHECK(oracle::marginal(*f, i, c) == oracle::marginal(e, d, c));
    }
    CHECK(oracle::marginal(*f, 0, target[0].intersect(target[1])) ==
          oracle::marginal(*f, 1, target[0].intersect(target[1])));
    CHECK_FALSE(is_strongly_non_extendable(e, target).strongly_non_extendable);
    for (const auto& c : target) CHECK(classify(induced_submodel(e, c)) == ContextualityClass::NonContextual);
  }

  TEST_CASE("extension to the same cover is the identity") {
    for (const auto& e : {fixtures::triangle(), fixtures::ex_sig()}) {
      const auto report = canonical_extension(e, e.scenario().cover());
      REQUIRE(report.well_defined());
      CHECK(report.model() == e);
      CHECK(is_extension(report.model(), e));
      CHECK(brute_force_extendable(e, e.scenario().cover()));
      CHECK_FALSE(is_strongly_non_extendable(e, e.scenario().cover()).strongly_non_extendable);
      CHECK(check_submodel_proposition(e, report.model()));
    }
  }

  TEST_CASE("triangle is strongly non-extendable to the top cover") {
    const auto e = fixtures::triangle();
    const Cover top{e.scenario().all_measurements()};
    const auto r = is_strongly_non_extendable(e, top);
    CHECK(r.strongly_non_extendable);
    CHECK(r.witness == e.scenario().all_measurements());
    const auto report = canonical_extension(e, top);
    REQUIRE(std::holds_alternative<ExtensionReport::EmptySupport>(report.status));
    CHECK(std::get<ExtensionReport::EmptySupport>(report.status).target_index == 0);
    CHECK_FALSE(brute_force_extendable(e, top));
  }

  TEST_CASE("full-support model on {ABD, BCD} does not extend ex-sig") {
    const auto e = fixtures::ex_sig();
    const auto f = table({"A", "B", "C", "D"}, {{"A", "B", "D"}, {"B", "C", "D"}}, Semiring::Boolean,
                         {bits("11111111"), bits("11111111")});
    CHECK_FALSE(is_extension(f, e));
    CHECK_THROWS_AS(check_submodel_proposition(e, f), ExtensionError);
    CHECK_THROWS_AS(is_extension(e, f), ExtensionError);
  }

  TEST_CASE("preconditions") {
    const auto e = fixtures::ex_sig();
    CHECK_THROWS_AS(canonical_extension(e, Cover{{0, 1, 2}, {3}}), ExtensionError);
    CHECK_THROWS_AS(canonical_extension(fixtures::chsh(), fixtures::chsh().scenario().cover()), ExtensionError);
    BruteForceOptions tiny;
    tiny.max_state_bits = 2;
    CHECK_THROWS_AS(brute_force_extension(e, e.scenario().cover(), tiny), ExtensionError);
  }

  TEST_CASE("collapsed CHSH extends to the top cover") {
    const auto e = possibilistic_collapse(fixtures::chsh());
    const Cover top{e.scenario().all_measurements()};
    const auto f = brute_force_extension(e, top);
    REQUIRE(f.has_value());
    CHECK(is_extension(*f, e));
    CHECK(check_submodel_proposition(e, *f));
    CHECK_FALSE(is_logically_contextual(e).contextual);
  }

  TEST_CASE("support formulas agree with enumeration on random models") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
      const auto x = 3 + rng() % 3;
      const auto s = gen::random_scenario(rng, x, 3, 2 + rng() % 3);
      const auto e = gen::random_boolean_model(rng, s);
      const auto n = s.max_context_size();
      for (const auto& c : power_cover(x, std::min<std::size_t>(x, n + 1))) {
        const auto expected = oracle_support(e, c);
        CHECK(canonical_support(e, c) == expected);
        CHECK(canonical_support_by_subcontexts(e, c) == expected);
        CHECK(canonical_support_by_maximal_contexts(e, c) == expected);
      }
    }
  }

  TEST_CASE("well-defined canonical extensions preserve global sections") {
    std::mt19937_64 rng(29);
    int well_defined = 0;
    for (int trial = 0; trial < 150; ++trial) {
      const auto x = 3 + rng() % 3;
      const auto s = gen::random_scenario(rng, x, 2, 2 + rng() % 3);
      const auto e = gen::random_boolean_model(rng, s);
      const auto n = s.max_context_size();
      const auto report = canonical_extension(e, power_cover(x, n));
      if (!report.well_defined()) continue;
      ++well_defined;
      const auto& f = report.model();
      CHECK(is_extension(f, e));
      CHECK(section_set(f, f.scenario().all_measurements()).sections == oracle::global_sections(e));
      CHECK(is_strongly_contextual(f) == is_strongly_contextual(e));
      for (std::size_t i = 0; i < f.scenario().cover().size(); ++i)
        CHECK(f.row(i).support() == oracle_support(e, f.scenario().cover()[i]));
    }
    CHECK(well_defined > 20);
  }

  TEST_CASE("brute force agrees with logical contextuality on the top cover") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 80; ++trial) {
      const auto s = gen::random_scenario(rng, 3 + rng() % 2, 2, 2 + rng() % 3);
      const auto e = gen::random_boolean_model(rng, s);
      if (oracle::global_sections(e).size() > 12) continue;
      const Cover top{s.all_measurements()};
      const auto f = brute_force_extension(e, top);
      CHECK(f.has_value() == !oracle::logically_contextual(e));
      if (f) CHECK(check_submodel_proposition(e, *f));
    }
  }

  TEST_CASE("every extension has no more possibilities than the canonical one") {
    std::mt19937_64 rng(37);
    BruteForceOptions wide;
    wide.restrict_to_consistent = false;
    wide.max_state_bits = 16;
    int found = 0;
    for (int trial = 0; trial < 80; ++trial) {
      const auto s = gen::random_scenario(rng, 3, 2, 2);
      const auto e = gen::random_boolean_model(rng, s);
      const auto target = power_cover(3, 2);
      if (!cover_leq(s.cover(), target)) continue;
      std::size_t bits_needed = 0;
      for (const auto& c : target) bits_needed += assignment_count(c.size(), 2);
      if (bits_needed > wide.max_state_bits) continue;
      const auto f = brute_force_extension(e, target, wide);
      CHECK(f.has_value() == brute_force_extendable(e, target));
      if (!f) continue;
      ++found;
      for (std::size_t i = 0; i < target.size(); ++i) {
        const auto canon = oracle_support(e, f->scenario().cover()[i]);
        for (const auto index : f->row(i).support())
          CHECK(std::binary_search(canon.begin(), canon.end(), index));
      }
    }
    CHECK(found > 0);
  }

  TEST_CASE("strong non-extendability to P_n matches induced sub-models") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = 3 + rng() % 3;
      const auto s = gen::random_scenario(rng, x, 2, 2 + rng() % 4);
      const auto e = gen::random_boolean_model(rng, s);
      const auto n = s.max_context_size();
      const auto target = power_cover(x, n);
      bool some_sc = false;
      for (const auto& c : target) some_sc = some_sc || oracle::sections(e, c).empty();
      CHECK(is_strongly_non_extendable(e, target).strongly_non_extendable == some_sc);
    }
  }
}
