#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sheafctx/simplex.hpp"
#include "sheafctx/solver.hpp"

using namespace sheafctx;
using fixtures::bits;
using fixtures::table;

namespace {

RationalMatrix matrix(const std::vector<std::vector<int>>& rows) {
  RationalMatrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) a(r, c) = rows[r][c];
  return a;
}

std::vector<Rational> vec(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// A x = b and x >= 0, checked without library code.
bool satisfies(const RationalMatrix& a, const std::vector<Rational>& b, const std::vector<Rational>& x) {
  if (x.size() != a.cols()) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Rational sum = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) sum += a(r, c) * x[c];
    if (sum != b[r]) return false;
  }
  return true;
}

// Each deterministic global in S_e(X) gets a non-positive multiplier sum and
// the weighted rows are positive.
bool certificate_holds(const EmpiricalModel& e, const FarkasCertificate& cert) {
  const auto x = e.scenario().all_measurements();
  const auto q = e.scenario().outcome_count();
  Rational rhs = 0;
  for (const auto& entry : cert.entries) rhs += entry.multiplier * e.row(entry.context_index).weight(entry.assignment);
  if (rhs <= 0) return false;
  for (const auto& g : oracle::global_sections(e)) {
    Rational sum = 0;
    for (const auto& entry : cert.entries) {
      const auto& c = e.scenario().cover()[entry.context_index];
      if (oracle::restrict(g, x, c) == oracle::digits(entry.assignment, c.size(), q)) sum += entry.multiplier;
    }
    if (sum > 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("simplex") {
  TEST_CASE("feasible system returns a basic feasible point") {
    const auto a = matrix({{1, 1, 0}, {0, 1, 1}});
    const auto b = vec({1, 1});
    const auto r = find_nonnegative_solution(a, b);
    REQUIRE(r.feasible);
    CHECK(satisfies(a, b, r.solution));
  }

  TEST_CASE("infeasible system returns a Farkas certificate") {
    // x1 + x2 = 1 and x1 + x2 = 2
    const auto a = matrix({{1, 1}, {1, 1}});
    const auto b = vec({1, 2});
    const auto r = find_nonnegative_solution(a, b);
    CHECK_FALSE(r.feasible);
    CHECK(is_farkas_certificate(a, b, r.certificate));

    // x1 - x2 = -1 with x >= 0 is feasible, x1 + x2 = -1 is not
    CHECK(find_nonnegative_solution(matrix({{1, -1}}), vec({-1})).feasible);
    const auto neg = find_nonnegative_solution(matrix({{1, 1}}), vec({-1}));
    CHECK_FALSE(neg.feasible);
    CHECK(is_farkas_certificate(matrix({{1, 1}}), vec({-1}), neg.certificate));
  }

  TEST_CASE("certificate checker rejects bad vectors") {
    const auto a = matrix({{1, 1}, {1, 1}});
    const auto b = vec({1, 2});
    CHECK_FALSE(is_farkas_certificate(a, b, vec({1, -1})));
    CHECK(is_farkas_certificate(a, b, vec({-1, 1})));
    CHECK_FALSE(is_farkas_certificate(a, b, vec({0, 0})));
  }

  TEST_CASE("degenerate and empty systems") {
    CHECK(find_nonnegative_solution(RationalMatrix(0, 3), std::vector<Rational>{}).feasible);
    CHECK(find_nonnegative_solution(matrix({{1, 0}, {1, 0}, {0, 1}}), vec({0, 0, 0})).feasible);
    CHECK_FALSE(find_nonnegative_solution(RationalMatrix(1, 0), vec({1})).feasible);
  }

  TEST_CASE("random systems agree with the subset oracle") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> entry(-2, 2);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 4;
      RationalMatrix a(rows, cols);
      std::vector<Rational> b(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) a(r, c) = entry(rng);
        b[r] = entry(rng);
      }
      // feasible iff some column subset of size <= rows gives x >= 0
      bool expected = false;
      for (std::uint64_t mask = 0; mask < (1ULL << cols) && !expected; ++mask) {
        std::vector<std::size_t> picked;
        for (std::size_t c = 0; c < cols; ++c)
          if (mask >> c & 1) picked.push_back(c);
        std::vector<std::vector<Rational>> sub(rows, std::vector<Rational>(picked.size()));
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t k = 0; k < picked.size(); ++k) sub[r][k] = a(r, picked[k]);
        const auto sol = oracle::solve(sub, b);
        expected = sol && std::all_of(sol->begin(), sol->end(), [](const Rational& v) { return v >= 0; });
      }
      const auto r = find_nonnegative_solution(a, b);
      CHECK(r.feasible == expected);
      if (r.feasible)
        CHECK(satisfies(a, b, r.solution));
      else
        CHECK(is_farkas_certificate(a, b, r.certificate));
    }
  }

  TEST_CASE("linear systems") {
    const auto a = matrix({{1, 2}, {2, 4}});
    CHECK(solve_linear_system(a, vec({1, 2})).has_value());
    CHECK_FALSE(solve_linear_system(a, vec({1, 3})).has_value());
    const auto x = solve_linear_system(matrix({{2, 0}, {0, 4}}), vec({1, 1}));
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rational(1, 2));
    CHECK((*x)[1] == Rational(1, 4));
  }
}

TEST_SUITE("solver") {
  TEST_CASE("CHSH is contextual but not logically contextual") {
    const auto e = fixtures::chsh();
    const auto lp = is_probabilistically_extendable(e);
    CHECK_FALSE(lp.extendable);
    REQUIRE(std::holds_alternative<FarkasCertificate>(lp.witness));
    CHECK(verify_witness(e, lp.witness));
    CHECK(certificate_holds(e, std::get<FarkasCertificate>(lp.witness)));
    CHECK_FALSE(is_logically_contextual(e).contextual);
    CHECK_FALSE(is_strongly_contextual(e));
    CHECK(classify(e) == ContextualityClass::Contextual);
  }

  TEST_CASE("triangle is strongly contextual") {
    const auto e = fixtures::triangle();
    CHECK_FALSE(find_consistent_global(e).has_value());
    CHECK(is_strongly_contextual(e));
    CHECK(oracle::global_sections(e).empty());
    CHECK(classify(e) == ContextualityClass::StronglyContextual);
  }

  TEST_CASE("possibilistic CHSH is logically contextual") {
    const auto e = table({"A", "A'", "B", "B'"}, {{"A", "B"}, {"A", "B'"}, {"A'", "B"}, {"A'", "B'"}},
                         Semiring::Boolean, {bits("1111"), bits("0111"), bits("0111"), bits("1110")});
    const auto r = is_logically_contextual(e);
    CHECK(r.contextual);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->context_index == 0);
    CHECK(r.witness->assignment == 0);
    CHECK(classify(e) == ContextualityClass::LogicallyContextual);
    CHECK(oracle::logically_contextual(e));
  }

  TEST_CASE("non-contextual models have verified global distributions") {
    const auto s = validate_scenario({{"A", "B", "C"}, {"0", "1"}, {{"A", "B"}, {"B", "C"}}});
    const auto e = gen::product_model(s, {Rational(1, 3), Rational(1, 2), Rational(1, 5)});
    const auto lp = is_probabilistically_extendable(e);
    CHECK(lp.extendable);
    REQUIRE(std::holds_alternative<GlobalDistribution>(lp.witness));
    CHECK(verify_witness(e, lp.witness));
    CHECK(classify(e) == ContextualityClass::NonContextual);
  }

  TEST_CASE("witness verification rejects tampering") {
    const auto e = fixtures::chsh();
    auto lp = is_probabilistically_extendable(e);
    auto cert = std::get<FarkasCertificate>(lp.witness);
    for (auto& entry : cert.entries) entry.multiplier = -entry.multiplier;
    CHECK_FALSE(verify_witness(e, cert));

    const auto tri = fixtures::triangle();
    CHECK_FALSE(verify_witness(tri, Assignment{tri.scenario().all_measurements(), {0, 1, 0}}));
    const auto sig = fixtures::ex_sig();
    CHECK(verify_witness(sig, Assignment{sig.scenario().all_measurements(), {1, 0, 0, 0}}));
    CHECK_FALSE(verify_witness(sig, GlobalDistribution{{{0, 0, 0, 0}}, {Rational(1, 2)}}));
  }

  TEST_CASE("classification agrees with oracles on random models") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 120; ++trial) {
      const auto s = gen::random_scenario(rng, 2 + rng() % 4, 3, 2 + rng() % 3);
      const auto e = trial % 2 ? gen::random_boolean_model(rng, s) : gen::random_probability_model(rng, s);
      const auto globals = oracle::global_sections(e);
      CHECK(is_strongly_contextual(e) == globals.empty());
      if (!globals.empty()) {
        const auto g = find_consistent_global(e);
        REQUIRE(g.has_value());
        CHECK(g->values == globals.front());
      }
      CHECK(is_logically_contextual(e).contextual == oracle::logically_contextual(e));
      if (e.semiring() == Semiring::Probability) {
        const auto lp = is_probabilistically_extendable(e);
        const auto expected = oracle::lp_feasible(e);
        REQUIRE(expected.has_value());
        CHECK(lp.extendable == expected->feasible);
        CHECK(verify_witness(e, lp.witness));
        if (lp.extendable) CHECK(classify(e) == ContextualityClass::NonContextual);
      }
    }
  }

  TEST_CASE("class names") {
    for (const auto c : {ContextualityClass::NonContextual, ContextualityClass::Contextual,
                         ContextualityClass::LogicallyContextual, ContextualityClass::StronglyContextual})
      CHECK(parse_contextuality_class(to_string(c)) == c);
    CHECK(to_string(ContextualityClass::StronglyContextual) == "StronglyContextual");
  }

  TEST_CASE("signed global sections") {
    // the PR box has no consistent global assignment, yet a signed section
    const auto pr = table({"A", "A'", "B", "B'"}, {{"A", "B"}, {"A", "B'"}, {"A'", "B"}, {"A'", "B'"}},
                          Semiring::Probability,
                          {{"1/2", "0", "0", "1/2"}, {"1/2", "0", "0", "1/2"}, {"1/2", "0", "0", "1/2"},
                           {"0", "1/2", "1/2", "0"}});
    CHECK(is_strongly_contextual(pr));
    const auto d = solve_signed_global_section(pr);
    REQUIRE(d.has_value());
    Rational total = 0;
    for (const auto& w : d->weights) total += w;
    CHECK(total == 1);
    // marginals reproduce every row
    const auto x = pr.scenario().all_measurements();
    for (std::size_t i = 0; i < pr.scenario().cover().size(); ++i) {
      const auto& c = pr.scenario().cover()[i];
      for (AssignmentIndex s = 0; s < 4; ++s) {
        Rational sum = 0;
        for (std::size_t k = 0; k < d->assignments.size(); ++k)
          if (oracle::restrict(d->assignments[k], x, c) == oracle::digits(s, 2, 2)) sum += d->weights[k];
        CHECK(sum == pr.row(i).weight(s));
      }
    }
    CHECK_THROWS_AS(solve_signed_global_section(pr, 4), SolverError);
  }

  TEST_CASE("signed models are not classified") {
    const auto e = table({"A"}, {{"A"}}, Semiring::Signed, {{"-1", "2"}});
    CHECK_THROWS_AS(classify(e), SolverError);
  }
}
