#include "sheafctx/solver.hpp"

#include <algorithm>

#include "section_search.hpp"
#include "sheafctx/simplex.hpp"

namespace sheafctx {

std::string_view to_string(ContextualityClass c) {
  switch (c) {
    case ContextualityClass::NonContextual: return "NonContextual";
    case ContextualityClass::Contextual: return "Contextual";
    case ContextualityClass::LogicallyContextual: return "LogicallyContextual";
    case ContextualityClass::StronglyContextual: return "StronglyContextual";
  }
  return "?";
}

std::optional<ContextualityClass> parse_contextuality_class(std::string_view text) {
  for (auto c : {ContextualityClass::NonContextual, ContextualityClass::Contextual,
                 ContextualityClass::LogicallyContextual, ContextualityClass::StronglyContextual}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

namespace {

// Index of g|_C, where g is a global assignment in scenario order.
AssignmentIndex restrict_global(std::span<const OutcomeId> global, const Context& c, std::size_t outcome_count) {
  AssignmentIndex index = 0;
  for (const auto id : c) index = index * outcome_count + global[id];
  return index;
}

bool in_all_supports(const EmpiricalModel& e, std::span<const OutcomeId> global) {
  const auto q = e.scenario().outcome_count();
  const auto& cover = e.scenario().cover();
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (!e.row(i).in_support(restrict_global(global, cover[i], q))) return false;
  return true;
}

// Consistent global assignments, by plain filtering of E(X) when that is
// small and by the backtracking search otherwise.
std::vector<std::vector<OutcomeId>> consistent_globals(const EmpiricalModel& e) {
  const auto n = e.scenario().measurement_count();
  const auto q = e.scenario().outcome_count();
  std::optional<AssignmentIndex> total;
  try {
    total = assignment_count(n, q);
  } catch (const ModelError&) {
  }
  if (total && *total <= (AssignmentIndex{1} << 16)) {
    std::vector<std::vector<OutcomeId>> out;
    for (AssignmentIndex g = 0; g < *total; ++g) {
      auto values = decode_assignment(g, n, q);
      if (in_all_supports(e, values)) out.push_back(std::move(values));
    }
    return out;
  }
  return section_set(e, e.scenario().all_measurements()).sections;
}

}  // namespace

std::optional<Assignment> find_consistent_global(const EmpiricalModel& e) {
  const auto x = e.scenario().all_measurements();
  detail::SectionSearch search(e, x);
  std::optional<Assignment> found;
  search.run([&](std::span<const OutcomeId> values) {
    found = Assignment{x, {values.begin(), values.end()}};
    return false;
  });
  return found;
}

bool is_strongly_contextual(const EmpiricalModel& e) { return !find_consistent_global(e).has_value(); }

LogicalResult is_logically_contextual(const EmpiricalModel& model) {
  const auto e = possibilistic_collapse(model);
  const auto& scenario = e.scenario();
  const auto& cover = scenario.cover();
  const auto q = scenario.outcome_count();
  const auto x = scenario.all_measurements();
  detail::SectionSearch search(e, x);

  // local sections already known to extend
  std::vector<std::vector<bool>> reached(cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i) reached[i].assign(assignment_count(cover[i].size(), q), false);
  auto mark = [&](std::span<const OutcomeId> global) {
    for (std::size_t i = 0; i < cover.size(); ++i) reached[i][restrict_global(global, cover[i], q)] = true;
  };

  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (const auto s : e.row(i).support()) {
      if (reached[i][s]) continue;
      const auto values = decode_assignment(s, cover[i].size(), q);
      std::vector<std::optional<OutcomeId>> fixed(x.size());
      for (std::size_t k = 0; k < cover[i].size(); ++k) fixed[cover[i][k]] = values[k];
      bool extended = false;
      search.run(
          [&](std::span<const OutcomeId> global) {
            mark(global);
            extended = true;
            return false;
          },
          fixed);
      if (!extended) return {true, LocalObstruction{i, s}};
    }
  }
  return {false, std::nullopt};
}

ExtendabilityResult is_probabilistically_extendable(const EmpiricalModel& e) {
  if (e.semiring() != Semiring::Probability)
    throw SolverError(SolverError::Kind::SemiringMismatch, "probabilistic extendability needs a probability model");
  const auto& cover = e.scenario().cover();
  const auto q = e.scenario().outcome_count();
  // any feasible d is supported on S_e(X)
  const auto globals = section_set(e, e.scenario().all_measurements()).sections;
  if (globals.size() > 20000)
    throw SolverError(SolverError::Kind::InstanceTooLarge,
                      std::to_string(globals.size()) + " consistent global assignments is too many for the dense LP");

  std::vector<FarkasCertificate::Entry> constraints;
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (const auto s : e.row(i).support()) constraints.push_back({i, s, Rational(0)});

  RationalMatrix a(constraints.size(), globals.size());
  std::vector<Rational> b(constraints.size());
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const auto& [ci, s, unused] = constraints[r];
    b[r] = e.row(ci).weight(s);
    for (std::size_t g = 0; g < globals.size(); ++g)
      if (restrict_global(globals[g], cover[ci], q) == s) a(r, g) = 1;
  }

  const auto lp = find_nonnegative_solution(a, b);
  if (lp.feasible) {
    GlobalDistribution d;
    for (std::size_t g = 0; g < globals.size(); ++g) {
      if (lp.solution[g] == 0) continue;
      d.assignments.push_back(globals[g]);
      d.weights.push_back(lp.solution[g]);
    }
    return {true, std::move(d)};
  }
  FarkasCertificate certificate;
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    if (lp.certificate[r] == 0) continue;
    certificate.entries.push_back({constraints[r].context_index, constraints[r].assignment, lp.certificate[r]});
  }
  return {false, std::move(certificate)};
}

namespace {

bool marginals_match(const EmpiricalModel& e, const GlobalDistribution& d) {
  const auto& scenario = e.scenario();
  const auto q = scenario.outcome_count();
  if (d.assignments.size() != d.weights.size()) return false;
  for (const auto& g : d.assignments) {
    if (g.size() != scenario.measurement_count()) return false;
    if (std::any_of(g.begin(), g.end(), [&](OutcomeId o) { return o >= q; })) return false;
  }
  for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
    std::map<AssignmentIndex, Rational> marginal;
    for (std::size_t k = 0; k < d.assignments.size(); ++k) {
      auto& slot = marginal[restrict_global(d.assignments[k], scenario.cover()[i], q)];
      if (e.semiring() == Semiring::Boolean)
        slot = d.weights[k] != 0 ? 1 : slot;
      else
        slot += d.weights[k];
    }
    std::erase_if(marginal, [](const auto& kv) { return kv.second == 0; });
    if (marginal != e.row(i).weights()) return false;
  }
  return true;
}

}  // namespace

bool verify_witness(const EmpiricalModel& e, const GlobalSectionWitness& witness) {
  const auto& cover = e.scenario().cover();
  const auto q = e.scenario().outcome_count();
  if (const auto* d = std::get_if<GlobalDistribution>(&witness)) {
    if (e.semiring() != Semiring::Signed &&
        std::any_of(d->weights.begin(), d->weights.end(), [](const Rational& w) { return w < 0; }))
      return false;
    return marginals_match(e, *d);
  }
  if (const auto* g = std::get_if<Assignment>(&witness)) {
    if (g->context != e.scenario().all_measurements()) return false;
    return in_all_supports(e, g->values);
  }
  const auto& certificate = std::get<FarkasCertificate>(witness);
  Rational rhs = 0;
  for (const auto& entry : certificate.entries) {
    if (entry.context_index >= cover.size()) return false;
    rhs += entry.multiplier * e.row(entry.context_index).weight(entry.assignment);
  }
  if (rhs <= 0) return false;
  for (const auto& g : consistent_globals(e)) {
    Rational lhs = 0;
    for (const auto& entry : certificate.entries)
      if (restrict_global(g, cover[entry.context_index], q) == entry.assignment) lhs += entry.multiplier;
    if (lhs > 0) return false;
  }
  return true;
}

ContextualityClass classify(const EmpiricalModel& e) {
  if (e.semiring() == Semiring::Signed)
    throw SolverError(SolverError::Kind::SemiringMismatch, "cannot classify a signed model");
  if (is_strongly_contextual(e)) return ContextualityClass::StronglyContextual;
  if (is_logically_contextual(e).contextual) return ContextualityClass::LogicallyContextual;
  if (e.semiring() == Semiring::Boolean) return ContextualityClass::NonContextual;
  return is_probabilistically_extendable(e).extendable ? ContextualityClass::NonContextual
                                                       : ContextualityClass::Contextual;
}

std::optional<GlobalDistribution> solve_signed_global_section(const EmpiricalModel& e, std::size_t max_variables) {
  if (e.semiring() == Semiring::Boolean)
    throw SolverError(SolverError::Kind::SemiringMismatch, "signed global sections need a numeric model");
  const auto& scenario = e.scenario();
  const auto n = scenario.measurement_count();
  const auto q = scenario.outcome_count();
  AssignmentIndex total = 0;
  try {
    total = assignment_count(n, q);
  } catch (const ModelError&) {
    total = max_variables + AssignmentIndex{1};
  }
  if (total > max_variables)
    throw SolverError(SolverError::Kind::InstanceTooLarge,
                      "signed solve over " + std::to_string(total) + " global assignments exceeds the limit");

  // a non-negative section, when one exists, is also a signed one
  if (e.semiring() == Semiring::Probability) {
    auto lp = is_probabilistically_extendable(e);
    if (lp.extendable) return std::get<GlobalDistribution>(std::move(lp.witness));
  }

  std::vector<std::pair<std::size_t, AssignmentIndex>> rows;
  for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
    const auto count = assignment_count(scenario.cover()[i].size(), q);
    for (AssignmentIndex s = 0; s < count; ++s) rows.emplace_back(i, s);
  }
  RationalMatrix a(rows.size(), total);
  std::vector<Rational> b(rows.size());
  std::vector<std::vector<OutcomeId>> globals;
  globals.reserve(total);
  for (AssignmentIndex g = 0; g < total; ++g) globals.push_back(decode_assignment(g, n, q));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [ci, s] = rows[r];
    b[r] = e.row(ci).weight(s);
    for (AssignmentIndex g = 0; g < total; ++g)
      if (restrict_global(globals[g], scenario.cover()[ci], q) == s) a(r, g) = 1;
  }
  auto x = solve_linear_system(a, b);
  if (!x) return std::nullopt;
  GlobalDistribution d;
  for (AssignmentIndex g = 0; g < total; ++g) {
    if ((*x)[g] == 0) continue;
    d.assignments.push_back(globals[g]);
    d.weights.push_back((*x)[g]);
  }
  return d;
}

}  // namespace sheafctx
