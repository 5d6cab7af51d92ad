#include "sheafctx/extension.hpp"

#include <algorithm>
#include <set>

#include "section_search.hpp"
#include "sheafctx/solver.hpp"

namespace sheafctx {

namespace {

Scenario target_scenario(const EmpiricalModel& e, const Cover& target) {
  auto scenario = e.scenario().with_cover(target);
  if (!cover_leq(e.scenario().cover(), scenario.cover()))
    throw ExtensionError(ExtensionError::Kind::CoverNotLarger, "target cover does not dominate the model's cover");
  return scenario;
}

void require_boolean(const EmpiricalModel& e) {
  if (e.semiring() != Semiring::Boolean)
    throw ExtensionError(ExtensionError::Kind::NotBoolean, "extensions are defined for possibilistic models");
}

// Index of the restriction of an assignment (given by index on `from`) to `to`.
AssignmentIndex project(AssignmentIndex index, const Context& from, const Context& to, std::size_t q) {
  const auto values = decode_assignment(index, from.size(), q);
  AssignmentIndex out = 0;
  for (const auto id : to) out = out * q + values[*from.position(id)];
  return out;
}

std::set<AssignmentIndex> project_all(std::span<const AssignmentIndex> support, const Context& from,
                                      const Context& to, std::size_t q) {
  std::set<AssignmentIndex> out;
  for (const auto s : support) out.insert(project(s, from, to, q));
  return out;
}

Distribution boolean_row(const Context& c, std::size_t q, std::span<const AssignmentIndex> support) {
  std::map<AssignmentIndex, Rational> weights;
  for (const auto s : support) weights.emplace(s, 1);
  return Distribution(Semiring::Boolean, c, q, std::move(weights));
}

}  // namespace

std::vector<AssignmentIndex> canonical_support(const EmpiricalModel& e, const Context& c) {
  const auto q = e.scenario().outcome_count();
  std::vector<AssignmentIndex> out;
  detail::SectionSearch(e, c).run([&](std::span<const OutcomeId> values) {
    out.push_back(encode_assignment(values, q));
    return true;
  });
  return out;
}

std::vector<AssignmentIndex> canonical_support_by_subcontexts(const EmpiricalModel& e, const Context& c) {
  const auto q = e.scenario().outcome_count();
  std::vector<std::pair<Context, Distribution>> subcontexts;
  for (const auto& w : down_closure(e.scenario().cover())) {
    if (!w.empty() && w.is_subset_of(c)) subcontexts.emplace_back(w, context_distribution(e, w));
  }
  std::vector<AssignmentIndex> out;
  const auto count = assignment_count(c.size(), q);
  for (AssignmentIndex s = 0; s < count; ++s) {
    const bool possible = std::all_of(subcontexts.begin(), subcontexts.end(), [&](const auto& wd) {
      return wd.second.in_support(project(s, c, wd.first, q));
    });
    if (possible) out.push_back(s);
  }
  return out;
}

std::vector<AssignmentIndex> canonical_support_by_maximal_contexts(const EmpiricalModel& e, const Context& c) {
  const auto q = e.scenario().outcome_count();
  const auto& cover = e.scenario().cover();
  std::vector<AssignmentIndex> out;
  const auto count = assignment_count(c.size(), q);
  for (AssignmentIndex s = 0; s < count; ++s) {
    bool possible = true;
    for (std::size_t i = 0; i < cover.size() && possible; ++i) {
      const auto overlap = c.intersect(cover[i]);
      const auto target = project(s, c, overlap, q);
      const auto support = e.row(i).support();
      possible = std::any_of(support.begin(), support.end(),
                             [&](AssignmentIndex t) { return project(t, cover[i], overlap, q) == target; });
    }
    if (possible) out.push_back(s);
  }
  return out;
}

ExtensionReport canonical_extension(const EmpiricalModel& e, const Cover& target) {
  require_boolean(e);
  auto scenario = target_scenario(e, target);
  const auto q = scenario.outcome_count();
  const auto& cover = scenario.cover();

  std::vector<Distribution> candidate;
  std::optional<std::size_t> empty_at;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto support = canonical_support(e, cover[i]);
    if (support.empty() && !empty_at) empty_at = i;
    candidate.push_back(boolean_row(cover[i], q, support));
  }

  auto report = [&](auto status) {
    return ExtensionReport{scenario, candidate, std::move(status)};
  };
  if (empty_at) return report(ExtensionReport::EmptySupport{*empty_at, cover[*empty_at]});
  if (auto v = check_compatibility(scenario, candidate)) return report(ExtensionReport::Incompatible{*v});

  const auto& original = e.scenario().cover();
  for (std::size_t d = 0; d < original.size(); ++d) {
    const auto host = std::find_if(cover.begin(), cover.end(),
                                   [&](const Context& c) { return original[d].is_subset_of(c); });
    const auto h = static_cast<std::size_t>(host - cover.begin());
    const auto reached = marginalize(candidate[h], original[d]);
    for (const auto t : e.row(d).support()) {
      if (!reached.in_support(t)) return report(ExtensionReport::NotExtending{d, t, h});
    }
  }
  auto model = build_model(scenario, Semiring::Boolean, candidate);
  return report(ExtensionReport::WellDefined{std::move(model)});
}

bool is_extension(const EmpiricalModel& f, const EmpiricalModel& e) {
  if (f.scenario().measurements() != e.scenario().measurements() ||
      f.scenario().outcomes() != e.scenario().outcomes() || !cover_leq(e.scenario().cover(), f.scenario().cover()))
    throw ExtensionError(ExtensionError::Kind::CoverNotLarger, "candidate does not live on a larger cover");
  if (f.semiring() != e.semiring()) return false;
  const auto& cover = e.scenario().cover();
  for (std::size_t d = 0; d < cover.size(); ++d) {
    if (context_distribution(f, cover[d]) != e.row(d)) return false;
  }
  return true;
}

std::optional<EmpiricalModel> brute_force_extension(const EmpiricalModel& e, const Cover& target,
                                                    const BruteForceOptions& options) {
  require_boolean(e);
  const auto scenario = target_scenario(e, target);
  const auto q = scenario.outcome_count();
  const auto& cover = scenario.cover();
  const auto& original = e.scenario().cover();

  std::vector<std::vector<AssignmentIndex>> pools;
  std::size_t bits = 0;
  for (const auto& c : cover) {
    std::vector<AssignmentIndex> pool;
    if (options.restrict_to_consistent) {
      pool = canonical_support(e, c);
    } else {
      const auto count = assignment_count(c.size(), q);
      if (count > options.max_state_bits)
        throw ExtensionError(ExtensionError::Kind::InstanceTooLarge, "brute-force pool too large");
      for (AssignmentIndex s = 0; s < count; ++s) pool.push_back(s);
    }
    bits += pool.size();
    if (bits > options.max_state_bits)
      throw ExtensionError(ExtensionError::Kind::InstanceTooLarge,
                           "brute-force search exceeds 2^" + std::to_string(options.max_state_bits) + " states");
    pools.push_back(std::move(pool));
  }

  // Any extension satisfies f_C|_{C n D} = e_D|_{C n D} for all C, D, so
  // each context's admissible supports can be filtered in isolation.
  std::vector<std::vector<std::vector<AssignmentIndex>>> admissible(cover.size());
  for (std::size_t c = 0; c < cover.size(); ++c) {
    std::vector<std::pair<Context, std::set<AssignmentIndex>>> required;
    for (std::size_t d = 0; d < original.size(); ++d) {
      auto overlap = cover[c].intersect(original[d]);
      if (overlap.empty()) continue;
      auto wanted = project_all(e.row(d).support(), original[d], overlap, q);
      required.emplace_back(std::move(overlap), std::move(wanted));
    }
    const auto& pool = pools[c];
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pool.size()); ++mask) {
      std::vector<AssignmentIndex> support;
      for (std::size_t k = 0; k < pool.size(); ++k)
        if (mask >> k & 1U) support.push_back(pool[k]);
      const bool ok = std::all_of(required.begin(), required.end(), [&](const auto& r) {
        return project_all(support, cover[c], r.first, q) == r.second;
      });
      if (ok) admissible[c].push_back(std::move(support));
    }
    if (admissible[c].empty()) return std::nullopt;
  }

  std::vector<std::size_t> choice(cover.size(), 0);
  auto consistent_with_earlier = [&](std::size_t c) {
    const auto& mine = admissible[c][choice[c]];
    for (std::size_t p = 0; p < c; ++p) {
      const auto overlap = cover[c].intersect(cover[p]);
      if (overlap.empty()) continue;
      if (project_all(mine, cover[c], overlap, q) != project_all(admissible[p][choice[p]], cover[p], overlap, q))
        return false;
    }
    return true;
  };

  // depth-first over contexts in cover order
  std::size_t depth = 0;
  bool advancing = true;
  while (true) {
    if (advancing) {
      if (depth == cover.size()) break;
      choice[depth] = 0;
    } else {
      ++choice[depth];
    }
    while (choice[depth] < admissible[depth].size() && !consistent_with_earlier(depth)) ++choice[depth];
    if (choice[depth] < admissible[depth].size()) {
      ++depth;
      advancing = true;
    } else {
      if (depth == 0) return std::nullopt;
      --depth;
      advancing = false;
    }
  }

  std::vector<Distribution> rows;
  for (std::size_t c = 0; c < cover.size(); ++c) rows.push_back(boolean_row(cover[c], q, admissible[c][choice[c]]));
  auto f = build_model(scenario, Semiring::Boolean, std::move(rows));
  if (!is_extension(f, e)) throw std::logic_error("brute-force search produced a non-extension");
  return f;
}

NonExtendability is_strongly_non_extendable(const EmpiricalModel& e, const Cover& target) {
  const auto scenario = target_scenario(e, target);
  std::optional<Context> by_sections;
  std::optional<Context> by_submodels;
  for (const auto& c : scenario.cover()) {
    if (!by_sections && section_set(e, c).empty()) by_sections = c;
    if (!by_submodels && is_strongly_contextual(induced_submodel(e, c))) by_submodels = c;
  }
  if (by_sections != by_submodels)
    throw std::logic_error("empty S_e(C) and strongly contextual induced sub-models disagree");
  return {by_sections.has_value(), by_sections};
}

bool check_submodel_proposition(const EmpiricalModel& e, const EmpiricalModel& f) {
  if (!is_extension(f, e))
    throw ExtensionError(ExtensionError::Kind::NotAnExtension, "the given model does not extend e");
  const auto q = e.scenario().outcome_count();
  for (const auto& c : f.scenario().cover()) {
    const auto sub = induced_submodel(e, c);
    const auto& fc = f.row(c);
    // the sub-model renumbers C monotonically, so indices of f_C carry over
    GlobalDistribution d;
    for (const auto& [index, weight] : fc.weights()) {
      d.assignments.push_back(decode_assignment(index, c.size(), q));
      d.weights.push_back(weight);
    }
    if (!verify_witness(sub, d)) return false;
  }
  return true;
}

}  // namespace sheafctx
