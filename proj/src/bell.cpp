#include "sheafctx/bell.hpp"

#include <algorithm>

namespace sheafctx {

CodiagonalMap::CodiagonalMap(std::size_t base_count, std::size_t site_count)
    : base_count_(base_count), site_count_(site_count) {
  if (base_count == 0 || site_count == 0) throw BellError(BellError::Kind::BadArity, "empty codiagonal map");
}

MeasurementId CodiagonalMap::tagged(MeasurementId base, std::size_t site) const {
  if (base >= base_count_ || site >= site_count_) throw std::invalid_argument("tagged measurement out of range");
  return static_cast<MeasurementId>(site * base_count_ + base);
}

Context CodiagonalMap::underline(const Context& tagged) const {
  std::vector<MeasurementId> ids;
  ids.reserve(tagged.size());
  for (const auto id : tagged) ids.push_back(base_of(id));
  return Context(std::move(ids));
}

bool CodiagonalMap::is_codiagonal(const Assignment& s) const {
  std::vector<std::optional<OutcomeId>> seen(base_count_);
  for (std::size_t k = 0; k < s.context.size(); ++k) {
    auto& slot = seen[base_of(s.context[k])];
    if (slot && *slot != s.values[k]) return false;
    slot = s.values[k];
  }
  return true;
}

Assignment CodiagonalMap::underline(const Assignment& s) const {
  if (!is_codiagonal(s)) throw std::invalid_argument("assignment is not codiagonal");
  Assignment out{underline(s.context), {}};
  out.values.resize(out.context.size());
  for (std::size_t k = 0; k < s.context.size(); ++k) out.values[*out.context.position(base_of(s.context[k]))] = s.values[k];
  return out;
}

Assignment CodiagonalMap::lift(const Assignment& base, const Context& domain) const {
  if (underline(domain) != base.context) throw std::invalid_argument("lift target does not cover the base context");
  Assignment out{domain, {}};
  out.values.reserve(domain.size());
  for (const auto id : domain) out.values.push_back(base.at(base_of(id)));
  return out;
}

std::vector<Assignment> CodiagonalMap::codiagonal_assignments(const Context& domain, std::size_t outcome_count) const {
  const auto base = underline(domain);
  const auto count = assignment_count(base.size(), outcome_count);
  std::vector<Assignment> out;
  out.reserve(count);
  for (AssignmentIndex i = 0; i < count; ++i)
    out.push_back(lift(Assignment{base, decode_assignment(i, base.size(), outcome_count)}, domain));
  return out;
}

BellModel bell_construction(const EmpiricalModel& f, std::size_t sites) {
  const auto& scenario = f.scenario();
  const auto x = scenario.measurement_count();
  if (sites < 1) throw BellError(BellError::Kind::BadArity, "site count must be positive");
  // more sites than measurements: P_n X is {X}
  auto expected = power_cover(x, std::min(sites, x));
  auto actual = scenario.cover();
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  if (expected != actual)
    throw BellError(BellError::Kind::CoverNotPowerCover,
                    "the Bell construction needs the cover P_" + std::to_string(std::min(sites, x)) + " X");

  const std::vector<std::vector<std::string>> site_lists(sites, scenario.measurements());
  auto bell = bell_scenario(site_lists, scenario.outcomes());
  const CodiagonalMap map(x, sites);
  const auto q = scenario.outcome_count();

  std::map<Context, Distribution> base_rows;
  std::vector<Distribution> rows;
  rows.reserve(bell.scenario.cover().size());
  for (const auto& c : bell.scenario.cover()) {
    const auto base = map.underline(c);
    auto it = base_rows.find(base);
    if (it == base_rows.end()) it = base_rows.emplace(base, context_distribution(f, base)).first;
    std::map<AssignmentIndex, Rational> weights;
    for (const auto& [index, value] : it->second.weights()) {
      const auto lifted = map.lift(Assignment{base, decode_assignment(index, base.size(), q)}, c);
      weights.emplace(encode_assignment(lifted.values, q), value);
    }
    rows.emplace_back(f.semiring(), c, q, std::move(weights));
  }
  auto model = build_model(std::move(bell.scenario), f.semiring(), std::move(rows));
  return {std::move(model), std::move(bell.structure), map};
}

std::variant<BellModel, ExtensionReport> bellify(const EmpiricalModel& e) {
  if (e.semiring() != Semiring::Boolean)
    throw BellError(BellError::Kind::NotBoolean, "bellify needs a possibilistic model; collapse it first");
  const auto n = e.scenario().max_context_size();
  auto report = canonical_extension(e, power_cover(e.scenario().measurement_count(), n));
  if (!report.well_defined()) return report;
  return bell_construction(report.model(), n);
}

BijectionReport global_section_bijection_check(const EmpiricalModel& f, const BellModel& bell) {
  if (bell.map.base_count() != f.scenario().measurement_count() ||
      bell_construction(f, bell.map.site_count()).model != bell.model)
    throw BellError(BellError::Kind::NotConstructedPair, "the Bell model was not constructed from this model");

  const auto base = section_set(f, f.scenario().all_measurements());
  const auto lifted = section_set(bell.model, bell.model.scenario().all_measurements());
  BijectionReport report;
  report.base_sections = base.size();
  report.bell_sections = lifted.size();

  bool holds = base.size() == lifted.size();
  std::vector<std::vector<OutcomeId>> images;
  for (const auto& values : lifted.sections) {
    const Assignment s{lifted.context, values};
    if (!bell.map.is_codiagonal(s)) {
      holds = false;
      break;
    }
    images.push_back(bell.map.underline(s).values);
  }
  std::sort(images.begin(), images.end());
  holds = holds && images == base.sections;
  for (const auto& values : base.sections) {
    if (!holds) break;
    const auto up = bell.map.lift(Assignment{base.context, values}, lifted.context);
    holds = lifted.contains(up.values);
  }

  if (f.semiring() != Semiring::Signed) {
    report.base_class = classify(f);
    report.bell_class = classify(bell.model);
    holds = holds && report.base_class == report.bell_class;
  }
  report.holds = holds;
  return report;
}

}  // namespace sheafctx
