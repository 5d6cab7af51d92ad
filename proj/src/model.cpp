#include "sheafctx/model.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "section_search.hpp"

namespace sheafctx {

std::string_view to_string(Semiring semiring) {
  switch (semiring) {
    case Semiring::Probability: return "probability";
    case Semiring::Boolean: return "boolean";
    case Semiring::Signed: return "signed";
  }
  return "?";
}

std::optional<Semiring> parse_semiring(std::string_view text) {
  if (text == "probability") return Semiring::Probability;
  if (text == "boolean") return Semiring::Boolean;
  if (text == "signed") return Semiring::Signed;
  return std::nullopt;
}

AssignmentIndex assignment_count(std::size_t length, std::size_t outcome_count) {
  AssignmentIndex count = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (count > std::numeric_limits<AssignmentIndex>::max() / outcome_count)
      throw ModelError(ModelError::Kind::ContextTooLarge,
                       "context of " + std::to_string(length) + " measurements is too large to index");
    count *= outcome_count;
  }
  return count;
}

AssignmentIndex encode_assignment(std::span<const OutcomeId> values, std::size_t outcome_count) {
  AssignmentIndex index = 0;
  for (const auto v : values) index = index * outcome_count + v;
  return index;
}

std::vector<OutcomeId> decode_assignment(AssignmentIndex index, std::size_t length, std::size_t outcome_count) {
  std::vector<OutcomeId> values(length);
  for (std::size_t i = length; i-- > 0;) {
    values[i] = static_cast<OutcomeId>(index % outcome_count);
    index /= outcome_count;
  }
  return values;
}

OutcomeId Assignment::at(MeasurementId id) const {
  const auto pos = context.position(id);
  if (!pos) throw std::out_of_range("measurement " + std::to_string(id) + " not in assignment domain");
  return values[*pos];
}

Assignment Assignment::restrict_to(const Context& sub) const {
  Assignment out{sub, {}};
  out.values.reserve(sub.size());
  for (const auto id : sub) out.values.push_back(at(id));
  return out;
}

std::string assignment_string(std::span<const OutcomeId> values, const Scenario& scenario) {
  std::string out;
  out.reserve(values.size());
  for (const auto v : values) out += scenario.outcomes().at(v);
  return out;
}

std::string assignment_string(AssignmentIndex index, std::size_t length, const Scenario& scenario) {
  return assignment_string(decode_assignment(index, length, scenario.outcome_count()), scenario);
}

Distribution::Distribution(Semiring semiring, Context context, std::size_t outcome_count,
                           std::map<AssignmentIndex, Rational> weights)
    : semiring_(semiring), context_(std::move(context)), outcome_count_(outcome_count) {
  const auto count = assignment_count(context_.size(), outcome_count_);
  for (auto& [index, value] : weights) {
    if (index >= count)
      throw ModelError(ModelError::Kind::BadValue, "assignment index " + std::to_string(index) + " out of range");
    if (value == 0) continue;
    if (semiring_ == Semiring::Boolean && value != 1)
      throw ModelError(ModelError::Kind::BadValue, "Boolean weight must be 0 or 1, got " + to_string(value));
    if (semiring_ == Semiring::Probability && value < 0)
      throw ModelError(ModelError::Kind::BadValue, "probability weight is negative: " + to_string(value));
    weights_.emplace(index, std::move(value));
  }
}

Distribution Distribution::point(Semiring semiring, std::size_t outcome_count) {
  return Distribution(semiring, Context{}, outcome_count, {{0, Rational(1)}});
}

Rational Distribution::weight(AssignmentIndex index) const {
  const auto it = weights_.find(index);
  return it == weights_.end() ? Rational(0) : it->second;
}

Rational Distribution::weight(const Assignment& assignment) const {
  if (assignment.context != context_) throw std::invalid_argument("assignment is on a different context");
  return weight(encode_assignment(assignment.values, outcome_count_));
}

std::vector<AssignmentIndex> Distribution::support() const {
  std::vector<AssignmentIndex> out;
  out.reserve(weights_.size());
  for (const auto& [index, value] : weights_) out.push_back(index);
  return out;
}

bool Distribution::is_normalized() const {
  if (semiring_ == Semiring::Boolean) return !weights_.empty();
  Rational total = 0;
  for (const auto& [index, value] : weights_) total += value;
  return total == 1;
}

Distribution marginalize(const Distribution& d, const Context& sub) {
  if (!sub.is_subset_of(d.context()))
    throw ModelError(ModelError::Kind::NotSubcontext, "marginal target is not a subcontext");
  if (sub == d.context()) return d;
  std::vector<std::size_t> positions;
  positions.reserve(sub.size());
  for (const auto id : sub) positions.push_back(*d.context().position(id));

  const auto q = d.outcome_count();
  const auto length = d.context().size();
  std::map<AssignmentIndex, Rational> out;
  std::vector<OutcomeId> digits(length);
  for (const auto& [index, value] : d.weights()) {
    auto rest = index;
    for (std::size_t i = length; i-- > 0;) {
      digits[i] = static_cast<OutcomeId>(rest % q);
      rest /= q;
    }
    AssignmentIndex target = 0;
    for (const auto p : positions) target = target * q + digits[p];
    auto& slot = out[target];
    if (d.semiring() == Semiring::Boolean)
      slot = 1;
    else
      slot += value;
  }
  return Distribution(d.semiring(), sub, q, std::move(out));
}

std::optional<Violation> check_compatibility(const Scenario& scenario, std::span<const Distribution> rows) {
  const auto& cover = scenario.cover();
  // marginal cache per row, keyed by overlap
  std::vector<std::map<Context, Distribution>> cache(rows.size());
  auto marginal = [&](std::size_t i, const Context& overlap) -> const Distribution& {
    auto it = cache[i].find(overlap);
    if (it == cache[i].end()) it = cache[i].emplace(overlap, marginalize(rows[i], overlap)).first;
    return it->second;
  };

  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.size(); ++j) {
      const auto overlap = cover[i].intersect(cover[j]);
      const auto& a = marginal(i, overlap);
      const auto& b = marginal(j, overlap);
      if (a == b) continue;
      // first disagreeing assignment in index order
      auto ia = a.weights().begin();
      auto ib = b.weights().begin();
      while (true) {
        const bool a_done = ia == a.weights().end();
        const bool b_done = ib == b.weights().end();
        AssignmentIndex t = 0;
        if (!a_done && (b_done || ia->first < ib->first)) {
          t = ia->first;
        } else if (!b_done && (a_done || ib->first < ia->first)) {
          t = ib->first;
        } else if (ia->second != ib->second) {
          t = ia->first;
        } else {
          ++ia;
          ++ib;
          continue;
        }
        return Violation{i, j, cover[i], cover[j], overlap, t, a.weight(t), b.weight(t)};
      }
    }
  }
  return std::nullopt;
}

const Distribution& EmpiricalModel::row(const Context& context) const {
  if (auto i = scenario_.cover_index(context)) return rows_[*i];
  throw ModelError(ModelError::Kind::MissingRow, "'" + scenario_.context_label(context) + "' is not a maximal context");
}

EmpiricalModel build_model(Scenario scenario, Semiring semiring, std::vector<Distribution> rows) {
  using Kind = ModelError::Kind;
  const auto& cover = scenario.cover();
  std::vector<std::optional<Distribution>> slots(cover.size());
  for (auto& row : rows) {
    const auto label = scenario.context_label(row.context());
    if (row.semiring() != semiring)
      throw ModelError(Kind::SemiringMismatch, "row '" + label + "' uses a different semiring");
    if (row.outcome_count() != scenario.outcome_count())
      throw ModelError(Kind::BadValue, "row '" + label + "' has the wrong number of outcomes");
    const auto index = scenario.cover_index(row.context());
    if (!index) throw ModelError(Kind::UnexpectedRow, "row '" + label + "' is not a maximal context");
    if (slots[*index]) throw ModelError(Kind::UnexpectedRow, "row '" + label + "' given twice");
    slots[*index] = std::move(row);
  }

  EmpiricalModel e;
  e.semiring_ = semiring;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (!slots[i]) throw ModelError(Kind::MissingRow, "no row for context '" + scenario.context_label(cover[i]) + "'");
    if (!slots[i]->is_normalized())
      throw ModelError(Kind::NormalizationError,
                       "row '" + scenario.context_label(cover[i]) + "' is not normalized for the " +
                           std::string(to_string(semiring)) + " semiring");
    e.rows_.push_back(std::move(*slots[i]));
  }
  if (auto v = check_compatibility(scenario, e.rows_)) {
    throw ModelError(Kind::IncompatibleRows,
                     "rows '" + scenario.context_label(v->first) + "' and '" + scenario.context_label(v->second) +
                         "' disagree on '" + scenario.context_label(v->overlap) + "' at " +
                         assignment_string(v->assignment, v->overlap.size(), scenario) + ": " +
                         to_string(v->first_value) + " != " + to_string(v->second_value),
                     *v);
  }
  e.scenario_ = std::move(scenario);
  return e;
}

Distribution context_distribution(const EmpiricalModel& e, const Context& u) {
  const auto& cover = e.scenario().cover();
  std::optional<Distribution> result;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (!u.is_subset_of(cover[i])) continue;
    if (!result) {
      result = marginalize(e.row(i), u);
#ifdef NDEBUG
      break;
#endif
    } else {
      assert(marginalize(e.row(i), u) == *result && "compatible model yields one marginal per context");
    }
  }
  if (!result)
    throw ModelError(ModelError::Kind::NotInDownClosure,
                     "'" + e.scenario().context_label(u) + "' is not contained in any maximal context");
  return *std::move(result);
}

bool SectionSet::contains(std::span<const OutcomeId> values) const {
  return std::binary_search(sections.begin(), sections.end(), values,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                            });
}

namespace detail {

SectionSearch::SectionSearch(const EmpiricalModel& e, const Context& domain)
    : domain_(domain), outcome_count_(e.scenario().outcome_count()), checks_(domain.size()) {
  const auto& cover = e.scenario().cover();
  // identical (W, support) checks from different maximal contexts are merged
  std::map<Context, std::vector<std::vector<AssignmentIndex>>> seen;
  for (std::size_t ci = 0; ci < cover.size(); ++ci) {
    std::vector<MeasurementId> prefix;
    std::vector<std::size_t> positions;
    for (std::size_t k = 0; k < domain_.size(); ++k) {
      if (!cover[ci].contains(domain_[k])) continue;
      prefix.push_back(domain_[k]);
      positions.push_back(k);
      Context w(prefix);
      auto support = marginalize(e.row(ci), w).support();
      auto& known = seen[w];
      if (std::find(known.begin(), known.end(), support) != known.end()) continue;
      known.push_back(support);

      Allowed allowed;
      allowed.positions = positions;
      const auto count = assignment_count(w.size(), outcome_count_);
      if (count <= (AssignmentIndex{1} << 20)) {
        allowed.bitmap.assign(count, false);
        for (const auto s : support) allowed.bitmap[s] = true;
      } else {
        allowed.set.insert(support.begin(), support.end());
      }
      checks_[k].push_back(std::move(allowed));
    }
  }
}

}  // namespace detail

SectionSet section_set(const EmpiricalModel& e, const Context& u) {
  SectionSet out{u, {}};
  detail::SectionSearch search(e, u);
  search.run([&](std::span<const OutcomeId> values) {
    out.sections.emplace_back(values.begin(), values.end());
    return true;
  });
  return out;
}

EmpiricalModel possibilistic_collapse(const EmpiricalModel& e) {
  if (e.semiring() == Semiring::Boolean) return e;
  std::vector<Distribution> rows;
  rows.reserve(e.rows().size());
  for (const auto& row : e.rows()) {
    std::map<AssignmentIndex, Rational> weights;
    for (const auto& [index, value] : row.weights()) weights.emplace(index, 1);
    rows.emplace_back(Semiring::Boolean, row.context(), row.outcome_count(), std::move(weights));
  }
  return build_model(e.scenario(), Semiring::Boolean, std::move(rows));
}

EmpiricalModel induced_submodel(const EmpiricalModel& e, const Context& u) {
  const auto& scenario = e.scenario();
  for (const auto id : u) {
    if (id >= scenario.measurement_count()) throw std::out_of_range("measurement id outside the scenario");
  }
  // U is sorted, so renumbering by position is monotone and keeps
  // assignment indices unchanged.
  auto renumber = [&](const Context& c) {
    std::vector<MeasurementId> ids;
    for (const auto id : c) ids.push_back(static_cast<MeasurementId>(*u.position(id)));
    return Context(std::move(ids));
  };

  Cover traces;
  std::vector<std::size_t> source;
  for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
    auto w = scenario.cover()[i].intersect(u);
    if (w.empty()) continue;
    traces.push_back(std::move(w));
    source.push_back(i);
  }
  if (traces.empty())
    throw ModelError(ModelError::Kind::EmptyInducedCover, "induced cover has no nonempty contexts");

  std::vector<std::string> labels;
  for (const auto id : u) labels.push_back(scenario.measurements()[id]);
  Cover cover;
  for (const auto& w : traces) cover.push_back(renumber(w));
  auto sub = make_scenario(std::move(labels), scenario.outcomes(), cover);

  std::vector<Distribution> rows;
  for (const auto& member : sub.cover()) {
    const auto it = std::find(cover.begin(), cover.end(), member);
    const auto i = static_cast<std::size_t>(it - cover.begin());
    auto marginal = marginalize(e.row(source[i]), traces[i]);
    rows.emplace_back(e.semiring(), member, scenario.outcome_count(), marginal.weights());
  }
  return build_model(std::move(sub), e.semiring(), std::move(rows));
}

}  // namespace sheafctx
