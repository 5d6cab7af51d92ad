#include "sheafctx/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace sheafctx {

Context::Context(std::vector<MeasurementId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool Context::contains(MeasurementId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::optional<std::size_t> Context::position(MeasurementId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

bool Context::is_subset_of(const Context& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

Context Context::intersect(const Context& other) const {
  Context out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
  return out;
}

Context Context::unite(const Context& other) const {
  Context out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out.ids_));
  return out;
}

std::optional<MeasurementId> Scenario::find_measurement(std::string_view label) const {
  const auto it = std::find(measurements_.begin(), measurements_.end(), label);
  if (it == measurements_.end()) return std::nullopt;
  return static_cast<MeasurementId>(it - measurements_.begin());
}

MeasurementId Scenario::measurement_id(std::string_view label) const {
  if (auto id = find_measurement(label)) return *id;
  throw ScenarioError(ScenarioError::Kind::UnknownLabel, "unknown measurement '" + std::string(label) + "'");
}

std::optional<OutcomeId> Scenario::find_outcome(char label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    if (outcomes_[i].front() == label) return static_cast<OutcomeId>(i);
  return std::nullopt;
}

Context Scenario::all_measurements() const {
  std::vector<MeasurementId> ids(measurements_.size());
  std::iota(ids.begin(), ids.end(), MeasurementId{0});
  return Context(std::move(ids));
}

std::size_t Scenario::max_context_size() const {
  std::size_t n = 0;
  for (const auto& c : cover_) n = std::max(n, c.size());
  return n;
}

std::optional<std::size_t> Scenario::cover_index(const Context& context) const {
  const auto it = std::find(cover_.begin(), cover_.end(), context);
  if (it == cover_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cover_.begin());
}

std::string Scenario::context_label(const Context& context, std::string_view separator) const {
  std::string out;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) out += separator;
    out += measurements_.at(context[i]);
  }
  return out;
}

Context Scenario::context_from_labels(std::span<const std::string> labels) const {
  std::vector<MeasurementId> ids;
  ids.reserve(labels.size());
  for (const auto& label : labels) ids.push_back(measurement_id(label));
  return Context(std::move(ids));
}

Scenario Scenario::with_cover(Cover cover) const { return make_scenario(measurements_, outcomes_, std::move(cover)); }

Cover normalize_cover(const Cover& cover) {
  Cover out;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto& c = cover[i];
    bool dominated = false;
    for (std::size_t j = 0; j < cover.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& d = cover[j];
      // strictly contained, or an equal copy that appears earlier
      if (c.is_subset_of(d) && (c.size() < d.size() || j < i)) dominated = true;
    }
    if (!dominated) out.push_back(c);
  }
  return out;
}

namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second)
      throw ScenarioError(ScenarioError::Kind::DuplicateLabel, std::string("duplicate ") + what + " '" + label + "'");
  }
}

}  // namespace

Scenario make_scenario(std::vector<std::string> measurements, std::vector<std::string> outcomes, Cover cover) {
  using Kind = ScenarioError::Kind;
  if (measurements.empty()) throw ScenarioError(Kind::EmptyMeasurements, "scenario has no measurements");
  if (outcomes.empty()) throw ScenarioError(Kind::EmptyOutcomes, "scenario has no outcomes");
  check_labels(measurements, "measurement");
  check_labels(outcomes, "outcome");
  for (const auto& o : outcomes) {
    if (o.size() != 1)
      throw ScenarioError(Kind::BadOutcomeLabel, "outcome labels must be single characters, got '" + o + "'");
  }
  for (const auto& c : cover) {
    for (const auto id : c) {
      if (id >= measurements.size())
        throw ScenarioError(Kind::UnknownLabel, "cover refers to measurement id " + std::to_string(id));
    }
  }
  cover = normalize_cover(cover);
  cover.erase(std::remove_if(cover.begin(), cover.end(), [](const Context& c) { return c.empty(); }), cover.end());
  if (cover.empty()) throw ScenarioError(Kind::EmptyCover, "cover has no nonempty contexts");
  std::vector<bool> covered(measurements.size(), false);
  for (const auto& c : cover)
    for (const auto id : c) covered[id] = true;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i])
      throw ScenarioError(Kind::UncoveredMeasurement, "measurement '" + measurements[i] + "' lies in no context");
  }

  Scenario s;
  s.measurements_ = std::move(measurements);
  s.outcomes_ = std::move(outcomes);
  s.cover_ = std::move(cover);
  return s;
}

Scenario validate_scenario(const RawScenario& raw) {
  check_labels(raw.measurements, "measurement");
  Cover cover;
  cover.reserve(raw.cover.size());
  for (const auto& member : raw.cover) {
    std::vector<MeasurementId> ids;
    for (const auto& label : member) {
      const auto it = std::find(raw.measurements.begin(), raw.measurements.end(), label);
      if (it == raw.measurements.end())
        throw ScenarioError(ScenarioError::Kind::UnknownLabel, "cover refers to unknown measurement '" + label + "'");
      ids.push_back(static_cast<MeasurementId>(it - raw.measurements.begin()));
    }
    cover.emplace_back(std::move(ids));
  }
  if (cover.empty() && !raw.measurements.empty())
    throw ScenarioError(ScenarioError::Kind::EmptyCover, "cover is empty");
  return make_scenario(raw.measurements, raw.outcomes, std::move(cover));
}

std::set<Context> down_closure(const Cover& cover) {
  std::set<Context> out;
  out.insert(Context{});
  for (const auto& c : cover) {
    const std::size_t k = c.size();
    // members are desk-sized; 2^k subsets each
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<MeasurementId> ids;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1U) ids.push_back(c[i]);
      out.insert(Context(std::move(ids)));
    }
  }
  return out;
}

bool cover_leq(const Cover& smaller, const Cover& larger) {
  return std::all_of(smaller.begin(), smaller.end(), [&](const Context& d) {
    return std::any_of(larger.begin(), larger.end(), [&](const Context& c) { return d.is_subset_of(c); });
  });
}

bool cover_leq(const Scenario& smaller, const Scenario& larger) {
  if (smaller.measurements() != larger.measurements() || smaller.outcomes() != larger.outcomes())
    throw ScenarioError(ScenarioError::Kind::MismatchedMeasurementSets, "covers are over different measurement sets");
  return cover_leq(smaller.cover(), larger.cover());
}

Cover power_cover(std::size_t measurement_count, std::size_t n) {
  if (n < 1 || n > measurement_count)
    throw ScenarioError(ScenarioError::Kind::BadArity, "power cover arity " + std::to_string(n) +
                                                           " outside [1, " + std::to_string(measurement_count) + "]");
  Cover out;
  std::vector<MeasurementId> pick(n);
  std::iota(pick.begin(), pick.end(), MeasurementId{0});
  while (true) {
    out.emplace_back(pick);
    // advance to the next combination in lexicographic order
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == measurement_count - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::size_t BellStructure::max_settings() const {
  std::size_t k = 0;
  for (const auto& s : sites) k = std::max(k, s.size());
  return k;
}

std::optional<std::size_t> BellStructure::site_of(MeasurementId id) const {
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].contains(id)) return i;
  return std::nullopt;
}

std::string site_tag(std::string_view label, std::size_t site) {
  return std::string(label) + "@" + std::to_string(site);
}

BellScenario bell_scenario(const std::vector<std::vector<std::string>>& site_lists, std::vector<std::string> outcomes) {
  if (site_lists.empty()) throw ScenarioError(ScenarioError::Kind::EmptySite, "Bell scenario needs at least one site");
  std::vector<std::string> labels;
  BellStructure structure;
  for (std::size_t i = 0; i < site_lists.size(); ++i) {
    if (site_lists[i].empty())
      throw ScenarioError(ScenarioError::Kind::EmptySite, "site " + std::to_string(i + 1) + " has no measurements");
    std::vector<MeasurementId> ids;
    for (const auto& label : site_lists[i]) {
      ids.push_back(static_cast<MeasurementId>(labels.size()));
      labels.push_back(site_tag(label, i + 1));
    }
    structure.sites.emplace_back(std::move(ids));
  }

  Cover cover;
  std::vector<std::size_t> choice(site_lists.size(), 0);
  while (true) {
    std::vector<MeasurementId> ids;
    for (std::size_t i = 0; i < choice.size(); ++i) ids.push_back(structure.sites[i][choice[i]]);
    cover.emplace_back(std::move(ids));
    std::size_t i = choice.size();
    while (i > 0 && ++choice[i - 1] == structure.sites[i - 1].size()) choice[--i] = 0;
    if (i == 0) break;
  }
  return {make_scenario(std::move(labels), std::move(outcomes), std::move(cover)), std::move(structure)};
}

}  // namespace sheafctx
