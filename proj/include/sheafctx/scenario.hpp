#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sheafctx {

using MeasurementId = std::uint32_t;
using OutcomeId = std::uint32_t;

/// A set of measurements, stored as sorted unique ids. Id order is the
/// scenario's measurement order, so iterating a context visits its
/// measurements in the order used for assignment strings.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<MeasurementId> ids);
  Context(std::initializer_list<MeasurementId> ids) : Context(std::vector<MeasurementId>(ids)) {}

  std::span<const MeasurementId> ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  MeasurementId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  bool contains(MeasurementId id) const;
  /// Position of `id` inside this context, if present.
  std::optional<std::size_t> position(MeasurementId id) const;
  bool is_subset_of(const Context& other) const;
  Context intersect(const Context& other) const;
  Context unite(const Context& other) const;

  friend bool operator==(const Context&, const Context&) = default;
  friend auto operator<=>(const Context&, const Context&) = default;

 private:
  std::vector<MeasurementId> ids_;
};

using Cover = std::vector<Context>;

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind {
    EmptyCover,
    UncoveredMeasurement,
    UnknownLabel,
    DuplicateLabel,
    EmptyMeasurements,
    EmptyOutcomes,
    BadOutcomeLabel,
    BadArity,
    MismatchedMeasurementSets,
    EmptySite,
  };

  ScenarioError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Unvalidated scenario description, labels only.
struct RawScenario {
  std::vector<std::string> measurements;
  std::vector<std::string> outcomes;
  std::vector<std::vector<std::string>> cover;
};

/// A validated measurement scenario (X, O, M). The cover is an antichain of
/// maximal contexts that covers X. Immutable once built.
class Scenario {
 public:
  const std::vector<std::string>& measurements() const noexcept { return measurements_; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const Cover& cover() const noexcept { return cover_; }

  std::size_t measurement_count() const noexcept { return measurements_.size(); }
  std::size_t outcome_count() const noexcept { return outcomes_.size(); }

  std::optional<MeasurementId> find_measurement(std::string_view label) const;
  /// Throws ScenarioError(UnknownLabel).
  MeasurementId measurement_id(std::string_view label) const;
  std::optional<OutcomeId> find_outcome(char label) const;

  /// The whole measurement set X as a context.
  Context all_measurements() const;
  /// n(M): the size of the largest maximal context.
  std::size_t max_context_size() const;
  std::optional<std::size_t> cover_index(const Context& context) const;

  /// Labels of the context's measurements joined by `separator`.
  std::string context_label(const Context& context, std::string_view separator = " ") const;
  Context context_from_labels(std::span<const std::string> labels) const;

  /// Same X and O with a different cover; the cover is normalized and validated.
  Scenario with_cover(Cover cover) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  friend Scenario make_scenario(std::vector<std::string>, std::vector<std::string>, Cover);

  std::vector<std::string> measurements_;
  std::vector<std::string> outcomes_;
  Cover cover_;
};

/// Builds a scenario from labels, dropping dominated cover members.
Scenario validate_scenario(const RawScenario& raw);
/// Builds a scenario from already-resolved ids.
Scenario make_scenario(std::vector<std::string> measurements, std::vector<std::string> outcomes,
                       Cover cover);

/// Removes duplicates and members strictly contained in another member.
/// First occurrences keep their relative order.
Cover normalize_cover(const Cover& cover);

/// All subsets of members of the cover, including the empty context.
std::set<Context> down_closure(const Cover& cover);

/// M <= M': every member of `smaller` lies inside some member of `larger`.
bool cover_leq(const Cover& smaller, const Cover& larger);
/// As above, after checking both scenarios share X and O.
bool cover_leq(const Scenario& smaller, const Scenario& larger);

/// P_n X: every n-element subset of {0, ..., measurement_count - 1}, in
/// lexicographic order.
Cover power_cover(std::size_t measurement_count, std::size_t n);

/// Sites of a Bell scenario; each site is the set of its tagged measurements.
struct BellStructure {
  std::vector<Context> sites;

  std::size_t party_count() const noexcept { return sites.size(); }
  /// k = max_i |X_i|.
  std::size_t max_settings() const;
  std::optional<std::size_t> site_of(MeasurementId id) const;

  friend bool operator==(const BellStructure&, const BellStructure&) = default;
};

struct BellScenario {
  Scenario scenario;
  BellStructure structure;
};

/// "label@site", with 1-based site index.
std::string site_tag(std::string_view label, std::size_t site);

/// Measurements are tagged per site (site-major order); the cover holds every
/// one-measurement-per-site tuple, site 1 varying slowest.
BellScenario bell_scenario(const std::vector<std::vector<std::string>>& site_lists,
                           std::vector<std::string> outcomes);

}  // namespace sheafctx
