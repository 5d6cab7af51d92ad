#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sheafctx/rational.hpp"
#include "sheafctx/scenario.hpp"

namespace sheafctx {

/// Probability: non-negative rationals summing to 1. Boolean: {0, 1} with
/// or/and, nonempty support. Signed: rationals summing to 1.
enum class Semiring { Probability, Boolean, Signed };

std::string_view to_string(Semiring semiring);
std::optional<Semiring> parse_semiring(std::string_view text);

/// Index of an assignment on a context: outcomes read as digits base |O|,
/// first measurement most significant. Index order is lexicographic order of
/// the assignment strings.
using AssignmentIndex = std::uint64_t;

/// |O|^length; throws ModelError(ContextTooLarge) on overflow.
AssignmentIndex assignment_count(std::size_t length, std::size_t outcome_count);
AssignmentIndex encode_assignment(std::span<const OutcomeId> values, std::size_t outcome_count);
std::vector<OutcomeId> decode_assignment(AssignmentIndex index, std::size_t length, std::size_t outcome_count);

/// A functional assignment of outcomes to the measurements of a context.
struct Assignment {
  Context context;
  std::vector<OutcomeId> values;  // aligned with context order

  OutcomeId at(MeasurementId id) const;
  Assignment restrict_to(const Context& sub) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Outcome labels concatenated in context order, e.g. "01".
std::string assignment_string(std::span<const OutcomeId> values, const Scenario& scenario);
std::string assignment_string(AssignmentIndex index, std::size_t length, const Scenario& scenario);

struct Violation {
  std::size_t first_index = 0;   // cover position of the first context
  std::size_t second_index = 0;  // cover position of the second context
  Context first;
  Context second;
  Context overlap;
  AssignmentIndex assignment = 0;  // on the overlap
  Rational first_value;
  Rational second_value;
};

class ModelError : public std::runtime_error {
 public:
  enum class Kind {
    NotSubcontext,
    IncompatibleRows,
    MissingRow,
    UnexpectedRow,
    NormalizationError,
    NotInDownClosure,
    EmptyInducedCover,
    SemiringMismatch,
    BadValue,
    ContextTooLarge,
  };

  ModelError(Kind kind, const std::string& message, std::optional<Violation> violation = std::nullopt)
      : std::runtime_error(message), kind_(kind), violation_(std::move(violation)) {}

  Kind kind() const noexcept { return kind_; }
  const std::optional<Violation>& violation() const noexcept { return violation_; }

 private:
  Kind kind_;
  std::optional<Violation> violation_;
};

/// A semiring-valued weight function over the assignments of one context.
/// Stored sparsely: absent assignments weigh 0.
class Distribution {
 public:
  /// Zero weights are dropped. Throws BadValue for out-of-range keys, Boolean
  /// values outside {0,1}, or negative probability weights. Normalization is
  /// not enforced here; see is_normalized().
  Distribution(Semiring semiring, Context context, std::size_t outcome_count,
               std::map<AssignmentIndex, Rational> weights);

  /// The unique distribution on the empty context.
  static Distribution point(Semiring semiring, std::size_t outcome_count);

  Semiring semiring() const noexcept { return semiring_; }
  const Context& context() const noexcept { return context_; }
  std::size_t outcome_count() const noexcept { return outcome_count_; }
  const std::map<AssignmentIndex, Rational>& weights() const noexcept { return weights_; }

  Rational weight(AssignmentIndex index) const;
  Rational weight(const Assignment& assignment) const;
  std::vector<AssignmentIndex> support() const;
  bool in_support(AssignmentIndex index) const { return weights_.count(index) != 0; }

  /// Sum is 1 (Probability, Signed) or support is nonempty (Boolean).
  bool is_normalized() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Semiring semiring_;
  Context context_;
  std::size_t outcome_count_;
  std::map<AssignmentIndex, Rational> weights_;
};

/// Pushes weight forward along restriction to `sub` (sum, or "or" for Boolean).
Distribution marginalize(const Distribution& d, const Context& sub);

/// First pair of maximal contexts whose marginals disagree on their overlap,
/// in (C1, C2, t) order. `rows` must be aligned with `scenario.cover()`.
std::optional<Violation> check_compatibility(const Scenario& scenario, std::span<const Distribution> rows);

/// A compatible family of distributions, one per maximal context.
class EmpiricalModel {
 public:
  const Scenario& scenario() const noexcept { return scenario_; }
  Semiring semiring() const noexcept { return semiring_; }
  const std::vector<Distribution>& rows() const noexcept { return rows_; }
  const Distribution& row(std::size_t cover_index) const { return rows_.at(cover_index); }
  /// Throws ModelError(MissingRow) if the context is not maximal.
  const Distribution& row(const Context& context) const;

  friend bool operator==(const EmpiricalModel&, const EmpiricalModel&) = default;

 private:
  friend EmpiricalModel build_model(Scenario, Semiring, std::vector<Distribution>);

  Scenario scenario_;
  Semiring semiring_ = Semiring::Probability;
  std::vector<Distribution> rows_;
};

/// Validates and assembles a model. Rows may come in any order; they are
/// matched to maximal contexts by context.
EmpiricalModel build_model(Scenario scenario, Semiring semiring, std::vector<Distribution> rows);

/// e_U for U in the down-closure, marginalized from the first covering
/// maximal context. Debug builds check every covering context agrees.
Distribution context_distribution(const EmpiricalModel& e, const Context& u);

/// S_e(U): assignments on U whose restriction to every C n U lies in the
/// support of e_C restricted to C n U. Sections are in lexicographic order.
struct SectionSet {
  Context context;
  std::vector<std::vector<OutcomeId>> sections;

  std::size_t size() const noexcept { return sections.size(); }
  bool empty() const noexcept { return sections.empty(); }
  bool contains(std::span<const OutcomeId> values) const;
};

SectionSet section_set(const EmpiricalModel& e, const Context& u);

/// Support-level Boolean image of a model; identity on Boolean models.
EmpiricalModel possibilistic_collapse(const EmpiricalModel& e);

/// The model {e_{U n C}} on (U, O, normalize{U n C}). Measurements of U keep
/// their labels and relative order.
EmpiricalModel induced_submodel(const EmpiricalModel& e, const Context& u);

}  // namespace sheafctx
