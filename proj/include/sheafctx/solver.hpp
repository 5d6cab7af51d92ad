#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "sheafctx/model.hpp"

namespace sheafctx {

/// Levels of the contextuality hierarchy. SC implies LC implies C.
enum class ContextualityClass { NonContextual, Contextual, LogicallyContextual, StronglyContextual };

std::string_view to_string(ContextualityClass c);
std::optional<ContextualityClass> parse_contextuality_class(std::string_view text);

class SolverError : public std::runtime_error {
 public:
  enum class Kind { SemiringMismatch, InstanceTooLarge };

  SolverError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A distribution over global assignments (outcomes in scenario order).
struct GlobalDistribution {
  std::vector<std::vector<OutcomeId>> assignments;
  std::vector<Rational> weights;
};

/// Multipliers on the marginal constraints "sum_{g|C = s} d(g) = e_C(s)",
/// one per supported (C, s). Valid when every g in S_e(X) has a non-positive
/// multiplier sum while the weighted right-hand side is positive.
struct FarkasCertificate {
  struct Entry {
    std::size_t context_index;
    AssignmentIndex assignment;
    Rational multiplier;
  };
  std::vector<Entry> entries;
};

using GlobalSectionWitness = std::variant<GlobalDistribution, Assignment, FarkasCertificate>;

/// First element of S_e(X) in (measurement order, outcome order), if any.
std::optional<Assignment> find_consistent_global(const EmpiricalModel& e);

/// S_e(X) is empty.
bool is_strongly_contextual(const EmpiricalModel& e);

/// A local section (context, assignment) that no consistent global extends.
struct LocalObstruction {
  std::size_t context_index;
  AssignmentIndex assignment;
};

struct LogicalResult {
  bool contextual = false;
  std::optional<LocalObstruction> witness;
};

/// Logical contextuality of the possibilistic collapse: some possible local
/// assignment is not the restriction of any consistent global assignment.
LogicalResult is_logically_contextual(const EmpiricalModel& e);

struct ExtendabilityResult {
  bool extendable = false;
  GlobalSectionWitness witness;  // GlobalDistribution or FarkasCertificate
};

/// Decides whether some probability distribution d on S_e(X) has d|_C = e_C
/// for every maximal context, by exact phase-one simplex.
ExtendabilityResult is_probabilistically_extendable(const EmpiricalModel& e);

/// Re-checks a witness with plain rational arithmetic: a distribution must
/// marginalize to every row, an assignment must lie in S_e(X), and a
/// certificate must satisfy the Farkas conditions over S_e(X).
bool verify_witness(const EmpiricalModel& e, const GlobalSectionWitness& witness);

/// Boolean models classify among {NC, LC, SC}; Signed models are rejected.
ContextualityClass classify(const EmpiricalModel& e);

/// Solves the marginal equations over all of E(X) without sign constraints.
/// Throws SolverError(InstanceTooLarge) when |O|^|X| exceeds `max_variables`.
std::optional<GlobalDistribution> solve_signed_global_section(const EmpiricalModel& e,
                                                              std::size_t max_variables = std::size_t{1} << 12);

}  // namespace sheafctx
