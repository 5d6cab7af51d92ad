#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sheafctx/model.hpp"

namespace sheafctx {

class ExtensionError : public std::runtime_error {
 public:
  enum class Kind { CoverNotLarger, NotBoolean, InstanceTooLarge, NotAnExtension };

  ExtensionError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Result of building the canonical candidate e' on a larger cover.
struct ExtensionReport {
  struct WellDefined {
    EmpiricalModel model;
  };
  /// S_e(C) is empty: e is strongly non-extendable to the target cover.
  struct EmptySupport {
    std::size_t target_index;
    Context context;
  };
  /// The candidate family signals.
  struct Incompatible {
    Violation violation;
  };
  /// The candidate is compatible but misses a possible local assignment of e:
  /// `assignment` on original context `original_index` has no preimage in
  /// S_e of target context `target_index`.
  struct NotExtending {
    std::size_t original_index;
    AssignmentIndex assignment;
    std::size_t target_index;
  };

  Scenario target;
  /// Boolean rows with supp = S_e(C), aligned with target.cover().
  std::vector<Distribution> candidate;
  std::variant<WellDefined, EmptySupport, Incompatible, NotExtending> status;

  bool well_defined() const noexcept { return std::holds_alternative<WellDefined>(status); }
  const EmpiricalModel& model() const { return std::get<WellDefined>(status).model; }
};

/// Canonical extension of a Boolean model to a cover above its own.
/// Throws ExtensionError(NotBoolean, CoverNotLarger).
ExtensionReport canonical_extension(const EmpiricalModel& e, const Cover& target);

/// supp(e'_C) = S_e(C), three ways: backtracking with down-closure pruning,
/// the literal conjunction over every W in the down-closure inside C, and
/// the maximal-contexts-only form. All return ascending assignment indices.
std::vector<AssignmentIndex> canonical_support(const EmpiricalModel& e, const Context& c);
std::vector<AssignmentIndex> canonical_support_by_subcontexts(const EmpiricalModel& e, const Context& c);
std::vector<AssignmentIndex> canonical_support_by_maximal_contexts(const EmpiricalModel& e, const Context& c);

/// f_D = e_D for every maximal context D of e. Throws CoverNotLarger when f
/// does not live on a larger cover over the same X and O.
bool is_extension(const EmpiricalModel& f, const EmpiricalModel& e);

struct BruteForceOptions {
  /// Upper bound on sum_C |candidate pool of C|; the search visits at most
  /// 2^max_state_bits support families.
  std::size_t max_state_bits = 20;
  /// Draw each supp(f_C) from S_e(C) (sufficient by the support bound on
  /// extensions) rather than from all of E(C).
  bool restrict_to_consistent = true;
};

/// Exhaustive search for any Boolean model on the target cover extending e.
/// Returns the first one found. Throws ExtensionError(InstanceTooLarge).
std::optional<EmpiricalModel> brute_force_extension(const EmpiricalModel& e, const Cover& target,
                                                    const BruteForceOptions& options = {});

inline bool brute_force_extendable(const EmpiricalModel& e, const Cover& target,
                                   const BruteForceOptions& options = {}) {
  return brute_force_extension(e, target, options).has_value();
}

struct NonExtendability {
  bool strongly_non_extendable = false;
  std::optional<Context> witness;  // first target context with S_e(C) empty
};

/// Some target context has no consistent assignment. Computed both from
/// S_e(C) and from strong contextuality of the induced sub-model on C; the
/// two must agree (std::logic_error otherwise).
NonExtendability is_strongly_non_extendable(const EmpiricalModel& e, const Cover& target);

/// For an extension f of e, checks that each f_C is a global section of the
/// sub-model of e induced on C. Throws ExtensionError(NotAnExtension).
bool check_submodel_proposition(const EmpiricalModel& e, const EmpiricalModel& f);

}  // namespace sheafctx
