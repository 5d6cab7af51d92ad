#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "sheafctx/model.hpp"

namespace sheafctx::detail {

/// Backtracking enumeration of S_e(U). Measurements of U are assigned in
/// scenario order and outcomes in outcome order, so sections come out in
/// lexicographic order. A partial assignment on a prefix P is pruned as soon
/// as its restriction to some C n P leaves supp(e_C|_{C n P}).
class SectionSearch {
 public:
  SectionSearch(const EmpiricalModel& e, const Context& domain);

  const Context& domain() const noexcept { return domain_; }

  /// Calls `visit(std::span<const OutcomeId>)` for each section until it
  /// returns false. `fixed[i]`, when engaged, pins the outcome of domain[i].
  template <class Visitor>
  void run(Visitor&& visit, std::span<const std::optional<OutcomeId>> fixed = {}) const {
    std::vector<OutcomeId> values(domain_.size(), 0);
    descend(0, values, fixed, visit);
  }

 private:
  struct Allowed {
    std::vector<std::size_t> positions;  // positions in the domain, ascending
    std::vector<bool> bitmap;            // used when the assignment space is small
    std::unordered_set<AssignmentIndex> set;

    bool admits(std::span<const OutcomeId> values, std::size_t outcome_count) const {
      AssignmentIndex index = 0;
      for (const auto p : positions) index = index * outcome_count + values[p];
      return bitmap.empty() ? set.count(index) != 0 : bitmap[index];
    }
  };

  template <class Visitor>
  bool descend(std::size_t depth, std::vector<OutcomeId>& values, std::span<const std::optional<OutcomeId>> fixed,
               Visitor& visit) const {
    if (depth == domain_.size()) return visit(std::span<const OutcomeId>(values));
    OutcomeId first = 0;
    OutcomeId last = static_cast<OutcomeId>(outcome_count_);
    if (depth < fixed.size() && fixed[depth]) {
      first = *fixed[depth];
      last = first + 1;
    }
    for (OutcomeId o = first; o < last; ++o) {
      values[depth] = o;
      bool ok = true;
      for (const auto& check : checks_[depth]) {
        if (!check.admits(values, outcome_count_)) {
          ok = false;
          break;
        }
      }
      if (ok && !descend(depth + 1, values, fixed, visit)) return false;
    }
    return true;
  }

  Context domain_;
  std::size_t outcome_count_;
  std::vector<std::vector<Allowed>> checks_;  // indexed by the depth that completes them
};

}  // namespace sheafctx::detail
