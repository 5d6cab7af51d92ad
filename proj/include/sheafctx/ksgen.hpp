#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheafctx/model.hpp"
#include "sheafctx/scenario.hpp"

namespace sheafctx {

class KsError : public std::runtime_error {
 public:
  enum class Kind { NonBinaryOutcome, VariableContextSize, BadParameters };

  KsError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A scenario with O = {"0", "1"} whose maximal contexts all have n elements.
class KsScenario {
 public:
  /// Throws KsError(NonBinaryOutcome, VariableContextSize).
  explicit KsScenario(Scenario scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  std::size_t context_size() const noexcept { return context_size_; }

 private:
  Scenario scenario_;
  std::size_t context_size_;
};

/// o(s): how many measurements s sends to outcome 1.
std::size_t outcome_count(const Assignment& s);
std::size_t outcome_count(std::span<const OutcomeId> values);

/// The Boolean model with supp(e_C) = {s : o(s) = 1}.
EmpiricalModel ks_model(const KsScenario& ks);

/// The canonical extension to P_n X in closed form: on C in M the KS row;
/// elsewhere s is possible iff o(s|_W) <= 1 for every W in the down-closure
/// inside C.
EmpiricalModel ks_canonical_extension(const KsScenario& ks);

/// The automorphism group of the hypergraph (X, M) acts transitively on X.
bool is_symmetric_ks(const KsScenario& ks);
bool is_vertex_transitive(std::size_t vertex_count, const Cover& edges);

/// A measurement permutation mapping `from` to `to` and M onto itself.
std::optional<std::vector<MeasurementId>> find_automorphism(std::size_t vertex_count, const Cover& edges,
                                                            MeasurementId from, MeasurementId to);

struct RandomKsParams {
  std::size_t measurements = 4;
  std::size_t context_size = 2;
  std::size_t contexts = 2;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 10000;
};

/// Samples `contexts` distinct n-subsets of X until they cover X. Labels are
/// x1, x2, ... Throws KsError(BadParameters) when impossible or out of attempts.
KsScenario random_ks_scenario(const RandomKsParams& params);

/// Parses a cover such as "AB,BC,CA" or "x1 x2;x2 x3" into a KS scenario.
/// Contexts are split on ',' or ';'; measurements inside a context are split
/// on whitespace if present, else taken one character at a time. Measurement
/// order is order of first appearance.
KsScenario ks_scenario_from_spec(std::string_view spec);

}  // namespace sheafctx
