#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "sheafctx/extension.hpp"
#include "sheafctx/model.hpp"
#include "sheafctx/scenario.hpp"
#include "sheafctx/solver.hpp"

namespace sheafctx {

class BellError : public std::runtime_error {
 public:
  enum class Kind { CoverNotPowerCover, BadArity, NotConstructedPair, NotBoolean };

  BellError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Site copies of a base measurement set X. The tagged measurement <x, i>
/// (site i, 0-based here) has id i * |X| + x, which is the site-major order
/// used by bell_scenario.
class CodiagonalMap {
 public:
  CodiagonalMap(std::size_t base_count, std::size_t site_count);

  std::size_t base_count() const noexcept { return base_count_; }
  std::size_t site_count() const noexcept { return site_count_; }

  MeasurementId tagged(MeasurementId base, std::size_t site) const;
  MeasurementId base_of(MeasurementId tagged) const { return static_cast<MeasurementId>(tagged % base_count_); }
  std::size_t site_of(MeasurementId tagged) const { return tagged / base_count_; }

  /// Forget the site: {x : <x, i> in U for some i}.
  Context underline(const Context& tagged) const;
  /// Copies of one base measurement agree.
  bool is_codiagonal(const Assignment& s) const;
  /// The base assignment of a codiagonal one; throws std::invalid_argument otherwise.
  Assignment underline(const Assignment& s) const;
  /// The unique codiagonal assignment on `domain` whose underline is `base`.
  Assignment lift(const Assignment& base, const Context& domain) const;
  /// E^codiag(U), in lexicographic order of the underlying base assignments.
  std::vector<Assignment> codiagonal_assignments(const Context& domain, std::size_t outcome_count) const;

  friend bool operator==(const CodiagonalMap&, const CodiagonalMap&) = default;

 private:
  std::size_t base_count_;
  std::size_t site_count_;
};

struct BellModel {
  EmpiricalModel model;
  BellStructure structure;
  CodiagonalMap map;
};

/// f^Bell on (n copies of X, O, X^n) from a model on (X, O, P_n X):
/// f^Bell_C(s) = f_{underline C}(underline s) for codiagonal s, else 0.
/// Works for any semiring.
BellModel bell_construction(const EmpiricalModel& f, std::size_t sites);

/// Canonical extension to P_n X (n = largest context size) followed by the
/// Bell construction; forwards the extension report when e' is not a model.
std::variant<BellModel, ExtensionReport> bellify(const EmpiricalModel& e);

struct BijectionReport {
  bool holds = false;
  std::size_t base_sections = 0;  // |S_f(X)|
  std::size_t bell_sections = 0;  // |S_{f^Bell}(X^n)|
  std::optional<ContextualityClass> base_class;
  std::optional<ContextualityClass> bell_class;
};

/// Checks that underline is a bijection S_{f^Bell} -> S_f with lift as its
/// inverse, and that f and f^Bell classify identically (skipped for Signed).
/// Throws BellError(NotConstructedPair) if `bell` was not built from `f`.
BijectionReport global_section_bijection_check(const EmpiricalModel& f, const BellModel& bell);

}  // namespace sheafctx
