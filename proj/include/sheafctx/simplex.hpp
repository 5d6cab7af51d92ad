#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sheafctx/rational.hpp"

namespace sheafctx {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Outcome of deciding { x : A x = b, x >= 0 } != {}.
///
/// When feasible, `solution` is a basic feasible point. When infeasible,
/// `certificate` is a Farkas vector y with y^T A <= 0 componentwise and
/// y^T b > 0, which no non-negative x can satisfy.
struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> solution;
  std::vector<Rational> certificate;
};

/// Phase-one simplex over exact rationals with Bland's anti-cycling rule.
FeasibilityResult find_nonnegative_solution(const RationalMatrix& a, std::span<const Rational> b);

/// Checks y^T A <= 0 and y^T b > 0.
bool is_farkas_certificate(const RationalMatrix& a, std::span<const Rational> b, std::span<const Rational> y);

/// Some solution of A x = b (free variables set to zero), or nullopt if the
/// system is inconsistent. Gauss-Jordan elimination.
std::optional<std::vector<Rational>> solve_linear_system(const RationalMatrix& a, std::span<const Rational> b);

}  // namespace sheafctx
