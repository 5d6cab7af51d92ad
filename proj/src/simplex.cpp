#include "sheafctx/simplex.hpp"

#include <stdexcept>

namespace sheafctx {

namespace {

/// Tableau [A | I] with artificial basis; rows with negative rhs are negated
/// up front so the artificial basis starts feasible.
class PhaseOneTableau {
 public:
  PhaseOneTableau(const RationalMatrix& a, std::span<const Rational> b)
      : m_(a.rows()), n_(a.cols()), t_(m_, n_ + m_), rhs_(b.begin(), b.end()), basis_(m_), flipped_(m_, false) {
    for (std::size_t i = 0; i < m_; ++i) {
      flipped_[i] = rhs_[i] < 0;
      const Rational sign = flipped_[i] ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign * a(i, j);
      t_(i, n_ + i) = 1;
      rhs_[i] *= sign;
      basis_[i] = n_ + i;
    }
  }

  FeasibilityResult solve() {
    while (true) {
      const auto entering = entering_column();
      if (!entering) break;
      const auto leaving = leaving_row(*entering);
      // phase one is bounded below by zero, so a ratio row always exists
      if (!leaving) throw std::logic_error("phase-one simplex reported unbounded");
      pivot(*leaving, *entering);
    }

    FeasibilityResult result;
    Rational objective = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) objective += rhs_[i];

    if (objective == 0) {
      result.feasible = true;
      result.solution.assign(n_, Rational(0));
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) result.solution[basis_[i]] = rhs_[i];
      return result;
    }

    // y = c_B^T B^{-1}; B^{-1} sits in the artificial columns.
    result.certificate.assign(m_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t i = 0; i < m_; ++i) result.certificate[i] += t_(r, n_ + i);
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (flipped_[i]) result.certificate[i] = -result.certificate[i];
    return result;
  }

 private:
  Rational cost(std::size_t j) const { return j >= n_ ? Rational(1) : Rational(0); }

  // Bland: lowest-index column with negative reduced cost.
  std::optional<std::size_t> entering_column() const {
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      Rational reduced = cost(j);
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] >= n_ && t_(i, j) != 0) reduced -= t_(i, j);
      }
      if (reduced < 0) return j;
    }
    return std::nullopt;
  }

  // Minimum ratio; ties go to the lowest basic variable index.
  std::optional<std::size_t> leaving_row(std::size_t col) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      if (t_(i, col) <= 0) continue;
      Rational ratio = rhs_[i] / t_(i, col);
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t_(row, col);
    for (std::size_t j = 0; j < n_ + m_; ++j)
      if (t_(row, j) != 0) t_(row, j) /= p;
    rhs_[row] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || t_(i, col) == 0) continue;
      const Rational f = t_(i, col);
      for (std::size_t j = 0; j < n_ + m_; ++j)
        if (t_(row, j) != 0) t_(i, j) -= f * t_(row, j);
      rhs_[i] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  std::size_t m_;
  std::size_t n_;
  RationalMatrix t_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<bool> flipped_;
};

}  // namespace

FeasibilityResult find_nonnegative_solution(const RationalMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rhs length does not match matrix rows");
  return PhaseOneTableau(a, b).solve();
}

bool is_farkas_certificate(const RationalMatrix& a, std::span<const Rational> b, std::span<const Rational> y) {
  if (y.size() != a.rows() || b.size() != a.rows()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += y[i] * a(i, j);
    if (s > 0) return false;
  }
  Rational yb = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) yb += y[i] * b[i];
  return yb > 0;
}

std::optional<std::vector<Rational>> solve_linear_system(const RationalMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rhs length does not match matrix rows");
  const auto m = a.rows();
  const auto n = a.cols();
  RationalMatrix t(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n) = b[i];
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && t(p, c) == 0) ++p;
    if (p == m) continue;
    if (p != r)
      for (std::size_t j = 0; j <= n; ++j) std::swap(t(p, j), t(r, j));
    const Rational inv = 1 / t(r, c);
    for (std::size_t j = c; j <= n; ++j) t(r, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t(i, c) == 0) continue;
      const Rational f = t(i, c);
      for (std::size_t j = c; j <= n; ++j) t(i, j) -= f * t(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (t(i, n) != 0) return std::nullopt;

  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = t(i, n);
  return x;
}

}  // namespace sheafctx
