#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "expord/rational.hpp"

namespace expord {

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

  RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
      for (const auto& v : row) entries_.push_back(v);
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  RatVector col(std::size_t j) const {
    RatVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  RatVector row(std::size_t i) const {
    RatVector out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
  }

  void set_col(std::size_t j, const RatVector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shapes");
    RatMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> entries_;
};

inline RatVector operator*(const RatMatrix& a, const RatVector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shapes");
  RatVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && x[j] != 0) out[i] += a(i, j) * x[j];
  return out;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product shapes");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

/// Row vector times matrix.
inline RatVector vec_times(const RatVector& y, const RatMatrix& a) {
  if (y.size() != a.rows()) throw DimensionMismatch("vector-matrix shapes");
  RatVector out(a.cols(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += y[i] * a(i, j);
  }
  return out;
}

namespace detail {

/// Clears denominators row by row. Positive row scaling preserves rank and
/// the solution set of an augmented system.
inline std::vector<std::vector<Integer>> to_row_integers(const RatMatrix& a) {
  std::vector<std::vector<Integer>> out(a.rows(), std::vector<Integer>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) l = lcm(l, denominator(a(i, j)));
    for (std::size_t j = 0; j < a.cols(); ++j)
      out[i][j] = numerator(a(i, j)) * (l / denominator(a(i, j)));
  }
  return out;
}

/// Fraction-free (Bareiss) forward elimination. Returns the pivot positions
/// (row, col); the matrix is left in integer echelon form.
inline std::vector<std::pair<std::size_t, std::size_t>> bareiss_echelon(
    std::vector<std::vector<Integer>>& m) {
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  Integer prev = 1;
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
    std::size_t sel = pr;
    while (sel < rows && m[sel][pc] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[pr], m[sel]);
    const Integer piv = m[pr][pc];
    for (std::size_t i = pr + 1; i < rows; ++i) {
      for (std::size_t j = pc + 1; j < cols; ++j)
        m[i][j] = (m[i][j] * piv - m[i][pc] * m[pr][j]) / prev;
      m[i][pc] = 0;
    }
    prev = piv;
    pivots.emplace_back(pr, pc);
    ++pr;
  }
  return pivots;
}

}  // namespace detail

/// Exact rank of a rational matrix.
inline std::size_t rank(const RatMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  auto m = detail::to_row_integers(a);
  return detail::bareiss_echelon(m).size();
}

/// Returns some exact solution of A x = b (free variables set to zero), or
/// nullopt when b is outside the column space of A.
inline std::optional<RatVector> solve_exact(const RatMatrix& a, const RatVector& b) {
  if (a.rows() != b.size()) throw DimensionMismatch("solve_exact shapes");
  const std::size_t n = a.cols();
  RatMatrix aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  auto m = detail::to_row_integers(aug);
  auto pivots = detail::bareiss_echelon(m);

  // Inconsistent iff some pivot landed in the augmented column, i.e. a row
  // with zero coefficients and nonzero right-hand side.
  if (!pivots.empty() && pivots.back().second == n) return std::nullopt;

  RatVector x(n, Rational(0));
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const auto [r, c] = pivots[k];
    Rational rhs = make_rational(m[r][n], Integer(1));
    for (std::size_t j = c + 1; j < n; ++j)
      if (m[r][j] != 0 && x[j] != 0) rhs -= make_rational(m[r][j], Integer(1)) * x[j];
    x[c] = rhs / make_rational(m[r][c], Integer(1));
  }
  return x;
}

/// Basis of the kernel of A, one vector per free column.
inline std::vector<RatVector> nullspace_basis(const RatMatrix& a) {
  const std::size_t n = a.cols();
  auto m = detail::to_row_integers(a);
  auto pivots = detail::bareiss_echelon(m);

  std::vector<bool> is_pivot(n, false);
  for (auto [r, c] : pivots) is_pivot[c] = true;

  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVector x(n, Rational(0));
    x[f] = 1;
    for (std::size_t k = pivots.size(); k-- > 0;) {
      const auto [r, c] = pivots[k];
      Rational rhs = 0;
      for (std::size_t j = c + 1; j < n; ++j)
        if (m[r][j] != 0 && x[j] != 0) rhs -= make_rational(m[r][j], Integer(1)) * x[j];
      x[c] = rhs / make_rational(m[r][c], Integer(1));
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

/// One nonzero kernel vector of A, or nullopt when A has full column rank.
inline std::optional<RatVector> nullspace_vector(const RatMatrix& a) {
  auto basis = nullspace_basis(a);
  if (basis.empty()) return std::nullopt;
  return std::move(basis.front());
}

}  // namespace expord
