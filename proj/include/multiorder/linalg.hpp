#pragma once

// Dense linear algebra over an exact field: Q (Rational) or a multiquadratic
// field (FieldScalar). Everything is generic over the element type.

#include <concepts>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"

namespace multiorder {

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

template <class T>
concept ExactField = requires(const T& a, const T& b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { is_zero(a) } -> std::convertible_to<bool>;
};

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Rank via Gaussian elimination.
template <ExactField T>
std::size_t rank(Matrix<T> a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && is_zero(a[piv][c])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[r], a[piv]);
    const T inv = T(1) / a[r][c];
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (is_zero(a[i][c])) continue;
      const T f = a[i][c] * inv;
      for (std::size_t k = c; k < cols; ++k) a[i][k] = a[i][k] - f * a[r][k];
    }
    ++r;
  }
  return r;
}

/// Fraction-free (Bareiss) elimination; every division is exact.
template <ExactField T>
T determinant_bareiss(Matrix<T> a) {
  const std::size_t n = a.size();
  if (n == 0) return T(1);
  T prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(a[k][k])) {
      std::size_t piv = k + 1;
      while (piv < n && is_zero(a[piv][k])) ++piv;
      if (piv == n) return T(0);
      std::swap(a[k], a[piv]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return negate ? T(-a[n - 1][n - 1]) : a[n - 1][n - 1];
}

namespace detail {
template <ExactField T>
T laplace(const Matrix<T>& a, std::size_t row, std::vector<std::size_t>& cols) {
  if (cols.size() == 1) return a[row][cols[0]];
  T acc(0);
  for (std::size_t t = 0; t < cols.size(); ++t) {
    const std::size_t c = cols[t];
    if (is_zero(a[row][c])) continue;
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(t));
    T minor = laplace(a, row + 1, cols);
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(t), c);
    if (t % 2 == 0)
      acc = acc + a[row][c] * minor;
    else
      acc = acc - a[row][c] * minor;
  }
  return acc;
}
}  // namespace detail

/// Determinant by cofactor expansion along successive rows.
template <ExactField T>
T determinant_cofactor(const Matrix<T>& a) {
  if (a.empty()) return T(1);
  std::vector<std::size_t> cols(a.size());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return detail::laplace(a, 0, cols);
}

/// Generalized cross product of m-1 vectors in dimension m: the vector of
/// signed maximal minors, orthogonal to every input row. Appending it as a
/// last row gives a matrix whose determinant is its squared norm.
template <ExactField T>
std::vector<T> cofactor_vector(const Matrix<T>& rows) {
  const std::size_t m = rows.size() + 1;
  std::vector<T> out;
  for (std::size_t j = 0; j < m; ++j) {
    Matrix<T> minor;
    for (const auto& row : rows) {
      std::vector<T> r;
      for (std::size_t c = 0; c < m; ++c)
        if (c != j) r.push_back(row[c]);
      minor.push_back(std::move(r));
    }
    T d = determinant_cofactor(minor);
    out.push_back(((m - 1 + j) % 2 == 0) ? d : T(-d));
  }
  return out;
}

/// Coefficients a with sum_j a_j * vectors[j] == target, or nullopt when
/// target is outside the span. Vectors must be linearly independent.
template <ExactField T>
std::optional<std::vector<T>> solve_in_span(const std::vector<std::vector<T>>& vectors,
                                            const std::vector<T>& target) {
  const std::size_t s = vectors.size();
  const std::size_t dim = target.size();
  // Augmented system: dim equations, s unknowns.
  Matrix<T> a(dim, std::vector<T>(s + 1));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < s; ++j) a[i][j] = vectors[j][i];
    a[i][s] = target[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < s && r < dim; ++c) {
    std::size_t piv = r;
    while (piv < dim && is_zero(a[piv][c])) ++piv;
    if (piv == dim) continue;
    std::swap(a[r], a[piv]);
    const T inv = T(1) / a[r][c];
    for (std::size_t k = c; k <= s; ++k) a[r][k] = a[r][k] * inv;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      const T f = a[i][c];
      for (std::size_t k = c; k <= s; ++k) a[i][k] = a[i][k] - f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < dim; ++i)
    if (!is_zero(a[i][s])) return std::nullopt;
  if (r < s) throw InvalidArgument("solve_in_span: spanning vectors are dependent");
  std::vector<T> coeffs(s, T(0));
  for (std::size_t i = 0; i < r; ++i) coeffs[pivot_col[i]] = a[i][s];
  return coeffs;
}

/// Inverse by Gauss-Jordan elimination.
template <ExactField T>
Matrix<T> inverse(Matrix<T> a) {
  const std::size_t n = a.size();
  Matrix<T> inv(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = T(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && is_zero(a[piv][c])) ++piv;
    if (piv == n) throw DivisionByZero();
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const T f = T(1) / a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] = a[c][k] * f;
      inv[c][k] = inv[c][k] * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || is_zero(a[i][c])) continue;
      const T g = a[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[i][k] = a[i][k] - g * a[c][k];
        inv[i][k] = inv[i][k] - g * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace multiorder
