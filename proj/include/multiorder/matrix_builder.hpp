#pragma once

// Explicit m x m matrices with (a) nonzero determinant, (b) Q-independent
// components in every row, (c) last row orthogonal to all other rows.
//
// Row i < m-1 is (1, sqrt p_i1, ..., sqrt p_i(m-1)) with fresh primes per row,
// and the last row is the generalized cross product of the others, so (c)
// holds by construction and det = |last row|^2. Every condition is still
// re-verified exactly before a matrix is returned.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/linalg.hpp"
#include "multiorder/orders.hpp"

namespace multiorder {

struct OrderMatrix {
  std::size_t m = 0;
  std::vector<LinearForm> rows;
};

struct MatrixReport {
  bool invertible = false;
  std::vector<bool> rows_q_independent;
  std::vector<bool> last_row_orthogonal;

  bool all() const {
    return invertible && std::all_of(rows_q_independent.begin(), rows_q_independent.end(),
                                     [](bool b) { return b; }) &&
           std::all_of(last_row_orthogonal.begin(), last_row_orthogonal.end(),
                       [](bool b) { return b; });
  }
};

inline Matrix<FieldScalar> as_matrix(const OrderMatrix& a) {
  Matrix<FieldScalar> out;
  for (const auto& r : a.rows) out.push_back(r);
  return out;
}

inline MatrixReport verify(const OrderMatrix& a) {
  MatrixReport rep;
  const auto mat = as_matrix(a);
  rep.invertible = a.m > 0 && a.rows.size() == a.m && !determinant_bareiss(mat).is_zero();
  for (const auto& row : a.rows) rep.rows_q_independent.push_back(q_linear_independent(row));
  if (!a.rows.empty()) {
    const auto& last = a.rows.back();
    for (std::size_t i = 0; i + 1 < a.rows.size(); ++i)
      rep.last_row_orthogonal.push_back(dot(a.rows[i], last).is_zero());
  }
  return rep;
}

/// Builds a verified matrix. `seed` selects the primes; a failed verification
/// moves on to the next block of primes.
inline OrderMatrix build_order_matrix(std::size_t m, std::uint64_t seed,
                                      std::size_t retry_budget = 32) {
  if (m < 2) throw InvalidArgument("build_order_matrix needs m >= 2");
  const std::size_t per_row = m - 1;
  const std::size_t needed = (m - 1) * per_row;
  std::size_t offset = static_cast<std::size_t>(seed);
  for (std::size_t attempt = 0; attempt < retry_budget; ++attempt, offset += needed) {
    auto basis = std::make_shared<const RadicalBasis>(primes_from(offset, needed));
    Matrix<FieldScalar> rows;
    for (std::size_t i = 0; i < m - 1; ++i) {
      std::vector<FieldScalar> row{FieldScalar(1)};
      for (std::size_t t = 0; t < per_row; ++t)
        row.push_back(FieldScalar::sqrt_of(basis, Integer(static_cast<unsigned long>(
                                                      basis->primes()[i * per_row + t]))));
      rows.push_back(std::move(row));
    }
    rows.push_back(cofactor_vector(rows));
    OrderMatrix a{m, {}};
    for (auto& r : rows) a.rows.push_back(rebase(r, basis));
    if (verify(a).all()) return a;
  }
  throw BudgetExhausted("build_order_matrix: no verified matrix within retry budget");
}

}  // namespace multiorder
