#pragma once

// Integer vectors, canonical box enumeration and exact sublattice tools
// (integer kernels, LLL size reduction, membership).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/linalg.hpp"

namespace multiorder {

/// Element of Z^m with arbitrary-precision entries.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t m) : e_(m, Integer(0)) {}
  LatticeVector(std::initializer_list<long> xs) {
    for (long x : xs) e_.emplace_back(x);
  }
  explicit LatticeVector(std::vector<Integer> xs) : e_(std::move(xs)) {}

  static LatticeVector from_int64(std::span<const std::int64_t> xs) {
    LatticeVector v;
    v.e_.reserve(xs.size());
    for (auto x : xs) v.e_.emplace_back(static_cast<long>(x));
    return v;
  }

  static LatticeVector unit(std::size_t m, std::size_t i) {
    LatticeVector v(m);
    v.e_[i] = 1;
    return v;
  }

  std::size_t rank() const { return e_.size(); }
  const Integer& operator[](std::size_t i) const { return e_[i]; }
  Integer& operator[](std::size_t i) { return e_[i]; }
  std::span<const Integer> entries() const { return e_; }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const Integer& x) { return sgn(x) == 0; });
  }

  Integer max_norm() const {
    Integer out = 0;
    for (const auto& x : e_) out = std::max(out, Integer(abs(x)));
    return out;
  }

  /// Entries as int64 when all fit.
  std::optional<std::vector<std::int64_t>> to_int64() const {
    std::vector<std::int64_t> out;
    out.reserve(e_.size());
    for (const auto& x : e_) {
      if (!x.fits_slong_p()) return std::nullopt;
      out.push_back(x.get_si());
    }
    return out;
  }

  std::vector<double> to_double() const {
    std::vector<double> out;
    out.reserve(e_.size());
    for (const auto& x : e_) out.push_back(x.get_d());
    return out;
  }

  LatticeVector operator-() const {
    LatticeVector out = *this;
    for (auto& x : out.e_) x = -x;
    return out;
  }
  friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
    check_rank(a, b);
    LatticeVector out = a;
    for (std::size_t i = 0; i < a.rank(); ++i) out.e_[i] += b.e_[i];
    return out;
  }
  friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
    check_rank(a, b);
    LatticeVector out = a;
    for (std::size_t i = 0; i < a.rank(); ++i) out.e_[i] -= b.e_[i];
    return out;
  }
  friend LatticeVector operator*(const Integer& k, const LatticeVector& a) {
    LatticeVector out = a;
    for (auto& x : out.e_) x *= k;
    return out;
  }

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.e_ == b.e_; }
  friend std::strong_ordering operator<=>(const LatticeVector& a, const LatticeVector& b) {
    if (a.rank() != b.rank()) return a.rank() <=> b.rank();
    for (std::size_t i = 0; i < a.rank(); ++i) {
      const int c = cmp(a.e_[i], b.e_[i]);
      if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < e_.size(); ++i) os << (i ? "," : "") << e_[i];
    os << ")";
    return os.str();
  }

  static void check_rank(const LatticeVector& a, const LatticeVector& b) {
    if (a.rank() != b.rank()) throw RankMismatch(a.rank(), b.rank());
  }

 private:
  std::vector<Integer> e_;
};

inline std::ostream& operator<<(std::ostream& os, const LatticeVector& v) {
  return os << v.to_string();
}

namespace detail {
template <class F>
bool shell_rec(std::vector<std::int64_t>& p, std::ptrdiff_t pos, bool hit, std::int64_t r, F& f) {
  if (pos < 0) return f(std::span<const std::int64_t>(p));
  const auto i = static_cast<std::size_t>(pos);
  if (pos == 0 && !hit) {
    p[i] = -r;
    if (f(std::span<const std::int64_t>(p))) return true;
    if (r == 0) return false;
    p[i] = r;
    return f(std::span<const std::int64_t>(p));
  }
  for (std::int64_t v = -r; v <= r; ++v) {
    p[i] = v;
    if (shell_rec(p, pos - 1, hit || v == r || v == -r, r, f)) return true;
  }
  return false;
}
}  // namespace detail

/// Visits the points of max-norm exactly r in colexicographic order (last
/// coordinate most significant). `f` returns true to stop; the return value
/// reports whether it did.
template <class F>
bool for_each_in_shell(std::size_t m, std::int64_t r, F&& f) {
  std::vector<std::int64_t> p(m, 0);
  if (m == 0) return r == 0 ? f(std::span<const std::int64_t>(p)) : false;
  return detail::shell_rec(p, static_cast<std::ptrdiff_t>(m) - 1, false, r, f);
}

/// Canonical enumeration of [-box, box]^m: by max-norm, then colexicographic.
template <class F>
bool for_each_in_box(std::size_t m, std::int64_t box, F&& f) {
  for (std::int64_t r = 0; r <= box; ++r)
    if (for_each_in_shell(m, r, f)) return true;
  return false;
}

/// Plain odometer over the integer box prod [lo_i, hi_i].
template <class F>
bool for_each_in_range(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi,
                       F&& f) {
  const std::size_t m = lo.size();
  for (std::size_t i = 0; i < m; ++i)
    if (lo[i] > hi[i]) return false;
  std::vector<std::int64_t> p(lo.begin(), lo.end());
  while (true) {
    if (f(std::span<const std::int64_t>(p))) return true;
    std::size_t i = 0;
    while (i < m && p[i] == hi[i]) {
      p[i] = lo[i];
      ++i;
    }
    if (i == m) return false;
    ++p[i];
  }
}

/// Basis of {z in Z^m : A z = 0} for an integer matrix A (rows of length m).
/// Unimodular column operations bring A to column echelon form; the trailing
/// columns of the accumulated transform span the kernel, which is therefore
/// saturated.
inline std::vector<LatticeVector> integer_kernel(std::vector<std::vector<Integer>> a,
                                                 std::size_t m) {
  std::vector<std::vector<Integer>> u(m, std::vector<Integer>(m, Integer(0)));
  for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
  auto combine = [&](std::vector<std::vector<Integer>>& mat, std::size_t c1, std::size_t c2,
                     const Integer& s, const Integer& t, const Integer& x, const Integer& y) {
    // col c1 <- s*c1 + t*c2 ; col c2 <- x*c1 + y*c2
    for (auto& row : mat) {
      Integer a1 = row[c1], a2 = row[c2];
      row[c1] = s * a1 + t * a2;
      row[c2] = x * a1 + y * a2;
    }
  };
  std::size_t col = 0;
  for (std::size_t i = 0; i < a.size() && col < m; ++i) {
    for (std::size_t j = col + 1; j < m; ++j) {
      if (sgn(a[i][j]) == 0) continue;
      if (sgn(a[i][col]) == 0) {
        for (auto& row : a) std::swap(row[col], row[j]);
        for (auto& row : u) std::swap(row[col], row[j]);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[i][col].get_mpz_t(),
                 a[i][j].get_mpz_t());
      const Integer x = -a[i][j] / g;
      const Integer y = a[i][col] / g;
      combine(a, col, j, s, t, x, y);
      combine(u, col, j, s, t, x, y);
    }
    if (sgn(a[i][col]) != 0) ++col;
  }
  std::vector<LatticeVector> basis;
  for (std::size_t j = col; j < m; ++j) {
    std::vector<Integer> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = u[i][j];
    basis.emplace_back(std::move(v));
  }
  return basis;
}

/// Rows of rationals scaled to integers row by row.
inline std::vector<std::vector<Integer>> clear_denominators(
    const std::vector<std::vector<Rational>>& rows) {
  std::vector<std::vector<Integer>> out;
  for (const auto& row : rows) {
    Integer l = 1;
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<Integer> r;
    for (const auto& q : row) r.push_back(Integer(q * l));
    out.push_back(std::move(r));
  }
  return out;
}

inline Rational dot(const LatticeVector& a, const LatticeVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) s += a[i] * b[i];
  return s;
}

/// LLL reduction (delta = 3/4) with exact rational Gram-Schmidt; intended for
/// the small bases that arise here.
inline std::vector<LatticeVector> lll_reduce(std::vector<LatticeVector> b) {
  const std::size_t n = b.size();
  if (n == 0) return b;
  const std::size_t m = b[0].rank();
  auto gram_schmidt = [&](std::vector<std::vector<Rational>>& bs, Matrix<Rational>& mu,
                          std::vector<Rational>& norms) {
    bs.assign(n, std::vector<Rational>(m));
    mu.assign(n, std::vector<Rational>(n));
    norms.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < m; ++t) bs[i][t] = b[i][t];
      for (std::size_t j = 0; j < i; ++j) {
        Rational d = 0;
        for (std::size_t t = 0; t < m; ++t) d += Rational(b[i][t]) * bs[j][t];
        mu[i][j] = d / norms[j];
        for (std::size_t t = 0; t < m; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      for (std::size_t t = 0; t < m; ++t) norms[i] += bs[i][t] * bs[i][t];
    }
  };
  std::vector<std::vector<Rational>> bs;
  Matrix<Rational> mu;
  std::vector<Rational> norms;
  gram_schmidt(bs, mu, norms);
  std::size_t k = 1;
  const Rational delta(3, 4);
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      const Rational& q = mu[k][jj];
      if (abs(q) > Rational(1, 2)) {
        const Rational h = q + Rational(1, 2);
        Integer r;
        mpz_fdiv_q(r.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
        b[k] = b[k] - r * b[jj];
        gram_schmidt(bs, mu, norms);
      }
    }
    if (norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt(bs, mu, norms);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

/// Makes the first nonzero entry of each vector positive.
inline void normalize_signs(std::vector<LatticeVector>& basis) {
  for (auto& v : basis) {
    for (std::size_t i = 0; i < v.rank(); ++i) {
      if (sgn(v[i]) == 0) continue;
      if (sgn(v[i]) < 0) v = -v;
      break;
    }
  }
}

/// Integer coefficients w with sum_j w_j basis_j == v, when they exist.
inline std::optional<std::vector<Integer>> integer_coordinates(
    const std::vector<LatticeVector>& basis, const LatticeVector& v) {
  std::vector<std::vector<Rational>> vecs;
  for (const auto& b : basis) {
    std::vector<Rational> col;
    for (const auto& x : b.entries()) col.emplace_back(x);
    vecs.push_back(std::move(col));
  }
  std::vector<Rational> target;
  for (const auto& x : v.entries()) target.emplace_back(x);
  auto sol = solve_in_span<Rational>(vecs, target);
  if (!sol) return std::nullopt;
  std::vector<Integer> out;
  for (auto& q : *sol) {
    if (q.get_den() != 1) return std::nullopt;
    out.push_back(q.get_num());
  }
  return out;
}

/// sum_j w_j basis_j.
inline LatticeVector combine(const std::vector<LatticeVector>& basis, const LatticeVector& w,
                             std::size_t m) {
  LatticeVector out(m);
  for (std::size_t j = 0; j < basis.size(); ++j) out = out + w[j] * basis[j];
  return out;
}

}  // namespace multiorder
