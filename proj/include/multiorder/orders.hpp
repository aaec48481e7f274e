#pragma once

// Right-invariant total orders on Z^m given by a sequence of linear forms
// c1, ..., cr: x < y iff the first nonzero value of c_j . (y - x) is positive.
// With one form whose components are Q-independent this is the dense
// archimedean case; further forms order the kernel of the forms before them.
//
// Z^m is written additively: the group law xg of the multiplicative notation
// is x + g here, and the positive cone P satisfies P + P = P when dense.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/lattice.hpp"
#include "multiorder/random.hpp"

namespace multiorder {

using LinearForm = std::vector<FieldScalar>;

enum class Cmp { Less, Equal, Greater };
enum class Cone { Positive, Zero, Negative };

inline Cmp cmp_from_sign(int s) { return s < 0 ? Cmp::Less : (s > 0 ? Cmp::Greater : Cmp::Equal); }

inline const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::Less: return "Less";
    case Cmp::Equal: return "Equal";
    case Cmp::Greater: return "Greater";
  }
  return "?";
}

inline bool is_zero_form(const LinearForm& c) {
  return std::all_of(c.begin(), c.end(), [](const FieldScalar& x) { return x.is_zero(); });
}

/// Exact value c . z.
inline FieldScalar dot(const LinearForm& c, const LatticeVector& z) {
  if (c.size() != z.rank()) throw RankMismatch(c.size(), z.rank());
  std::vector<Term> acc;
  BasisPtr basis;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (sgn(z[j]) == 0) continue;
    if (c[j].basis()) {
      if (!basis)
        basis = c[j].basis();
      else if (basis != c[j].basis() && !(*basis == *c[j].basis()))
        throw BasisMismatch();
    }
    for (const auto& t : c[j].terms()) acc.push_back({t.mask, t.coeff * z[j]});
  }
  return FieldScalar(basis, std::move(acc));
}

/// Exact value c . d for two forms.
inline FieldScalar dot(const LinearForm& a, const LinearForm& b) {
  if (a.size() != b.size()) throw RankMismatch(a.size(), b.size());
  FieldScalar s;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

inline LinearForm negate(const LinearForm& c) {
  LinearForm out;
  for (const auto& x : c) out.push_back(-x);
  return out;
}

inline LinearForm rebase(const LinearForm& c, const BasisPtr& basis) {
  if (!basis) return c;
  LinearForm out;
  for (const auto& x : c) out.push_back(x.rebase(basis));
  return out;
}

/// The form z' -> c . (B z') on coordinates of a sublattice basis B.
inline LinearForm pull_back(const LinearForm& c, const std::vector<LatticeVector>& basis) {
  LinearForm out;
  for (const auto& b : basis) out.push_back(dot(c, b));
  return out;
}

/// Rational linear constraints equivalent to c . z = 0 on integer z: one row
/// per radical appearing in c.
inline std::vector<std::vector<Rational>> rational_constraints(const LinearForm& c) {
  const auto unified = unify(c);
  std::vector<Mask> masks;
  for (const auto& x : unified)
    for (const auto& t : x.terms()) masks.push_back(t.mask);
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::vector<Rational>> rows;
  for (Mask mk : masks) {
    std::vector<Rational> row;
    for (const auto& x : unified) row.push_back(x.coefficient(mk));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// LLL-reduced, sign-normalized basis of the pure sublattice {z : c . z = 0}.
/// Empty when the components of c are Q-independent.
inline std::vector<LatticeVector> form_kernel(const LinearForm& c) {
  auto basis = integer_kernel(clear_denominators(rational_constraints(c)), c.size());
  basis = lll_reduce(std::move(basis));
  normalize_signs(basis);
  return basis;
}

namespace detail {
inline double filter_margin(double weight) { return 1e-12 * (1.0 + weight); }
}  // namespace detail

/// A right-invariant total order on Z^m.
class OrderSpec {
 public:
  /// Validates every form has length `rank`, none is zero, and the forms
  /// jointly vanish only at 0 (totality). All scalars are rebased onto one
  /// radical basis.
  OrderSpec(std::size_t rank, std::vector<LinearForm> forms) : rank_(rank) {
    if (rank == 0) throw InvalidArgument("order rank must be positive");
    if (forms.empty()) throw InvalidArgument("order needs at least one form");
    std::vector<FieldScalar> all;
    for (const auto& f : forms) {
      if (f.size() != rank) throw RankMismatch(rank, f.size());
      if (is_zero_form(f)) throw InvalidArgument("order form is identically zero");
      all.insert(all.end(), f.begin(), f.end());
    }
    basis_ = common_basis(all);
    for (auto& f : forms) forms_.push_back(rebase(f, basis_));
    std::vector<std::vector<Rational>> rows;
    for (const auto& f : forms_) {
      auto r = rational_constraints(f);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (rational_rank(rows) != rank_)
      throw InvalidArgument("forms do not define a total order (nonzero common kernel)");
    for (const auto& x : forms_[0]) approx_.push_back(x.approx());
    dense_ = compute_dense();
  }

  /// Appends unit-vector forms after `leading` until the order is total.
  static OrderSpec completed(std::size_t rank, std::vector<LinearForm> leading) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& f : leading) {
      auto r = rational_constraints(f);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    std::size_t have = rational_rank(rows);
    for (std::size_t t = 0; t < rank && have < rank; ++t) {
      std::vector<Rational> e(rank, Rational(0));
      e[t] = 1;
      rows.push_back(e);
      const std::size_t next = rational_rank(rows);
      if (next == have) {
        rows.pop_back();
        continue;
      }
      have = next;
      LinearForm f(rank, FieldScalar(0));
      f[t] = FieldScalar(1);
      leading.push_back(std::move(f));
    }
    return OrderSpec(rank, std::move(leading));
  }

  std::size_t rank() const { return rank_; }
  const std::vector<LinearForm>& forms() const { return forms_; }
  const LinearForm& leading() const { return forms_.front(); }
  const BasisPtr& basis() const { return basis_; }
  bool is_dense() const { return dense_; }
  std::span<const double> leading_approx() const { return approx_; }

  /// The opposite order.
  OrderSpec reversed() const {
    std::vector<LinearForm> f;
    for (const auto& c : forms_) f.push_back(negate(c));
    return OrderSpec(rank_, std::move(f));
  }

  OrderSpec rebased(const BasisPtr& basis) const {
    std::vector<LinearForm> f;
    for (const auto& c : forms_) f.push_back(multiorder::rebase(c, basis));
    return OrderSpec(rank_, std::move(f));
  }

  /// Sign of d in the order: +1 iff 0 < d.
  int sign_of(const LatticeVector& d) const {
    if (d.rank() != rank_) throw RankMismatch(rank_, d.rank());
    double v = 0, w = 0;
    bool finite = true;
    for (std::size_t j = 0; j < rank_; ++j) {
      const double dj = d[j].get_d();
      v += approx_[j] * dj;
      w += std::abs(approx_[j] * dj);
    }
    finite = std::isfinite(v) && std::isfinite(w);
    if (finite) {
      const double margin = detail::filter_margin(w);
      if (v > margin) return 1;
      if (v < -margin) return -1;
    }
    for (const auto& c : forms_) {
      const int s = dot(c, d).sign();
      if (s != 0) return s;
    }
    return 0;
  }

  /// Sign of c_1 . d only (the top archimedean component).
  int leading_sign(const LatticeVector& d) const { return dot(forms_[0], d).sign(); }

  Cmp compare(const LatticeVector& x, const LatticeVector& y) const {
    if (x.rank() != rank_) throw RankMismatch(rank_, x.rank());
    if (y.rank() != rank_) throw RankMismatch(rank_, y.rank());
    return cmp_from_sign(-sign_of(y - x));
  }

  bool less(const LatticeVector& x, const LatticeVector& y) const {
    return compare(x, y) == Cmp::Less;
  }

 private:
  // Dense iff the bottom archimedean component (the subgroup on which the
  // last effective form is injective) has rank at least 2.
  bool compute_dense() const {
    std::vector<LatticeVector> sub;
    for (std::size_t i = 0; i < rank_; ++i) sub.push_back(LatticeVector::unit(rank_, i));
    for (const auto& c : forms_) {
      const LinearForm pulled = pull_back(c, sub);
      if (is_zero_form(pulled)) continue;
      if (q_linear_independent(pulled)) return sub.size() >= 2;
      const auto ker = form_kernel(pulled);
      std::vector<LatticeVector> next;
      for (const auto& w : ker) next.push_back(combine(sub, w, rank_));
      sub = std::move(next);
    }
    return false;  // unreachable for total orders
  }

  std::size_t rank_;
  std::vector<LinearForm> forms_;
  BasisPtr basis_;
  std::vector<double> approx_;
  bool dense_ = false;
};

inline Cmp compare(const OrderSpec& o, const LatticeVector& x, const LatticeVector& y) {
  return o.compare(x, y);
}

inline Cone cone_membership(const OrderSpec& o, const LatticeVector& g) {
  const int s = o.sign_of(g);
  return s > 0 ? Cone::Positive : (s < 0 ? Cone::Negative : Cone::Zero);
}

/// Checks compare(x, y) == compare(x + g, y + g) on random triples from
/// [-box, box]^m.
inline bool translation_invariant_check(const OrderSpec& o, std::size_t samples,
                                        std::uint64_t seed = 0, std::int64_t box = 20) {
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const LatticeVector x = rng.lattice(o.rank(), box);
    const LatticeVector y = rng.lattice(o.rank(), box);
    const LatticeVector g = rng.lattice(o.rank(), box);
    if (o.compare(x, y) != o.compare(x + g, y + g)) return false;
  }
  return true;
}

/// Splits a positive p into two positives q + r = p. Even vectors are halved;
/// otherwise q runs over [-bound, bound]^m in canonical order.
inline std::pair<LatticeVector, LatticeVector> cone_split(const OrderSpec& o,
                                                          const LatticeVector& p,
                                                          std::int64_t bound) {
  if (!o.is_dense()) throw NotDense();
  if (cone_membership(o, p) != Cone::Positive)
    throw InvalidArgument("cone_split needs a positive element");
  bool even = true;
  for (const auto& x : p.entries()) even = even && mpz_even_p(x.get_mpz_t());
  if (even) {
    LatticeVector h = p;
    for (std::size_t i = 0; i < h.rank(); ++i) h[i] /= 2;
    return {h, h};
  }
  std::optional<std::pair<LatticeVector, LatticeVector>> found;
  for_each_in_box(o.rank(), bound, [&](std::span<const std::int64_t> qs) {
    LatticeVector q = LatticeVector::from_int64(qs);
    if (o.sign_of(q) <= 0) return false;
    LatticeVector r = p - q;
    if (o.sign_of(r) <= 0) return false;
    found.emplace(std::move(q), std::move(r));
    return true;
  });
  if (!found) throw BudgetExhausted("cone_split: no split in box of radius " + std::to_string(bound));
  return *found;
}

}  // namespace multiorder
