#pragma once

// Exact arithmetic in multiquadratic real fields Q(sqrt(p_1), ..., sqrt(p_k)).
//
// An element is stored as a sparse map from subsets S of the basis primes to
// rational coefficients: the term (S, q) stands for q * sqrt(prod S). Square
// roots of distinct square-free integers are linearly independent over Q, so
// an element is zero exactly when its canonical term list is empty. Signs of
// nonzero elements are found with outward-rounded interval arithmetic at
// doubling precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "multiorder/errors.hpp"

namespace multiorder {

using Integer = mpz_class;
using Rational = mpq_class;

/// Bitmask over the primes of a RadicalBasis; bit t selects prime t.
using Mask = std::uint64_t;

inline constexpr unsigned kInitialSignPrecision = 64;
inline constexpr unsigned kDefaultPrecisionCap = 16384;

namespace detail {
inline std::atomic<unsigned>& precision_cap_storage() {
  static std::atomic<unsigned> cap{kDefaultPrecisionCap};
  return cap;
}
}  // namespace detail

/// Hard cap (bits) for interval sign evaluation, process wide.
inline unsigned precision_cap() { return detail::precision_cap_storage().load(); }
inline void set_precision_cap(unsigned bits) {
  if (bits < kInitialSignPrecision)
    throw InvalidArgument("precision cap must be at least 64 bits");
  detail::precision_cap_storage().store(bits);
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// The first `count` primes after skipping `offset` of them.
inline std::vector<std::uint64_t> primes_from(std::size_t offset, std::size_t count) {
  std::vector<std::uint64_t> out;
  std::size_t seen = 0;
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    if (!is_prime(n)) continue;
    if (seen++ >= offset) out.push_back(n);
  }
  return out;
}

/// Strictly increasing list of distinct primes.
class RadicalBasis {
 public:
  RadicalBasis() = default;

  explicit RadicalBasis(std::vector<std::uint64_t> primes) : primes_(std::move(primes)) {
    if (primes_.size() > 62) throw InvalidArgument("radical basis limited to 62 primes");
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (!is_prime(primes_[i]))
        throw InvalidArgument("radical basis entry " + std::to_string(primes_[i]) +
                              " is not prime");
      if (i > 0 && primes_[i] <= primes_[i - 1])
        throw InvalidArgument("radical basis primes must be strictly increasing");
    }
  }

  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }

  Integer radicand(Mask mask) const {
    Integer r = 1;
    for (std::size_t t = 0; t < primes_.size(); ++t)
      if (mask >> t & 1U) r *= static_cast<unsigned long>(primes_[t]);
    return r;
  }

  /// Inverse of radicand(); throws when `r` is not a square-free product of
  /// basis primes.
  Mask mask_of(Integer r) const {
    if (r <= 0) throw MalformedInput("radicand must be positive");
    Mask mask = 0;
    for (std::size_t t = 0; t < primes_.size(); ++t) {
      const unsigned long p = static_cast<unsigned long>(primes_[t]);
      if (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
        r /= p;
        if (mpz_divisible_ui_p(r.get_mpz_t(), p))
          throw MalformedInput("radicand is not square-free");
        mask |= Mask{1} << t;
      }
    }
    if (r != 1) throw MalformedInput("radicand has a prime factor outside the basis");
    return mask;
  }

  /// Position of `p` in the basis, or size() when absent.
  std::size_t index_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    return (it != primes_.end() && *it == p) ? static_cast<std::size_t>(it - primes_.begin())
                                             : primes_.size();
  }

  bool contains(const RadicalBasis& other) const {
    return std::includes(primes_.begin(), primes_.end(), other.primes_.begin(),
                         other.primes_.end());
  }

  friend bool operator==(const RadicalBasis&, const RadicalBasis&) = default;

  static RadicalBasis unite(const RadicalBasis& a, const RadicalBasis& b) {
    std::vector<std::uint64_t> out;
    std::set_union(a.primes_.begin(), a.primes_.end(), b.primes_.begin(), b.primes_.end(),
                   std::back_inserter(out));
    return RadicalBasis(std::move(out));
  }

 private:
  std::vector<std::uint64_t> primes_;
};

using BasisPtr = std::shared_ptr<const RadicalBasis>;

/// RAII holder for an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  ~BigFloat() { mpfr_clear(value_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

struct Term {
  Mask mask;
  Rational coeff;
};

/// Outward-rounded double enclosure of a real number.
struct Enclosure {
  double lo;
  double hi;
  double mid() const { return lo / 2 + hi / 2; }
};

/// Exact element of a multiquadratic real field.
///
/// Elements with no radical part carry no basis and combine with elements over
/// any basis. Two elements over different nonempty bases cannot be combined;
/// rebase() both onto RadicalBasis::unite() first.
class FieldScalar {
 public:
  FieldScalar() = default;
  FieldScalar(long v) { set_rational(Rational(v)); }  // NOLINT(runtime/explicit)
  FieldScalar(int v) : FieldScalar(static_cast<long>(v)) {}  // NOLINT
  FieldScalar(const Integer& v) { set_rational(Rational(v)); }  // NOLINT
  FieldScalar(const Rational& v) { set_rational(v); }           // NOLINT

  /// sqrt(radicand) with radicand a square-free product of basis primes.
  static FieldScalar sqrt_of(BasisPtr basis, const Integer& radicand) {
    const Mask mask = basis->mask_of(radicand);
    return FieldScalar(std::move(basis), {{mask, Rational(1)}});
  }

  /// Builds q_1 sqrt(r_1) + ... from (radicand, coefficient) pairs.
  static FieldScalar from_radicands(BasisPtr basis,
                                    const std::vector<std::pair<Integer, Rational>>& parts) {
    std::vector<Term> terms;
    terms.reserve(parts.size());
    for (const auto& [r, q] : parts) terms.push_back({basis->mask_of(r), q});
    return FieldScalar(std::move(basis), std::move(terms));
  }

  /// Canonicalizes an arbitrary term list (sorting, merging, dropping zeros).
  FieldScalar(BasisPtr basis, std::vector<Term> terms) : basis_(std::move(basis)) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mask < b.mask; });
    for (auto& t : terms) {
      if (!terms_.empty() && terms_.back().mask == t.mask)
        terms_.back().coeff += t.coeff;
      else
        terms_.push_back(std::move(t));
    }
    std::erase_if(terms_, [](const Term& t) { return sgn(t.coeff) == 0; });
    normalize_basis();
  }

  const BasisPtr& basis() const { return basis_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mask == 0);
  }
  Rational rational_part() const {
    return (!terms_.empty() && terms_[0].mask == 0) ? terms_[0].coeff : Rational(0);
  }
  /// Coefficient of sqrt(prod S) for the subset encoded by `mask`.
  Rational coefficient(Mask mask) const {
    for (const auto& t : terms_)
      if (t.mask == mask) return t.coeff;
    return 0;
  }
  Integer radicand(Mask mask) const { return basis_ ? basis_->radicand(mask) : Integer(1); }

  /// Same value expressed over a superset basis.
  FieldScalar rebase(const BasisPtr& target) const {
    if (!basis_ || terms_.empty() || basis_ == target || *basis_ == *target) {
      FieldScalar out = *this;
      if (!out.terms_.empty() && !out.is_rational()) out.basis_ = target;
      return out;
    }
    if (!target->contains(*basis_)) throw BasisMismatch();
    std::vector<std::size_t> remap(basis_->size());
    for (std::size_t t = 0; t < basis_->size(); ++t)
      remap[t] = target->index_of(basis_->primes()[t]);
    std::vector<Term> terms;
    for (const auto& term : terms_) {
      Mask m = 0;
      for (std::size_t t = 0; t < remap.size(); ++t)
        if (term.mask >> t & 1U) m |= Mask{1} << remap[t];
      terms.push_back({m, term.coeff});
    }
    return FieldScalar(target, std::move(terms));
  }

  FieldScalar operator-() const {
    FieldScalar out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }

  friend FieldScalar operator+(const FieldScalar& a, const FieldScalar& b) {
    BasisPtr basis = joint_basis(a, b);
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].mask < b.terms_[j].mask)) {
        out.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].mask < a.terms_[i].mask) {
        out.push_back(b.terms_[j++]);
      } else {
        Rational s = a.terms_[i].coeff + b.terms_[j].coeff;
        if (sgn(s) != 0) out.push_back({a.terms_[i].mask, std::move(s)});
        ++i;
        ++j;
      }
    }
    return FieldScalar(std::move(basis), std::move(out), Canonical{});
  }

  friend FieldScalar operator-(const FieldScalar& a, const FieldScalar& b) { return a + (-b); }

  /// sqrt(S1) * sqrt(S2) = prod(S1 & S2) * sqrt(S1 ^ S2).
  friend FieldScalar operator*(const FieldScalar& a, const FieldScalar& b) {
    BasisPtr basis = joint_basis(a, b);
    if (a.is_zero() || b.is_zero()) return FieldScalar();
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Rational c = ta.coeff * tb.coeff;
        const Mask common = ta.mask & tb.mask;
        if (common != 0) c *= basis->radicand(common);
        out.push_back({ta.mask ^ tb.mask, std::move(c)});
      }
    }
    return FieldScalar(std::move(basis), std::move(out));
  }

  friend FieldScalar operator*(const FieldScalar& a, const Rational& q) {
    if (sgn(q) == 0) return FieldScalar();
    FieldScalar out = a;
    for (auto& t : out.terms_) t.coeff *= q;
    return out;
  }
  friend FieldScalar operator*(const Rational& q, const FieldScalar& a) { return a * q; }

  FieldScalar& operator+=(const FieldScalar& b) { return *this = *this + b; }
  FieldScalar& operator-=(const FieldScalar& b) { return *this = *this - b; }
  FieldScalar& operator*=(const FieldScalar& b) { return *this = *this * b; }

  /// Multiplicative inverse by successive conjugation:
  /// 1/(a + b sqrt p) = (a - b sqrt p) / (a^2 - p b^2).
  FieldScalar inverse() const {
    if (is_zero()) throw DivisionByZero();
    Mask all = 0;
    for (const auto& t : terms_) all |= t.mask;
    if (all == 0) return FieldScalar(Rational(1) / terms_[0].coeff);
    const int top = 63 - std::countl_zero(all);
    const Mask bit = Mask{1} << top;
    std::vector<Term> conj_terms;
    for (const auto& t : terms_)
      conj_terms.push_back({t.mask, (t.mask & bit) ? Rational(-t.coeff) : t.coeff});
    FieldScalar conj(basis_, std::move(conj_terms));
    FieldScalar norm = *this * conj;  // free of sqrt(p_top)
    return conj * norm.inverse();
  }

  friend FieldScalar operator/(const FieldScalar& a, const FieldScalar& b) {
    return a * b.inverse();
  }

  /// Exact equality of field elements.
  friend bool operator==(const FieldScalar& a, const FieldScalar& b) {
    return (a - b).is_zero();
  }

  /// Tries to decide the sign at the given working precision. Returns 0 when
  /// the enclosure still straddles zero.
  int sign_at_precision(mpfr_prec_t prec) const {
    BigFloat lo(prec), hi(prec);
    enclose(prec, lo, hi);
    if (mpfr_sgn(lo.get()) > 0) return 1;
    if (mpfr_sgn(hi.get()) < 0) return -1;
    return 0;
  }

  /// Exact sign in {-1, 0, +1}.
  int sign() const {
    if (terms_.empty()) return 0;
    if (is_rational()) return sgn(terms_[0].coeff);
    const unsigned cap = precision_cap();
    for (unsigned prec = kInitialSignPrecision; prec <= cap; prec *= 2) {
      if (int s = sign_at_precision(prec); s != 0) return s;
    }
    throw PrecisionCapExceeded(cap);
  }

  FieldScalar abs() const { return sign() < 0 ? -*this : *this; }

  /// Rigorous double enclosure (computed at 128 bits, then rounded outward).
  Enclosure enclosure(mpfr_prec_t prec = 128) const {
    BigFloat lo(prec), hi(prec);
    enclose(prec, lo, hi);
    return {mpfr_get_d(lo.get(), MPFR_RNDD), mpfr_get_d(hi.get(), MPFR_RNDU)};
  }

  double approx() const { return is_zero() ? 0.0 : enclosure().mid(); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      Rational c = t.coeff;
      if (!first) {
        os << (sgn(c) < 0 ? " - " : " + ");
        c = abs_rational(c);
      }
      first = false;
      if (t.mask == 0) {
        os << c;
      } else {
        if (c == -1)
          os << "-";
        else if (c != 1)
          os << c << "*";
        os << "sqrt(" << radicand(t.mask) << ")";
      }
    }
    return os.str();
  }

 private:
  struct Canonical {};
  FieldScalar(BasisPtr basis, std::vector<Term> terms, Canonical)
      : basis_(std::move(basis)), terms_(std::move(terms)) {
    normalize_basis();
  }

  static Rational abs_rational(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

  void set_rational(const Rational& q) {
    terms_.clear();
    if (sgn(q) != 0) terms_.push_back({0, q});
  }

  // Pure rationals drop their basis so they mix freely with any basis.
  void normalize_basis() {
    if (is_rational()) basis_.reset();
  }

  static BasisPtr joint_basis(const FieldScalar& a, const FieldScalar& b) {
    if (!a.basis_) return b.basis_;
    if (!b.basis_) return a.basis_;
    if (a.basis_ == b.basis_ || *a.basis_ == *b.basis_) return a.basis_;
    throw BasisMismatch();
  }

  void enclose(mpfr_prec_t prec, BigFloat& lo, BigFloat& hi) const {
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
    BigFloat sl(prec), sh(prec), ql(prec), qh(prec), tl(prec), th(prec);
    for (const auto& t : terms_) {
      mpfr_set_q(ql.get(), t.coeff.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(qh.get(), t.coeff.get_mpq_t(), MPFR_RNDU);
      if (t.mask == 0) {
        mpfr_set(tl.get(), ql.get(), MPFR_RNDD);
        mpfr_set(th.get(), qh.get(), MPFR_RNDU);
      } else {
        const Integer r = basis_->radicand(t.mask);
        mpfr_set_z(sl.get(), r.get_mpz_t(), MPFR_RNDD);
        mpfr_sqrt(sl.get(), sl.get(), MPFR_RNDD);
        mpfr_set_z(sh.get(), r.get_mpz_t(), MPFR_RNDU);
        mpfr_sqrt(sh.get(), sh.get(), MPFR_RNDU);
        if (sgn(t.coeff) > 0) {
          mpfr_mul(tl.get(), ql.get(), sl.get(), MPFR_RNDD);
          mpfr_mul(th.get(), qh.get(), sh.get(), MPFR_RNDU);
        } else {
          mpfr_mul(tl.get(), ql.get(), sh.get(), MPFR_RNDD);
          mpfr_mul(th.get(), qh.get(), sl.get(), MPFR_RNDU);
        }
      }
      mpfr_add(lo.get(), lo.get(), tl.get(), MPFR_RNDD);
      mpfr_add(hi.get(), hi.get(), th.get(), MPFR_RNDU);
    }
  }

  BasisPtr basis_;
  std::vector<Term> terms_;
};

inline int sign(const FieldScalar& a) { return a.sign(); }
inline bool is_zero(const FieldScalar& a) { return a.is_zero(); }

inline std::ostream& operator<<(std::ostream& os, const FieldScalar& a) {
  return os << a.to_string();
}

/// Smallest basis containing every nonempty basis among `values`.
inline BasisPtr common_basis(std::span<const FieldScalar> values) {
  BasisPtr out;
  for (const auto& v : values) {
    const auto& b = v.basis();
    if (!b) continue;
    if (!out) {
      out = b;
    } else if (!(out == b || *out == *b)) {
      if (out->contains(*b)) continue;
      if (b->contains(*out)) {
        out = b;
        continue;
      }
      out = std::make_shared<const RadicalBasis>(RadicalBasis::unite(*out, *b));
    }
  }
  return out;
}

/// Rebases all values onto their common basis.
inline std::vector<FieldScalar> unify(std::span<const FieldScalar> values, BasisPtr basis = {}) {
  if (!basis) basis = common_basis(values);
  std::vector<FieldScalar> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(basis ? v.rebase(basis) : v);
  return out;
}

/// Rank over Q of a list of rational row vectors (Gaussian elimination).
inline std::size_t rational_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || sgn(rows[r][c]) == 0) continue;
      const Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Rational coefficient vectors of `vals` in the subset basis: one row per
/// value, one column per radical appearing in any of them.
inline std::vector<std::vector<Rational>> coefficient_rows(std::span<const FieldScalar> vals) {
  const auto unified = unify(vals);
  std::vector<Mask> masks;
  for (const auto& v : unified)
    for (const auto& t : v.terms()) masks.push_back(t.mask);
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::vector<Rational>> rows;
  for (const auto& v : unified) {
    std::vector<Rational> row(masks.size());
    for (const auto& t : v.terms()) {
      auto it = std::lower_bound(masks.begin(), masks.end(), t.mask);
      row[static_cast<std::size_t>(it - masks.begin())] = t.coeff;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// True iff the values are linearly independent over Q.
inline bool q_linear_independent(std::span<const FieldScalar> vals) {
  if (vals.empty()) return true;
  return rational_rank(coefficient_rows(vals)) == vals.size();
}

inline bool q_linear_independent(std::initializer_list<FieldScalar> vals) {
  return q_linear_independent(std::span<const FieldScalar>(vals.begin(), vals.size()));
}

}  // namespace multiorder
