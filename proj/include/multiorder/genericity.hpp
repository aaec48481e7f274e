#pragma once

// Multiorders on Z^m and the witness search behind the extension property:
// given one open interval per order, find a lattice point inside all of them.
//
// For a multiorder built from an order matrix, the intersection of intervals
// is a cylinder along the matrix's last row d (orthogonal to every order's
// form). The line search walks anchor points along that axis and rounds them
// to the lattice; since d has Q-independent components the rounded points
// come arbitrarily close to the axis, so the walk terminates. A canonical
// brute-force enumeration serves both as fallback and as the reference.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/lattice.hpp"
#include "multiorder/matrix_builder.hpp"
#include "multiorder/orders.hpp"
#include "multiorder/random.hpp"

namespace multiorder {

/// Open interval of one order; a missing endpoint means unbounded.
struct Bound {
  std::optional<LatticeVector> lower;
  std::optional<LatticeVector> upper;

  bool unbounded() const { return !lower && !upper; }
  friend bool operator==(const Bound&, const Bound&) = default;
};

/// One Bound per order of a multiorder.
using IntervalConstraint = std::vector<Bound>;

class MultiOrder {
 public:
  MultiOrder(std::size_t rank, std::vector<OrderSpec> orders,
             std::optional<LinearForm> direction = std::nullopt)
      : rank_(rank) {
    std::vector<FieldScalar> all;
    for (const auto& o : orders) {
      if (o.rank() != rank) throw RankMismatch(rank, o.rank());
      for (const auto& f : o.forms()) all.insert(all.end(), f.begin(), f.end());
    }
    if (direction) {
      if (direction->size() != rank) throw RankMismatch(rank, direction->size());
      all.insert(all.end(), direction->begin(), direction->end());
    }
    BasisPtr basis = common_basis(all);
    for (const auto& o : orders) orders_.push_back(basis ? o.rebased(basis) : o);
    if (direction) {
      direction_ = basis ? rebase(*direction, basis) : *direction;
      if (!q_linear_independent(*direction_))
        throw InvalidArgument("direction must have Q-independent components");
      for (const auto& o : orders_) {
        if (o.forms().size() != 1)
          throw InvalidArgument("orders with a direction must be given by a single form");
        if (!dot(o.leading(), *direction_).is_zero())
          throw InvalidArgument("direction is not orthogonal to every order form");
      }
    }
  }

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return orders_.size(); }
  const std::vector<OrderSpec>& orders() const { return orders_; }
  const OrderSpec& operator[](std::size_t i) const { return orders_[i]; }
  const std::optional<LinearForm>& direction() const { return direction_; }

  /// The multiorder with order i removed; the direction is kept.
  MultiOrder without(std::size_t i) const {
    std::vector<OrderSpec> rest;
    for (std::size_t j = 0; j < orders_.size(); ++j)
      if (j != i) rest.push_back(orders_[j]);
    return MultiOrder(rank_, std::move(rest), direction_);
  }

 private:
  std::size_t rank_;
  std::vector<OrderSpec> orders_;
  std::optional<LinearForm> direction_;
};

/// First m-1 rows become dense orders; the last row is the cylinder axis.
inline MultiOrder from_matrix(const OrderMatrix& a) {
  if (!verify(a).all()) throw InvalidArgument("from_matrix: matrix fails verification");
  std::vector<OrderSpec> orders;
  for (std::size_t i = 0; i + 1 < a.m; ++i) orders.emplace_back(a.m, std::vector<LinearForm>{a.rows[i]});
  return MultiOrder(a.m, std::move(orders), a.rows.back());
}

/// Throws MalformedInput unless every finite pair satisfies lower < upper.
inline void validate_constraint(const MultiOrder& mo, const IntervalConstraint& cons) {
  if (cons.size() != mo.size())
    throw MalformedInput("constraint lists " + std::to_string(cons.size()) + " intervals for " +
                         std::to_string(mo.size()) + " orders");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& b = cons[i];
    if (b.lower && b.lower->rank() != mo.rank()) throw RankMismatch(mo.rank(), b.lower->rank());
    if (b.upper && b.upper->rank() != mo.rank()) throw RankMismatch(mo.rank(), b.upper->rank());
    if (b.lower && b.upper && !mo[i].less(*b.lower, *b.upper))
      throw MalformedInput("interval " + std::to_string(i) + " has lower >= upper");
  }
}

/// Exact test lower_i < z < upper_i for every order i.
inline bool satisfies(const MultiOrder& mo, const IntervalConstraint& cons,
                      const LatticeVector& z) {
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].lower && !mo[i].less(*cons[i].lower, z)) return false;
    if (cons[i].upper && !mo[i].less(z, *cons[i].upper)) return false;
  }
  return true;
}

/// Floating-point prefilter on leading forms with a margin far above the
/// rounding error; undecided points fall through to exact comparison.
class ConstraintFilter {
 public:
  ConstraintFilter(const MultiOrder& mo, const IntervalConstraint& cons) : mo_(mo), cons_(cons) {
    for (std::size_t i = 0; i < cons.size(); ++i) {
      Row r;
      const auto approx = mo[i].leading_approx();
      r.coeff.assign(approx.begin(), approx.end());
      if (cons[i].lower) {
        r.has_lo = true;
        r.lo = dot(mo[i].leading(), *cons[i].lower).approx();
      }
      if (cons[i].upper) {
        r.has_hi = true;
        r.hi = dot(mo[i].leading(), *cons[i].upper).approx();
      }
      if (r.has_lo || r.has_hi) rows_.push_back(std::move(r));
    }
  }

  /// +1 surely inside, -1 surely outside, 0 undecided.
  int classify(std::span<const std::int64_t> z) const {
    int verdict = 1;
    for (const auto& r : rows_) {
      double v = 0, w = 0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double t = r.coeff[j] * static_cast<double>(z[j]);
        v += t;
        w += std::abs(t);
      }
      if (r.has_lo) {
        const double margin = detail::filter_margin(w + std::abs(r.lo));
        if (v - r.lo < -margin) return -1;
        if (v - r.lo <= margin) verdict = 0;
      }
      if (r.has_hi) {
        const double margin = detail::filter_margin(w + std::abs(r.hi));
        if (r.hi - v < -margin) return -1;
        if (r.hi - v <= margin) verdict = 0;
      }
    }
    return verdict;
  }

  /// Exact membership, using the filter only to reject.
  bool accepts(std::span<const std::int64_t> z) const {
    if (classify(z) < 0) return false;
    return satisfies(mo_, cons_, LatticeVector::from_int64(z));
  }

 private:
  struct Row {
    std::vector<double> coeff;
    bool has_lo = false, has_hi = false;
    double lo = 0, hi = 0;
  };
  const MultiOrder& mo_;
  const IntervalConstraint& cons_;
  std::vector<Row> rows_;
};

struct BruteResult {
  std::optional<LatticeVector> point;
  std::uint64_t probes = 0;
};

/// First point of [-box, box]^m, in canonical order, inside every interval.
inline BruteResult witness_brute(const MultiOrder& mo, const IntervalConstraint& cons,
                                 std::int64_t box) {
  validate_constraint(mo, cons);
  ConstraintFilter filter(mo, cons);
  BruteResult out;
  for_each_in_box(mo.rank(), box, [&](std::span<const std::int64_t> z) {
    ++out.probes;
    if (!filter.accepts(z)) return false;
    out.point = LatticeVector::from_int64(z);
    return true;
  });
  return out;
}

enum class Backend { Line, Brute };

inline const char* to_string(Backend b) { return b == Backend::Line ? "line" : "brute"; }

struct WitnessConfig {
  std::uint64_t probe_budget = 1'000'000;
  std::vector<std::int64_t> brute_boxes{8, 16, 32, 64};
};

struct WitnessResult {
  LatticeVector point;
  std::uint64_t probes = 0;
  Backend backend = Backend::Line;
};

namespace detail {

// Minimum-norm solution of A p = b for full-row-rank A (via A A^T y = b).
inline std::vector<double> min_norm_solve(const std::vector<std::vector<double>>& a,
                                          const std::vector<double>& b) {
  const std::size_t r = a.size(), m = a[0].size();
  std::vector<std::vector<long double>> g(r, std::vector<long double>(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k) {
      long double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += static_cast<long double>(a[i][j]) * a[k][j];
      g[i][k] = s;
    }
    g[i][r] = b[i];
  }
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (std::abs(g[i][c]) > std::abs(g[piv][c])) piv = i;
    std::swap(g[c], g[piv]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c || g[c][c] == 0) continue;
      const long double f = g[i][c] / g[c][c];
      for (std::size_t k = c; k <= r; ++k) g[i][k] -= f * g[c][k];
    }
  }
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    const long double y = g[i][i] == 0 ? 0 : g[i][r] / g[i][i];
    for (std::size_t j = 0; j < m; ++j) p[j] += static_cast<double>(y * a[i][j]);
  }
  return p;
}

}  // namespace detail

/// Accelerated witness search for multiorders that carry a direction.
inline WitnessResult witness(const MultiOrder& mo, const IntervalConstraint& cons,
                             const WitnessConfig& cfg = {}) {
  validate_constraint(mo, cons);
  if (!mo.direction())
    throw InvalidArgument("witness needs a matrix-built multiorder; use witness_brute");
  const std::size_t m = mo.rank();
  if (std::all_of(cons.begin(), cons.end(), [](const Bound& b) { return b.unbounded(); }))
    return {LatticeVector(m), 0, Backend::Line};

  ConstraintFilter filter(mo, cons);
  std::vector<std::vector<double>> a;
  std::vector<double> target;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].unbounded()) continue;
    const auto c = mo[i].leading_approx();
    a.emplace_back(c.begin(), c.end());
    const auto& b = cons[i];
    const double lo = b.lower ? dot(mo[i].leading(), *b.lower).approx() : 0.0;
    const double hi = b.upper ? dot(mo[i].leading(), *b.upper).approx() : 0.0;
    target.push_back(b.lower && b.upper ? (lo + hi) / 2 : (b.lower ? lo + 1.0 : hi - 1.0));
  }
  std::vector<double> d;
  for (const auto& x : *mo.direction()) d.push_back(x.approx());
  a.push_back(d);
  target.push_back(0.0);
  const std::vector<double> p0 = detail::min_norm_solve(a, target);

  std::size_t axis = 0;
  for (std::size_t j = 1; j < m; ++j)
    if (std::abs(d[j]) > std::abs(d[axis])) axis = j;
  const double base = std::nearbyint(p0[axis]);

  // Walk the axis coordinate through the integers base, base+1, base-1, ...;
  // the other coordinates are read off the line and rounded.
  std::vector<std::int64_t> z(m);
  std::uint64_t probes = 0;
  for (std::int64_t k = 0; probes < cfg.probe_budget; k = (k > 0 ? -k : 1 - k)) {
    ++probes;
    const double s = base + static_cast<double>(k);
    const double t = (s - p0[axis]) / d[axis];
    for (std::size_t j = 0; j < m; ++j)
      z[j] = j == axis ? static_cast<std::int64_t>(s)
                       : static_cast<std::int64_t>(std::nearbyint(p0[j] + t * d[j]));
    if (filter.accepts(z)) return {LatticeVector::from_int64(z), probes, Backend::Line};
  }
  for (std::int64_t box : cfg.brute_boxes) {
    BruteResult br = witness_brute(mo, cons, box);
    probes += br.probes;
    if (br.point) return {*br.point, probes, Backend::Brute};
  }
  throw BudgetExhausted("witness: probe budget and brute-force schedule exhausted");
}

struct ExtensionFailure {
  std::vector<LatticeVector> points;
  IntervalConstraint constraint;
};

struct ExtensionReport {
  std::size_t trials = 0;
  std::size_t witnesses_checked = 0;
  std::uint64_t probes = 0;
  std::vector<ExtensionFailure> failures;
  bool passed() const { return failures.empty(); }
};

struct ExtensionConfig {
  std::uint64_t seed = 0;
  std::int64_t search_box = 50;  // brute-force box when there is no direction
  WitnessConfig witness;
};

/// Random k-point configurations in [-box, box]^m, one of the k+1 intervals
/// per order; checks that the chosen intervals always intersect.
inline ExtensionReport extension_property_test(const MultiOrder& mo, std::size_t k,
                                               std::size_t trials, std::int64_t box,
                                               const ExtensionConfig& cfg = {}) {
  if (k < 1) throw InvalidArgument("extension_property_test needs k >= 1");
  const double cells = std::pow(2.0 * static_cast<double>(box) + 1, static_cast<double>(mo.rank()));
  if (cells < static_cast<double>(k)) throw InvalidArgument("box too small for k distinct points");
  Rng rng(cfg.seed);
  ExtensionReport rep;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<LatticeVector> pts;
    while (pts.size() < k) {
      LatticeVector p = rng.lattice(mo.rank(), box);
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
    }
    IntervalConstraint cons;
    for (std::size_t i = 0; i < mo.size(); ++i) {
      std::vector<LatticeVector> sorted = pts;
      std::sort(sorted.begin(), sorted.end(),
                [&](const LatticeVector& x, const LatticeVector& y) { return mo[i].less(x, y); });
      const std::size_t gap = rng.index(k + 1);
      Bound b;
      if (gap > 0) b.lower = sorted[gap - 1];
      if (gap < k) b.upper = sorted[gap];
      cons.push_back(std::move(b));
    }
    ++rep.trials;
    std::optional<LatticeVector> found;
    if (mo.direction()) {
      try {
        auto w = witness(mo, cons, cfg.witness);
        rep.probes += w.probes;
        found = std::move(w.point);
      } catch (const BudgetExhausted&) {
      }
    } else {
      auto br = witness_brute(mo, cons, cfg.search_box);
      rep.probes += br.probes;
      found = std::move(br.point);
    }
    if (found && satisfies(mo, cons, *found)) {
      ++rep.witnesses_checked;
    } else {
      rep.failures.push_back({std::move(pts), std::move(cons)});
    }
  }
  return rep;
}

}  // namespace multiorder
