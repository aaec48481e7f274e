#pragma once

// Certificates that an n-tuple of orders on Z^m is not generic: one open
// interval per order whose intersection contains no lattice point, plus exact
// evidence for the emptiness.
//
// Dispatch uses the leading form c_i of each order. A linear dependency among
// the c_i over the field gives an arithmetic contradiction (Dependent). A c_i
// with a nonzero integer kernel A lets one interval confine points to A, and
// the other orders are refuted recursively on A (RationalKernel). With n = m
// independent dense forms, a parallelepiped of volume below 1 has a lattice
// free translate (SmallVolume). On Z^1 two adjacent integers bound an empty
// interval (DiscreteBase).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/exact_field.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/lattice.hpp"
#include "multiorder/linalg.hpp"
#include "multiorder/orders.hpp"

namespace multiorder {

enum class LemmaTag { Dependent, RationalKernel, SmallVolume, DiscreteBase };

inline const char* to_string(LemmaTag t) {
  switch (t) {
    case LemmaTag::Dependent: return "Dependent";
    case LemmaTag::RationalKernel: return "RationalKernel";
    case LemmaTag::SmallVolume: return "SmallVolume";
    case LemmaTag::DiscreteBase: return "DiscreteBase";
  }
  return "?";
}

inline std::optional<LemmaTag> lemma_tag_from_string(std::string_view s) {
  for (auto t : {LemmaTag::Dependent, LemmaTag::RationalKernel, LemmaTag::SmallVolume,
                 LemmaTag::DiscreteBase})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

struct Certificate;

/// c_target = sum_j coefficients[j] * c_j, with coefficients[target] = 0.
struct DependentEvidence {
  std::size_t target = 0;
  std::vector<FieldScalar> coefficients;
  std::vector<bool> reversed;  // coefficients[j] < 0
};

/// Saturated basis of ker c_index and the certificate for the other orders
/// pulled back to coordinates on that basis.
struct RationalKernelEvidence {
  std::size_t index = 0;
  std::vector<LatticeVector> basis;
  std::shared_ptr<const Certificate> inner;
};

struct SmallVolumeEvidence {
  FieldScalar determinant;
  std::vector<FieldScalar> widths;
};

struct DiscreteBaseEvidence {
  std::size_t index = 0;
  LatticeVector lower;
  LatticeVector upper;
};

using Evidence =
    std::variant<DependentEvidence, RationalKernelEvidence, SmallVolumeEvidence, DiscreteBaseEvidence>;

struct Certificate {
  IntervalConstraint constraints;
  LemmaTag tag = LemmaTag::DiscreteBase;
  Evidence evidence;
};

struct RefuteConfig {
  std::int64_t endpoint_search_norm = 32;
  std::int64_t width_search_norm = 1024;
  std::uint64_t width_search_probes = 20'000'000;
  std::int64_t translate_shells = 12;
  std::size_t shrink_rounds = 8;
  std::uint64_t box_point_cap = 10'000'000;
};

struct VerifyConfig {
  std::int64_t scan_box = 50;
  std::uint64_t box_point_cap = 50'000'000;
};

namespace detail {

inline std::size_t common_rank(const std::vector<OrderSpec>& orders) {
  if (orders.empty()) throw NoCertificateFound("no orders to refute");
  const std::size_t m = orders[0].rank();
  for (const auto& o : orders)
    if (o.rank() != m) throw RankMismatch(m, o.rank());
  return m;
}

/// Leading forms of all orders over one radical basis.
inline std::vector<LinearForm> leading_forms(const std::vector<OrderSpec>& orders) {
  std::vector<FieldScalar> all;
  for (const auto& o : orders) all.insert(all.end(), o.leading().begin(), o.leading().end());
  const BasisPtr basis = common_basis(all);
  std::vector<LinearForm> out;
  for (const auto& o : orders) out.push_back(rebase(o.leading(), basis));
  return out;
}

struct Dependency {
  std::size_t target;
  std::vector<FieldScalar> coefficients;
};

/// First c_k in the span of the (independent) forms before it.
inline std::optional<Dependency> find_dependency(const std::vector<LinearForm>& c) {
  std::vector<LinearForm> span;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!span.empty()) {
      if (auto sol = solve_in_span(span, c[k])) {
        std::vector<FieldScalar> a(c.size(), FieldScalar(0));
        for (std::size_t t = 0; t < idx.size(); ++t) a[idx[t]] = (*sol)[t];
        return Dependency{k, std::move(a)};
      }
    }
    span.push_back(c[k]);
    idx.push_back(k);
  }
  return std::nullopt;
}

/// First nonzero p in canonical order with sigma * (c . p) > 0.
inline LatticeVector first_with_sign(const LinearForm& c, int sigma, std::int64_t norm) {
  std::optional<LatticeVector> found;
  for_each_in_box(c.size(), norm, [&](std::span<const std::int64_t> z) {
    LatticeVector p = LatticeVector::from_int64(z);
    if (p.is_zero() || sigma * dot(c, p).sign() <= 0) return false;
    found = std::move(p);
    return true;
  });
  if (!found) throw BudgetExhausted("endpoint search: no lattice vector of the required sign");
  return *found;
}

/// First nonzero g in canonical order with 0 < c . g < tau (decided with a
/// safety margin in floating point, then confirmed exactly positive).
inline std::optional<LatticeVector> small_positive(const OrderSpec& o, double tau,
                                                   std::int64_t norm, std::uint64_t probes) {
  const auto a = o.leading_approx();
  std::optional<LatticeVector> found;
  std::uint64_t used = 0;
  for (std::int64_t r = 1; r <= norm && !found && used < probes; ++r) {
    for_each_in_shell(o.rank(), r, [&](std::span<const std::int64_t> z) {
      if (++used > probes) return true;
      double v = 0, w = 0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double t = a[j] * static_cast<double>(z[j]);
        v += t;
        w += std::abs(t);
      }
      const double margin = 1e-9 * (1 + w);
      if (v <= margin || v >= tau - margin) return false;
      LatticeVector g = LatticeVector::from_int64(z);
      if (dot(o.leading(), g).sign() <= 0) return false;
      found = std::move(g);
      return true;
    });
  }
  return found;
}

/// Decides whether no lattice point satisfies `cons`, where every interval
/// is finite and the leading forms are the rows of an invertible C with
/// inverse enclosures `cinv`. Every lattice point of a bounding box of the
/// closed parallelepiped is tested exactly. nullopt when the box exceeds
/// `cap` points.
inline std::optional<bool> parallelepiped_empty(const MultiOrder& mo, const IntervalConstraint& cons,
                                                const std::vector<std::vector<Enclosure>>& cinv,
                                                std::uint64_t cap) {
  const std::size_t n = mo.rank();
  std::vector<double> vlo(n), vhi(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!cons[i].lower || !cons[i].upper) return std::nullopt;
    vlo[i] = dot(mo[i].leading(), *cons[i].lower).enclosure().lo;
    vhi[i] = dot(mo[i].leading(), *cons[i].upper).enclosure().hi;
  }
  std::vector<std::int64_t> lo(n), hi(n);
  double points = 1;
  for (std::size_t j = 0; j < n; ++j) {
    double xlo = 0, xhi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p[4] = {cinv[j][i].lo * vlo[i], cinv[j][i].lo * vhi[i], cinv[j][i].hi * vlo[i],
                           cinv[j][i].hi * vhi[i]};
      xlo += *std::min_element(p, p + 4);
      xhi += *std::max_element(p, p + 4);
    }
    if (!std::isfinite(xlo) || !std::isfinite(xhi) || std::abs(xlo) > 1e15 || std::abs(xhi) > 1e15)
      return std::nullopt;
    lo[j] = static_cast<std::int64_t>(std::floor(xlo)) - 1;
    hi[j] = static_cast<std::int64_t>(std::ceil(xhi)) + 1;
    points *= static_cast<double>(hi[j] - lo[j] + 1);
  }
  if (points > static_cast<double>(cap)) return std::nullopt;
  ConstraintFilter filter(mo, cons);
  const bool hit = for_each_in_range(std::span<const std::int64_t>(lo), std::span<const std::int64_t>(hi),
                                     [&](std::span<const std::int64_t> z) { return filter.accepts(z); });
  return !hit;
}

inline std::vector<std::vector<Enclosure>> inverse_enclosures(const std::vector<LinearForm>& c) {
  const auto inv = inverse(Matrix<FieldScalar>(c.begin(), c.end()));
  std::vector<std::vector<Enclosure>> out;
  for (const auto& row : inv) {
    std::vector<Enclosure> r;
    for (const auto& x : row) r.push_back(x.is_zero() ? Enclosure{0, 0} : x.enclosure());
    out.push_back(std::move(r));
  }
  return out;
}

inline Bound lift(const Bound& b, const std::vector<LatticeVector>& basis, std::size_t m) {
  Bound out;
  if (b.lower) out.lower = combine(basis, *b.lower, m);
  if (b.upper) out.upper = combine(basis, *b.upper, m);
  return out;
}

inline bool all_finite_ordered(const std::vector<OrderSpec>& orders, const IntervalConstraint& cons) {
  for (std::size_t i = 0; i < cons.size(); ++i)
    if (cons[i].lower && cons[i].upper && !orders[i].less(*cons[i].lower, *cons[i].upper))
      return false;
  return true;
}

}  // namespace detail

/// Saturated basis of {z in Z^m : c . z = 0}.
inline std::vector<LatticeVector> kernel_lattice(const LinearForm& c, std::size_t m) {
  if (c.size() != m) throw RankMismatch(m, c.size());
  auto basis = form_kernel(c);
  if (basis.empty()) throw InvalidArgument("kernel_lattice: components are Q-independent");
  return basis;
}

/// The orders other than `skip`, restricted to span(basis) and written in
/// coordinates on the basis. Forms vanishing there are dropped.
inline std::vector<OrderSpec> pull_back_orders(const std::vector<OrderSpec>& orders, std::size_t skip,
                                               const std::vector<LatticeVector>& basis) {
  std::vector<OrderSpec> out;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (j == skip) continue;
    std::vector<LinearForm> forms;
    for (const auto& f : orders[j].forms()) {
      LinearForm p = pull_back(f, basis);
      if (!is_zero_form(p)) forms.push_back(std::move(p));
    }
    out.emplace_back(basis.size(), std::move(forms));
  }
  return out;
}

/// Which construction refute() will use; nullopt when none applies.
inline std::optional<LemmaTag> dispatch_path(const std::vector<OrderSpec>& orders) {
  const std::size_t m = detail::common_rank(orders);
  if (m == 1) return LemmaTag::DiscreteBase;
  const auto c = detail::leading_forms(orders);
  if (detail::find_dependency(c)) return LemmaTag::Dependent;
  for (const auto& ci : c)
    if (!q_linear_independent(ci)) return LemmaTag::RationalKernel;
  if (orders.size() == m) return LemmaTag::SmallVolume;
  return std::nullopt;
}

inline Certificate refute_discrete_base(const std::vector<OrderSpec>& orders) {
  const std::size_t m = detail::common_rank(orders);
  if (m != 1) throw InvalidArgument("refute_discrete_base needs rank 1");
  const LatticeVector zero{0};
  const LatticeVector step = orders[0].sign_of(LatticeVector{1}) > 0 ? LatticeVector{1} : LatticeVector{-1};
  Certificate cert;
  cert.constraints.assign(orders.size(), Bound{});
  cert.constraints[0] = Bound{zero, step};
  cert.tag = LemmaTag::DiscreteBase;
  cert.evidence = DiscreteBaseEvidence{0, zero, step};
  return cert;
}

/// Interval (0, p_j) or (p_j, 0) for each order j with a_j != 0, so that
/// sum_j a_j c_j . z >= 0, and (-2q, -q) for order k, forcing c_k . z < 0.
inline Certificate refute_dependent(const std::vector<OrderSpec>& orders,
                                    const std::vector<FieldScalar>& coefficients, std::size_t k,
                                    const RefuteConfig& cfg = {}) {
  const std::size_t m = detail::common_rank(orders);
  const std::size_t n = orders.size();
  if (coefficients.size() != n) throw InvalidArgument("refute_dependent: one coefficient per order");
  if (k >= n || !coefficients[k].is_zero())
    throw InvalidArgument("refute_dependent: bad target index");
  const auto c = detail::leading_forms(orders);
  LinearForm rhs(m, FieldScalar(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t t = 0; t < m; ++t) rhs[t] += coefficients[j] * c[j][t];
  for (std::size_t t = 0; t < m; ++t)
    if (!(rhs[t] == c[k][t])) throw InvalidArgument("refute_dependent: dependency identity fails");

  Certificate cert;
  cert.constraints.assign(n, Bound{});
  DependentEvidence ev{k, coefficients, std::vector<bool>(n, false)};
  const LatticeVector zero(m);
  for (std::size_t j = 0; j < n; ++j) {
    const int s = coefficients[j].sign();
    if (s == 0) continue;
    ev.reversed[j] = s < 0;
    const LatticeVector p = detail::first_with_sign(c[j], s, cfg.endpoint_search_norm);
    cert.constraints[j] = s > 0 ? Bound{zero, p} : Bound{p, zero};
  }
  const LatticeVector q = detail::first_with_sign(c[k], 1, cfg.endpoint_search_norm);
  cert.constraints[k] = Bound{Integer(-2) * q, -q};
  cert.tag = LemmaTag::Dependent;
  cert.evidence = std::move(ev);
  return cert;
}

inline Certificate refute(const std::vector<OrderSpec>& orders, const RefuteConfig& cfg = {});

/// Order i gets (-v, v) with v in A = ker c_i, so its interval lies in A; the
/// rest comes from refuting the other orders restricted to A.
inline Certificate refute_rational_kernel(const std::vector<OrderSpec>& orders, std::size_t i,
                                          const RefuteConfig& cfg = {}) {
  const std::size_t m = detail::common_rank(orders);
  if (i >= orders.size()) throw InvalidArgument("refute_rational_kernel: index out of range");
  const auto basis = kernel_lattice(orders[i].leading(), m);
  const auto pulled = pull_back_orders(orders, i, basis);
  if (pulled.empty()) throw NoCertificateFound("no other orders to restrict to the kernel");
  auto inner = std::make_shared<const Certificate>(refute(pulled, cfg));

  Certificate cert;
  const LatticeVector& v = basis[0];
  for (std::size_t j = 0, t = 0; j < orders.size(); ++j) {
    if (j == i) {
      cert.constraints.push_back(orders[i].sign_of(v) > 0 ? Bound{-v, v} : Bound{v, -v});
    } else {
      cert.constraints.push_back(detail::lift(inner->constraints[t++], basis, m));
    }
  }
  cert.tag = LemmaTag::RationalKernel;
  cert.evidence = RationalKernelEvidence{i, basis, std::move(inner)};
  return cert;
}

/// n = m dense orders with independent leading forms: intervals
/// (s_i g_i, (s_i + 1) g_i) of widths c_i . g_i whose product is below |det C|;
/// shifts s in Z^n are scanned in canonical order until the parallelepiped
/// holds no lattice point. Widths shrink when the scan runs out.
inline Certificate refute_small_volume(const std::vector<OrderSpec>& orders,
                                       const RefuteConfig& cfg = {}) {
  const std::size_t m = detail::common_rank(orders);
  const std::size_t n = orders.size();
  if (n != m) throw InvalidArgument("refute_small_volume needs as many orders as the rank");
  const auto c = detail::leading_forms(orders);
  for (const auto& ci : c)
    if (!q_linear_independent(ci)) throw InvalidArgument("refute_small_volume needs dense orders");
  const FieldScalar det = determinant_bareiss(Matrix<FieldScalar>(c.begin(), c.end()));
  if (det.is_zero()) throw InvalidArgument("refute_small_volume: leading forms are dependent");
  const FieldScalar absdet = det.abs();
  const MultiOrder mo(m, orders);
  const auto cinv = detail::inverse_enclosures(c);

  double tau = std::pow(absdet.approx() / 2, 1.0 / static_cast<double>(n));
  for (std::size_t round = 0; round < cfg.shrink_rounds; ++round, tau /= 2) {
    std::vector<LatticeVector> g;
    std::vector<FieldScalar> widths;
    FieldScalar volume(1);
    for (std::size_t i = 0; i < n; ++i) {
      auto gi = detail::small_positive(mo[i], tau, cfg.width_search_norm, cfg.width_search_probes);
      if (!gi) throw BudgetExhausted("refute_small_volume: no small positive element found");
      widths.push_back(dot(mo[i].leading(), *gi));
      volume *= widths.back();
      g.push_back(std::move(*gi));
    }
    if ((absdet - volume).sign() <= 0) continue;

    std::optional<IntervalConstraint> found;
    for (std::int64_t r = 0; r <= cfg.translate_shells && !found; ++r) {
      for_each_in_shell(n, r, [&](std::span<const std::int64_t> s) {
        IntervalConstraint cons;
        for (std::size_t i = 0; i < n; ++i)
          cons.push_back(Bound{Integer(static_cast<long>(s[i])) * g[i],
                               Integer(static_cast<long>(s[i] + 1)) * g[i]});
        const auto empty = detail::parallelepiped_empty(mo, cons, cinv, cfg.box_point_cap);
        if (!empty || !*empty) return false;
        found = std::move(cons);
        return true;
      });
    }
    if (!found) continue;
    Certificate cert;
    cert.constraints = std::move(*found);
    cert.tag = LemmaTag::SmallVolume;
    cert.evidence = SmallVolumeEvidence{det, std::move(widths)};
    return cert;
  }
  throw BudgetExhausted("refute_small_volume: translate search exhausted");
}

inline Certificate refute(const std::vector<OrderSpec>& orders, const RefuteConfig& cfg) {
  const std::size_t m = detail::common_rank(orders);
  if (m == 1) return refute_discrete_base(orders);
  const auto c = detail::leading_forms(orders);
  if (auto dep = detail::find_dependency(c))
    return refute_dependent(orders, dep->coefficients, dep->target, cfg);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!q_linear_independent(c[i])) return refute_rational_kernel(orders, i, cfg);
  if (orders.size() == m) return refute_small_volume(orders, cfg);
  throw NoCertificateFound("independent dense leading forms with fewer orders than the rank");
}

namespace detail {

inline bool check_dependent(const std::vector<OrderSpec>& orders, const Certificate& cert,
                            const DependentEvidence& ev) {
  const std::size_t n = orders.size();
  const std::size_t m = orders[0].rank();
  if (ev.coefficients.size() != n || ev.reversed.size() != n || ev.target >= n) return false;
  if (!ev.coefficients[ev.target].is_zero()) return false;
  const auto c = leading_forms(orders);
  LinearForm rhs(m, FieldScalar(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t t = 0; t < m; ++t) rhs[t] += ev.coefficients[j] * c[j][t];
  for (std::size_t t = 0; t < m; ++t)
    if (!(rhs[t] == c[ev.target][t])) return false;
  // Inside the intervals, a_j c_j . z >= a_j c_j . e_j for the endpoint e_j
  // on the side that bounds it, so c_k . z >= bound.
  FieldScalar bound(0);
  for (std::size_t j = 0; j < n; ++j) {
    const int s = ev.coefficients[j].sign();
    if (s == 0) continue;
    if (ev.reversed[j] != (s < 0)) return false;
    const auto& e = s > 0 ? cert.constraints[j].lower : cert.constraints[j].upper;
    if (!e) return false;
    bound += ev.coefficients[j] * dot(c[j], *e);
  }
  const auto& yk = cert.constraints[ev.target].upper;
  if (!yk) return false;
  return (bound - dot(c[ev.target], *yk)).sign() > 0;
}

inline bool verify_structure(const std::vector<OrderSpec>& orders, const Certificate& cert,
                             const VerifyConfig& cfg);

inline bool check_rational_kernel(const std::vector<OrderSpec>& orders, const Certificate& cert,
                                  const RationalKernelEvidence& ev, const VerifyConfig& cfg) {
  const std::size_t m = orders[0].rank();
  if (ev.index >= orders.size() || ev.basis.empty() || !ev.inner) return false;
  const LinearForm& ci = orders[ev.index].leading();
  for (const auto& b : ev.basis) {
    if (b.rank() != m) throw MalformedInput("kernel basis vector has the wrong rank");
    if (!dot(ci, b).is_zero()) return false;
  }
  // The basis must generate the whole kernel, not a sublattice of it.
  const auto full = form_kernel(ci);
  if (full.size() != ev.basis.size()) return false;
  try {
    for (const auto& k : full)
      if (!integer_coordinates(ev.basis, k)) return false;
  } catch (const InvalidArgument&) {
    return false;  // dependent basis vectors
  }
  const Bound& bi = cert.constraints[ev.index];
  if (!bi.lower || !bi.upper) return false;
  if (!dot(ci, *bi.lower).is_zero() || !dot(ci, *bi.upper).is_zero()) return false;

  const auto pulled = pull_back_orders(orders, ev.index, ev.basis);
  const Certificate& inner = *ev.inner;
  if (inner.constraints.size() != pulled.size()) return false;
  for (std::size_t j = 0, t = 0; j < orders.size(); ++j) {
    if (j == ev.index) continue;
    for (const auto* e : {&inner.constraints[t].lower, &inner.constraints[t].upper})
      if (*e && e->value().rank() != ev.basis.size()) return false;
    if (!(lift(inner.constraints[t], ev.basis, m) == cert.constraints[j])) return false;
    ++t;
  }
  if (!all_finite_ordered(pulled, inner.constraints)) return false;
  return verify_structure(pulled, inner, cfg);
}

inline bool check_small_volume(const std::vector<OrderSpec>& orders, const Certificate& cert,
                               const SmallVolumeEvidence& ev, const VerifyConfig& cfg) {
  const std::size_t n = orders.size();
  const std::size_t m = orders[0].rank();
  if (n != m || ev.widths.size() != n) return false;
  const auto c = leading_forms(orders);
  for (const auto& ci : c)
    if (!q_linear_independent(ci)) return false;
  const FieldScalar det = determinant_bareiss(Matrix<FieldScalar>(c.begin(), c.end()));
  if (det.is_zero() || !(det == ev.determinant)) return false;
  FieldScalar volume(1);
  for (std::size_t i = 0; i < n; ++i) {
    const Bound& b = cert.constraints[i];
    if (!b.lower || !b.upper) return false;
    const FieldScalar w = dot(c[i], *b.upper - *b.lower);
    if (!(w == ev.widths[i]) || w.sign() <= 0) return false;
    volume *= w;
  }
  if ((det.abs() - volume).sign() <= 0) return false;
  const MultiOrder mo(m, orders);
  const auto empty = parallelepiped_empty(mo, cert.constraints, inverse_enclosures(c), cfg.box_point_cap);
  return empty && *empty;
}

inline bool check_discrete_base(const std::vector<OrderSpec>& orders, const Certificate& cert,
                                const DiscreteBaseEvidence& ev) {
  if (orders[0].rank() != 1 || ev.index >= orders.size()) return false;
  const Bound& b = cert.constraints[ev.index];
  if (!b.lower || !b.upper || !(*b.lower == ev.lower) || !(*b.upper == ev.upper)) return false;
  if (ev.lower.rank() != 1 || ev.upper.rank() != 1) return false;
  return abs(ev.upper[0] - ev.lower[0]) == 1;
}

inline bool verify_structure(const std::vector<OrderSpec>& orders, const Certificate& cert,
                             const VerifyConfig& cfg) {
  return std::visit(
      [&](const auto& ev) -> bool {
        using E = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<E, DependentEvidence>) {
          return cert.tag == LemmaTag::Dependent && check_dependent(orders, cert, ev);
        } else if constexpr (std::is_same_v<E, RationalKernelEvidence>) {
          return cert.tag == LemmaTag::RationalKernel && check_rational_kernel(orders, cert, ev, cfg);
        } else if constexpr (std::is_same_v<E, SmallVolumeEvidence>) {
          return cert.tag == LemmaTag::SmallVolume && check_small_volume(orders, cert, ev, cfg);
        } else {
          return cert.tag == LemmaTag::DiscreteBase && check_discrete_base(orders, cert, ev);
        }
      },
      cert.evidence);
}

}  // namespace detail

/// Exact check of the certificate's evidence followed by a brute-force scan of
/// [-scan_box, scan_box]^m. Throws MalformedInput when the certificate does
/// not match the orders in shape.
inline bool verify_certificate(const std::vector<OrderSpec>& orders, const Certificate& cert,
                               const VerifyConfig& cfg = {}) {
  const std::size_t m = detail::common_rank(orders);
  if (cert.constraints.size() != orders.size())
    throw MalformedInput("certificate lists " + std::to_string(cert.constraints.size()) +
                         " intervals for " + std::to_string(orders.size()) + " orders");
  for (const auto& b : cert.constraints)
    for (const auto* e : {&b.lower, &b.upper})
      if (*e && e->value().rank() != m) throw MalformedInput("certificate endpoint has the wrong rank");
  if (!detail::all_finite_ordered(orders, cert.constraints)) return false;
  if (!detail::verify_structure(orders, cert, cfg)) return false;
  const MultiOrder mo(m, orders);
  return !witness_brute(mo, cert.constraints, cfg.scan_box).point;
}

}  // namespace multiorder
