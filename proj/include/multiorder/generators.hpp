#pragma once

// Random scalars, orders and finite structures for property checks.

#include <cstdint>
#include <utility>
#include <vector>

#include "multiorder/exact_field.hpp"
#include "multiorder/finite_structures.hpp"
#include "multiorder/orders.hpp"
#include "multiorder/random.hpp"
#include "multiorder/refuter.hpp"

namespace multiorder::gen {

inline BasisPtr small_basis() {
  static BasisPtr b = std::make_shared<const RadicalBasis>(std::vector<std::uint64_t>{2, 3, 5, 7});
  return b;
}

/// Random element with up to `terms` radicals and small rational coefficients.
inline FieldScalar random_scalar(Rng& rng, const BasisPtr& basis, int terms = 4,
                                 std::int64_t height = 9) {
  std::vector<Term> out;
  const Mask full = (Mask{1} << basis->size()) - 1;
  for (int i = 0; i < terms; ++i) {
    const Mask m = static_cast<Mask>(rng.uniform(0, static_cast<std::int64_t>(full)));
    const std::int64_t num = rng.uniform(-height, height);
    const std::int64_t den = rng.uniform(1, 4);
    out.push_back({m, Rational(static_cast<long>(num), static_cast<unsigned long>(den))});
    out.back().coeff.canonicalize();
  }
  return FieldScalar(basis, out);
}

inline FieldScalar small_rational(Rng& rng, std::int64_t h = 5) {
  Rational q(static_cast<long>(rng.uniform(-h, h)), static_cast<unsigned long>(rng.uniform(1, 3)));
  q.canonicalize();
  return FieldScalar(q);
}

/// Form with Q-independent components: c_j = a_j + b_j sqrt(r_j).
inline LinearForm random_dense_form(Rng& rng, std::size_t m) {
  const auto basis = small_basis();
  const long radicands[] = {2, 3, 5, 6, 7, 10, 14, 15};
  while (true) {
    LinearForm c;
    for (std::size_t j = 0; j < m; ++j) {
      const long r = radicands[rng.index(8)];
      c.push_back(small_rational(rng) + small_rational(rng) * FieldScalar::sqrt_of(basis, r));
    }
    if (m >= 2 && q_linear_independent(c)) return c;
  }
}

/// Nonzero form with rational entries (Q-dependent components when m >= 2).
inline LinearForm random_rational_form(Rng& rng, std::size_t m) {
  while (true) {
    LinearForm c;
    for (std::size_t j = 0; j < m; ++j) c.push_back(FieldScalar(Rational(rng.uniform(-3, 3))));
    if (!is_zero_form(c)) return c;
  }
}

inline OrderSpec random_dense_order(Rng& rng, std::size_t m) {
  return OrderSpec(m, {random_dense_form(rng, m)});
}

/// Non-archimedean order: a rational leading form, then a dense or unit tail.
inline OrderSpec random_recursive_order(Rng& rng, std::size_t m) {
  std::vector<LinearForm> forms{random_rational_form(rng, m)};
  if (m >= 2 && rng.coin()) forms.push_back(random_dense_form(rng, m));
  return OrderSpec::completed(m, std::move(forms));
}

inline OrderSpec random_order(Rng& rng, std::size_t m) {
  if (m >= 2 && rng.coin()) return random_dense_order(rng, m);
  return random_recursive_order(rng, m);
}

inline std::vector<std::size_t> random_sequence(Rng& rng, std::size_t k) {
  std::vector<std::size_t> out;
  for (int x : rng.permutation(k)) out.push_back(static_cast<std::size_t>(x));
  return out;
}

inline FiniteNOrder random_finite(Rng& rng, std::size_t k, std::size_t n) {
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t i = 0; i < n; ++i) orders.push_back(random_sequence(rng, k));
  return FiniteNOrder(k, std::move(orders));
}

/// B extending A by `extra` points at random positions, with shuffled labels,
/// and the embedding f: A -> B.
inline std::pair<FiniteNOrder, LabelMap> random_extension(Rng& rng, const FiniteNOrder& a,
                                                          std::size_t extra) {
  const std::size_t k = a.size() + extra;
  const auto shuffle = random_sequence(rng, k);
  std::vector<std::vector<std::size_t>> orders;
  for (const auto& seq : a.orders()) {
    std::vector<std::size_t> b(seq);
    for (std::size_t e = 0; e < extra; ++e) {
      const auto pos = static_cast<std::ptrdiff_t>(rng.index(b.size() + 1));
      b.insert(b.begin() + pos, a.size() + e);
    }
    for (auto& l : b) l = shuffle[l];
    orders.push_back(std::move(b));
  }
  LabelMap f(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) f[x] = shuffle[x];
  return {FiniteNOrder(k, std::move(orders)), std::move(f)};
}

/// Random m orders on Z^m whose refutation takes the path `tag`.
inline std::vector<OrderSpec> tuple_for(LemmaTag tag, std::size_t m, Rng& rng) {
  const FieldScalar root2 = FieldScalar::sqrt_of(small_basis(), 2);
  while (true) {
    std::vector<OrderSpec> orders;
    switch (tag) {
      case LemmaTag::DiscreteBase:
        for (std::size_t i = 0; i < m; ++i) orders.push_back(random_recursive_order(rng, 1));
        break;
      case LemmaTag::Dependent: {
        for (std::size_t i = 0; i + 1 < m; ++i) orders.push_back(random_order(rng, m));
        LinearForm c(m, FieldScalar(0));
        for (const auto& o : orders) {
          const FieldScalar a = rng.coin() ? small_rational(rng) : small_rational(rng) * root2;
          for (std::size_t t = 0; t < m; ++t) c[t] += a * o.leading()[t];
        }
        if (is_zero_form(c)) continue;
        orders.push_back(OrderSpec::completed(m, {c}));
        break;
      }
      case LemmaTag::RationalKernel:
        orders.push_back(random_recursive_order(rng, m));
        for (std::size_t i = 1; i < m; ++i) orders.push_back(random_order(rng, m));
        break;
      case LemmaTag::SmallVolume:
        for (std::size_t i = 0; i < m; ++i) orders.push_back(random_dense_order(rng, m));
        break;
    }
    if (dispatch_path(orders) == tag) return orders;
  }
}

}  // namespace multiorder::gen
