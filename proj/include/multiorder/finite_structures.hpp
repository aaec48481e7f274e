#pragma once

// Finite n-orders: k labelled points with n linear orders. Each order is the
// list of labels from least to greatest. In canonical form the first order is
// 0 < 1 < ... < k-1, so labels are first-order ranks and two structures are
// isomorphic iff their canonical forms are equal.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multiorder/errors.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/lattice.hpp"

namespace multiorder {

class FiniteNOrder {
 public:
  FiniteNOrder() = default;

  /// Validates that every order lists each label 0..k-1 exactly once.
  FiniteNOrder(std::size_t k, std::vector<std::vector<std::size_t>> orders)
      : k_(k), orders_(std::move(orders)) {
    if (orders_.empty()) throw InvalidArgument("finite n-order needs at least one order");
    for (const auto& seq : orders_) {
      if (seq.size() != k_) throw MalformedInput("order lists the wrong number of labels");
      std::vector<bool> seen(k_, false);
      for (std::size_t l : seq) {
        if (l >= k_ || seen[l]) throw MalformedInput("order is not a permutation of the labels");
        seen[l] = true;
      }
    }
  }

  std::size_t size() const { return k_; }
  std::size_t arity() const { return orders_.size(); }
  const std::vector<std::vector<std::size_t>>& orders() const { return orders_; }

  /// rank(i)[label] = position of label in order i.
  std::vector<std::size_t> rank(std::size_t i) const {
    std::vector<std::size_t> r(k_);
    for (std::size_t p = 0; p < k_; ++p) r[orders_[i][p]] = p;
    return r;
  }

  bool less(std::size_t i, std::size_t a, std::size_t b) const {
    const auto& seq = orders_[i];
    return std::find(seq.begin(), seq.end(), a) < std::find(seq.begin(), seq.end(), b);
  }

  /// relabel[old] = first-order rank of old.
  std::vector<std::size_t> canonical_relabeling() const { return rank(0); }

  bool is_normalized() const {
    for (std::size_t p = 0; p < k_; ++p)
      if (orders_[0][p] != p) return false;
    return true;
  }

  FiniteNOrder relabeled(const std::vector<std::size_t>& relabel) const {
    auto out = orders_;
    for (auto& seq : out)
      for (auto& l : seq) l = relabel[l];
    return FiniteNOrder(k_, std::move(out));
  }

  FiniteNOrder normalized() const { return relabeled(canonical_relabeling()); }

  friend bool operator==(const FiniteNOrder&, const FiniteNOrder&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::vector<std::size_t>> orders_;
};

inline bool isomorphic(const FiniteNOrder& a, const FiniteNOrder& b) {
  return a.size() == b.size() && a.arity() == b.arity() && a.normalized() == b.normalized();
}

/// The substructure on `labels` (relabelled 0.. in the given order) and its
/// inclusion map into s.
inline std::pair<FiniteNOrder, std::vector<std::size_t>> substructure(
    const FiniteNOrder& s, const std::vector<std::size_t>& labels) {
  std::vector<std::optional<std::size_t>> local(s.size());
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] >= s.size() || local[labels[t]]) throw InvalidArgument("substructure: bad label list");
    local[labels[t]] = t;
  }
  std::vector<std::vector<std::size_t>> orders;
  for (const auto& seq : s.orders()) {
    std::vector<std::size_t> sub;
    for (std::size_t l : seq)
      if (local[l]) sub.push_back(*local[l]);
    orders.push_back(std::move(sub));
  }
  return {FiniteNOrder(labels.size(), std::move(orders)), labels};
}

/// Second-order sequence of first-order ranks, 1-based.
inline std::vector<std::size_t> pattern_of(const FiniteNOrder& s) {
  if (s.arity() != 2) throw InvalidArgument("pattern_of needs a 2-order");
  auto seq = s.normalized().orders()[1];
  for (auto& l : seq) ++l;
  return seq;
}

inline FiniteNOrder from_pattern(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> id(perm.size()), second;
  std::iota(id.begin(), id.end(), std::size_t{0});
  for (std::size_t p : perm) {
    if (p == 0) throw MalformedInput("pattern entries are 1-based");
    second.push_back(p - 1);
  }
  return FiniteNOrder(perm.size(), {std::move(id), std::move(second)});
}

/// The structure the orders of `mo` induce on `points`, normalized.
inline FiniteNOrder induced(const MultiOrder& mo, const std::vector<LatticeVector>& points) {
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b]) throw InvalidArgument("induced: duplicate points");
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t i = 0; i < mo.size(); ++i) {
    std::vector<std::size_t> seq(points.size());
    std::iota(seq.begin(), seq.end(), std::size_t{0});
    std::sort(seq.begin(), seq.end(),
              [&](std::size_t a, std::size_t b) { return mo[i].less(points[a], points[b]); });
    orders.push_back(std::move(seq));
  }
  return FiniteNOrder(points.size(), std::move(orders)).normalized();
}

/// image[label] is the lattice point of that label.
struct Embedding {
  std::vector<LatticeVector> image;
};

/// True iff `e` is injective and preserves each order of `s`.
inline bool is_embedding(const FiniteNOrder& s, const MultiOrder& mo, const Embedding& e) {
  if (e.image.size() != s.size() || s.arity() != mo.size()) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    const auto& seq = s.orders()[i];
    for (std::size_t p = 0; p + 1 < seq.size(); ++p)
      if (!mo[i].less(e.image[seq[p]], e.image[seq[p + 1]])) return false;
  }
  return true;
}

struct EmbedConfig {
  WitnessConfig witness;
  std::vector<std::int64_t> brute_boxes{8, 16, 32, 64};  // when mo has no direction
};

/// Places the points of `s` one at a time, in first-order sequence, each one
/// inside the intervals its neighbours among the placed points define.
inline Embedding embed(const FiniteNOrder& s, const MultiOrder& mo, const EmbedConfig& cfg = {}) {
  if (s.arity() != mo.size())
    throw InvalidArgument("embed: structure has " + std::to_string(s.arity()) + " orders, target " +
                          std::to_string(mo.size()));
  std::vector<std::vector<std::size_t>> ranks;
  for (std::size_t i = 0; i < s.arity(); ++i) ranks.push_back(s.rank(i));
  std::vector<std::optional<LatticeVector>> placed(s.size());
  for (std::size_t label : s.orders()[0]) {
    IntervalConstraint cons;
    for (std::size_t i = 0; i < s.arity(); ++i) {
      const auto& seq = s.orders()[i];
      Bound b;
      for (std::size_t p = ranks[i][label]; p-- > 0;)
        if (placed[seq[p]]) {
          b.lower = placed[seq[p]];
          break;
        }
      for (std::size_t p = ranks[i][label] + 1; p < seq.size(); ++p)
        if (placed[seq[p]]) {
          b.upper = placed[seq[p]];
          break;
        }
      cons.push_back(std::move(b));
    }
    if (mo.direction()) {
      placed[label] = witness(mo, cons, cfg.witness).point;
    } else {
      for (std::int64_t box : cfg.brute_boxes) {
        if (auto br = witness_brute(mo, cons, box); br.point) {
          placed[label] = std::move(br.point);
          break;
        }
      }
      if (!placed[label]) throw BudgetExhausted("embed: no point found in the brute-force schedule");
    }
  }
  Embedding e;
  for (auto& p : placed) e.image.push_back(std::move(*p));
  return e;
}

/// A label map f: A -> B, f[a] = label in B.
using LabelMap = std::vector<std::size_t>;

inline bool is_label_embedding(const FiniteNOrder& a, const FiniteNOrder& b, const LabelMap& f) {
  if (f.size() != a.size() || a.arity() != b.arity()) return false;
  std::vector<bool> used(b.size(), false);
  for (std::size_t x : f) {
    if (x >= b.size() || used[x]) return false;
    used[x] = true;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const auto rb = b.rank(i);
    const auto& seq = a.orders()[i];
    for (std::size_t p = 0; p + 1 < seq.size(); ++p)
      if (rb[f[seq[p]]] >= rb[f[seq[p + 1]]]) return false;
  }
  return true;
}

struct Amalgam {
  FiniteNOrder c;
  LabelMap g1;
  LabelMap g2;
};

/// Strong amalgam of B1 and B2 over A: points outside A stay distinct. In
/// each order, the points of B1 and B2 lying in the same gap of A are placed
/// B1 first. The result is normalized.
inline Amalgam amalgamate(const FiniteNOrder& a, const FiniteNOrder& b1, const LabelMap& f1,
                          const FiniteNOrder& b2, const LabelMap& f2) {
  if (!is_label_embedding(a, b1, f1)) throw InvalidArgument("amalgamate: f1 is not an embedding");
  if (!is_label_embedding(a, b2, f2)) throw InvalidArgument("amalgamate: f2 is not an embedding");
  const std::size_t k = b1.size() + b2.size() - a.size();

  // Provisional labels: B1 keeps its own, B2 \ f2(A) follows in label order.
  LabelMap g1(b1.size()), g2(b2.size());
  std::iota(g1.begin(), g1.end(), std::size_t{0});
  std::vector<std::optional<std::size_t>> from_a(b2.size());
  for (std::size_t x = 0; x < a.size(); ++x) from_a[f2[x]] = x;
  for (std::size_t y = 0, next = b1.size(); y < b2.size(); ++y)
    g2[y] = from_a[y] ? g1[f1[*from_a[y]]] : next++;

  std::vector<bool> in_a1(b1.size(), false), in_a2(b2.size(), false);
  for (std::size_t x = 0; x < a.size(); ++x) in_a1[f1[x]] = in_a2[f2[x]] = true;

  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    // Split each B order into the runs between consecutive A points.
    auto runs = [&](const FiniteNOrder& b, const std::vector<bool>& in_a, const LabelMap& g) {
      std::vector<std::vector<std::size_t>> out(1);
      for (std::size_t y : b.orders()[i]) {
        if (in_a[y]) {
          out.emplace_back();
        } else {
          out.back().push_back(g[y]);
        }
      }
      return out;
    };
    const auto r1 = runs(b1, in_a1, g1);
    const auto r2 = runs(b2, in_a2, g2);
    std::vector<std::size_t> seq;
    const auto& aseq = a.orders()[i];
    for (std::size_t t = 0; t <= aseq.size(); ++t) {
      seq.insert(seq.end(), r1[t].begin(), r1[t].end());
      seq.insert(seq.end(), r2[t].begin(), r2[t].end());
      if (t < aseq.size()) seq.push_back(g1[f1[aseq[t]]]);
    }
    orders.push_back(std::move(seq));
  }
  const FiniteNOrder raw(k, std::move(orders));
  const auto relabel = raw.canonical_relabeling();
  for (auto& x : g1) x = relabel[x];
  for (auto& x : g2) x = relabel[x];
  return {raw.relabeled(relabel), std::move(g1), std::move(g2)};
}

}  // namespace multiorder
