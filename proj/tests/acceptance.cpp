// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "multiorder/finite_structures.hpp"
#include "multiorder/genericity.hpp"
#include "multiorder/matrix_builder.hpp"
#include "multiorder/refuter.hpp"

namespace mo = multiorder;
using mo::FieldScalar;
using mo::FiniteNOrder;
using mo::LatticeVector;
using mo::LinearForm;
using mo::OrderSpec;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

// ---- oracles ---------------------------------------------------------------

FieldScalar dot_ring(const LinearForm& c, const LatticeVector& z) {
  FieldScalar s(0);
  for (std::size_t j = 0; j < c.size(); ++j) s = s + c[j] * FieldScalar(mo::Rational(z[j]));
  return s;
}

// Lexicographic sign over the forms, each sign by repeated squaring.
int oracle_sign(const OrderSpec& o, const LatticeVector& d) {
  for (const auto& c : o.forms()) {
    const int s = mo::testing::sign_by_squaring(dot_ring(c, d));
    if (s != 0) return s;
  }
  return 0;
}

bool oracle_less(const OrderSpec& o, const LatticeVector& x, const LatticeVector& y) {
  return oracle_sign(o, y - x) > 0;
}

bool oracle_satisfies(const mo::MultiOrder& m, const mo::IntervalConstraint& cons, const LatticeVector& p) {
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].lower && !oracle_less(m[i], *cons[i].lower, p)) return false;
    if (cons[i].upper && !oracle_less(m[i], p, *cons[i].upper)) return false;
  }
  return true;
}

FieldScalar leibniz_det(const std::vector<LinearForm>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  FieldScalar det(0);
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    FieldScalar term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < n; ++i) term = term * rows[i][perm[i]];
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Rank over Q of the entries of a form, each read as its vector of radical
// coefficients.
std::size_t rational_rank_of_entries(const LinearForm& c) {
  std::map<mo::Mask, std::size_t> column;
  for (const auto& x : c)
    for (const auto& t : x.terms()) column.emplace(t.mask, column.size());
  std::vector<std::vector<mo::Rational>> rows;
  for (const auto& x : c) {
    std::vector<mo::Rational> r(column.size(), mo::Rational(0));
    for (const auto& t : x.terms()) r[column[t.mask]] = t.coeff;
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < column.size() && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const mo::Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t k = col; k < column.size(); ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

bool oracle_embedding(const FiniteNOrder& s, const mo::MultiOrder& m, const std::vector<LatticeVector>& image) {
  if (image.size() != s.size()) return false;
  for (std::size_t i = 0; i < s.arity(); ++i)
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        if (a != b && s.less(i, a, b) != oracle_less(m[i], image[a], image[b])) return false;
  return true;
}

mo::MultiOrder generic(std::size_t n) { return mo::from_matrix(mo::build_order_matrix(n + 1, 0)); }

std::string vec_str(const LatticeVector& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < v.rank(); ++i) s << (i ? "," : "") << v[i].get_str();
  s << ")";
  return s.str();
}

// ---- criteria --------------------------------------------------------------

std::vector<OrderSpec> ten_orders(mo::Rng& rng) {
  std::vector<OrderSpec> out;
  for (std::size_t i = 0; i < 5; ++i) out.push_back(mo::gen::random_dense_order(rng, 2 + i % 3));
  for (std::size_t i = 0; i < 5; ++i) out.push_back(mo::gen::random_recursive_order(rng, 1 + i % 4));
  return out;
}

Outcome order_axioms() {
  Outcome out;
  mo::Rng rng(1);
  for (const auto& o : ten_orders(rng)) {
    const std::size_t m = o.rank();
    for (int s = 0; s < 1000; ++s) {
      const LatticeVector x = rng.lattice(m, 20), y = rng.lattice(m, 20), z = rng.lattice(m, 20);
      const LatticeVector g = rng.lattice(m, 1000);
      const bool xy = o.less(x, y), yx = o.less(y, x), eq = o.compare(x, y) == mo::Cmp::Equal;
      out.require(int(xy) + int(yx) + int(eq) == 1, "trichotomy at " + vec_str(x) + " " + vec_str(y));
      out.require(eq == (x == y), "equality disagrees with identity");
      out.require(xy == oracle_less(o, x, y), "compare disagrees with oracle at " + vec_str(x) + " " + vec_str(y));
      if (o.less(x, y) && o.less(y, z)) out.require(o.less(x, z), "transitivity");
      if (o.less(y, x) && o.less(x, z)) out.require(o.less(y, z), "transitivity");
      out.require(o.compare(x, y) == o.compare(x + g, y + g), "translation invariance");
    }
  }
  return out;
}

Outcome positive_cone() {
  Outcome out;
  mo::Rng rng(2);
  for (const auto& o : ten_orders(rng)) {
    const std::size_t m = o.rank();
    std::vector<LatticeVector> positives;
    for (int s = 0; s < 1000; ++s) {
      const LatticeVector g = rng.lattice(m, 20);
      const bool pos = mo::cone_membership(o, g) == mo::Cone::Positive;
      const bool neg = mo::cone_membership(o, -g) == mo::Cone::Positive;
      const bool zero = g.is_zero();
      out.require(int(pos) + int(neg) + int(zero) == 1, "condition (a) at " + vec_str(g));
      out.require(pos == (oracle_sign(o, g) > 0), "cone membership disagrees with oracle");
      if (pos) positives.push_back(g);
      if (neg) positives.push_back(-g);
    }
    for (int s = 0; s < 1000 && positives.size() >= 2; ++s) {
      const auto& p = positives[rng.index(positives.size())];
      const auto& q = positives[rng.index(positives.size())];
      out.require(oracle_sign(o, p + q) > 0 && mo::cone_membership(o, p + q) == mo::Cone::Positive,
                  "condition (b) at " + vec_str(p) + " + " + vec_str(q));
    }
    if (!o.is_dense()) continue;
    for (std::size_t s = 0; s < 100; ++s) {
      const auto& p = positives[s % positives.size()];
      const auto [q, r] = mo::cone_split(o, p, 16);
      out.require(q + r == p && oracle_sign(o, q) > 0 && oracle_sign(o, r) > 0,
                  "cone_split at " + vec_str(p));
    }
  }
  return out;
}

const std::vector<std::pair<std::size_t, std::size_t>> kShapes{{2, 1}, {3, 2}, {4, 3}};

Outcome extension_property() {
  Outcome out;
  for (const auto& [m, n] : kShapes) {
    const auto multi = generic(n);
    out.require(multi.rank() == m && multi.size() == n, "unexpected shape");
    for (std::size_t k = 1; k <= 4; ++k) {
      mo::ExtensionConfig cfg;
      cfg.seed = 100 * m + k;
      const auto rep = mo::extension_property_test(multi, k, 200, 20, cfg);
      out.require(rep.trials == 200 && rep.passed() && rep.witnesses_checked == 200,
                  "extension failure for m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
  }
  return out;
}

Outcome backend_equivalence() {
  Outcome out;
  mo::Rng rng(4);
  std::size_t nonempty = 0;
  for (const auto& [m, n] : kShapes) {
    const auto multi = generic(n);
    for (int t = 0; t < 100; ++t) {
      mo::IntervalConstraint cons;
      for (std::size_t i = 0; i < n; ++i) {
        LatticeVector a = rng.lattice(m, 10), b = rng.lattice(m, 10);
        while (a == b) b = rng.lattice(m, 10);
        if (multi[i].less(b, a)) std::swap(a, b);
        cons.push_back({a, b});
      }
      const auto brute = mo::witness_brute(multi, cons, 50);
      if (!brute.point) continue;
      ++nonempty;
      out.require(oracle_satisfies(multi, cons, *brute.point), "brute point invalid");
      const auto w = mo::witness(multi, cons);
      out.require(oracle_satisfies(multi, cons, w.point), "accelerated witness invalid");
    }
  }
  out.require(nonempty > 0, "no nonempty instances generated");
  if (out.ok) out.note = std::to_string(nonempty) + "/300 instances nonempty in box 50";
  return out;
}

// Each bounded interval dropped in turn, and the lemma tag swapped.
std::vector<mo::Certificate> tampered(const mo::Certificate& c) {
  std::vector<mo::Certificate> out;
  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    if (!c.constraints[i].lower && !c.constraints[i].upper) continue;
    out.push_back(c);
    out.back().constraints[i] = {};
  }
  out.push_back(c);
  out.back().tag = c.tag == mo::LemmaTag::SmallVolume ? mo::LemmaTag::Dependent : mo::LemmaTag::SmallVolume;
  return out;
}

Outcome refuter() {
  Outcome out;
  mo::Rng rng(5);
  const mo::VerifyConfig vcfg{.scan_box = 50, .box_point_cap = 200'000'000};
  std::size_t certs = 0;
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<mo::LemmaTag> paths{mo::LemmaTag::Dependent, mo::LemmaTag::RationalKernel};
    if (m == 1) paths = {mo::LemmaTag::DiscreteBase};
    if (m >= 2) paths.push_back(mo::LemmaTag::SmallVolume);
    for (auto tag : paths) {
      for (int t = 0; t < 20; ++t) {
        const auto orders = mo::gen::tuple_for(tag, m, rng);
        const auto cert = mo::refute(orders);
        const std::string where = std::string(mo::to_string(tag)) + " m=" + std::to_string(m);
        out.require(cert.tag == tag, "path mismatch for " + where);
        out.require(mo::verify_certificate(orders, cert, vcfg), "verification failed for " + where);
        const mo::MultiOrder multi(m, orders);
        out.require(!mo::witness_brute(multi, cert.constraints, 50).point, "brute witness for " + where);
        for (const auto& bad : tampered(cert)) {
          bool accepted = false;
          try {
            accepted = mo::verify_certificate(orders, bad, vcfg);
          } catch (const mo::MalformedInput&) {
          }
          out.require(!accepted, "tampered certificate accepted for " + where);
        }
        ++certs;
      }
    }
  }
  if (out.ok) out.note = std::to_string(certs) + " certificates";
  return out;
}

Outcome matrices() {
  Outcome out;
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto a = mo::build_order_matrix(m, seed);
      const std::string where = "m=" + std::to_string(m) + " seed=" + std::to_string(seed);
      out.require(mo::verify(a).all(), "verify fails for " + where);
      out.require(!leibniz_det(a.rows).is_zero(), "singular for " + where);
      for (std::size_t i = 0; i < m; ++i) {
        out.require(rational_rank_of_entries(a.rows[i]) == m, "row not Q-independent for " + where);
        if (i + 1 < m) {
          FieldScalar d(0);
          for (std::size_t j = 0; j < m; ++j) d = d + a.rows[i][j] * a.rows[m - 1][j];
          out.require(d.is_zero(), "last row not orthogonal for " + where);
        }
      }
    }
  }
  const auto a = mo::build_order_matrix(2, 0);
  const FieldScalar root2 = FieldScalar::sqrt_of(a.rows[0][1].basis(), 2);
  const auto same = [](const FieldScalar& x, const FieldScalar& y) { return (x - y).is_zero(); };
  out.require(same(a.rows[0][0], FieldScalar(1)) && same(a.rows[0][1], root2) &&
                  same(a.rows[1][0], -root2) && same(a.rows[1][1], FieldScalar(1)),
              "m=2 instance is not [[1, sqrt2], [-sqrt2, 1]]");
  return out;
}

Outcome age() {
  Outcome out;
  mo::Rng rng(7);
  const auto z3 = generic(2), z4 = generic(3);
  auto check = [&](const FiniteNOrder& s, const mo::MultiOrder& multi, const std::string& what) {
    const auto e = mo::embed(s, multi);
    out.require(oracle_embedding(s, multi, e.image), "embedding wrong for " + what);
    out.require(mo::induced(multi, e.image) == s.normalized(), "induced round trip for " + what);
  };
  std::vector<std::size_t> perm{1, 2, 3};
  std::size_t patterns = 0;
  do {
    const auto s = mo::from_pattern(perm);
    out.require(mo::pattern_of(s) == perm, "pattern round trip");
    check(s, z3, "pattern of size 3");
    ++patterns;
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.require(patterns == 6, "expected 6 patterns");
  for (int t = 0; t < 20; ++t) {
    const auto s = mo::gen::random_finite(rng, 5, 2);
    check(s, z3, "random 2-order");
    out.require(mo::from_pattern(mo::pattern_of(s)) == s.normalized(), "pattern of random 2-order");
    check(mo::gen::random_finite(rng, 4, 3), z4, "random 3-order");
  }
  return out;
}

Outcome amalgamation() {
  Outcome out;
  mo::Rng rng(8);
  const std::vector<mo::MultiOrder> gens{generic(1), generic(2), generic(3)};
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.index(3);
    const std::size_t ka = 1 + rng.index(4);
    const auto a = mo::gen::random_finite(rng, ka, n);
    const auto [b1, f1] = mo::gen::random_extension(rng, a, rng.index(7 - ka));
    const auto [b2, f2] = mo::gen::random_extension(rng, a, rng.index(7 - ka));
    const auto r = mo::amalgamate(a, b1, f1, b2, f2);
    const std::string where = "instance " + std::to_string(t);
    out.require(r.c.size() == b1.size() + b2.size() - a.size(), "size of amalgam, " + where);
    out.require(mo::is_label_embedding(b1, r.c, r.g1) && mo::is_label_embedding(b2, r.c, r.g2),
                "g1/g2 not embeddings, " + where);
    for (std::size_t x = 0; x < a.size(); ++x)
      out.require(r.g1[f1[x]] == r.g2[f2[x]], "square does not commute, " + where);
    std::vector<bool> hit(r.c.size(), false);
    for (std::size_t y : r.g1) hit[y] = true;
    std::size_t shared = 0;
    for (std::size_t y : r.g2) shared += hit[y];
    out.require(shared == a.size(), "amalgam identifies points outside A, " + where);
    const auto e = mo::embed(r.c, gens[n - 1]);
    out.require(oracle_embedding(r.c, gens[n - 1], e.image), "amalgam not in the age, " + where);
  }
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "order axioms", 10, order_axioms},
      {2, "positive cone", 30, positive_cone},
      {3, "extension property", 120, extension_property},
      {4, "backend equivalence", 120, backend_equivalence},
      {5, "refuter certificates", 300, refuter},
      {6, "order matrices", 60, matrices},
      {7, "age completeness", 120, age},
      {8, "strong amalgamation", 60, amalgamation},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_seconds) {
      o.ok = false;
      o.note = "over time limit of " + std::to_string(static_cast<int>(c.limit_seconds)) + " s";
    }
    failed += !o.ok;
    std::printf("%s criterion %d (%s) %.2fs%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.note.empty() ? "" : ": ", o.note.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
