#include <gtest/gtest.h>

#include "multiorder/exact_field.hpp"
#include "multiorder/linalg.hpp"
#include "generators.hpp"

namespace multiorder {
namespace {

using gen::random_scalar;
using testing::sign_by_squaring;
using gen::small_basis;

FieldScalar sq(long r) { return FieldScalar::sqrt_of(small_basis(), r); }

constexpr int kSamples = 300;

TEST(RadicalBasis, RejectsNonPrimesAndDisorder) {
  EXPECT_THROW(RadicalBasis({2, 4}), InvalidArgument);
  EXPECT_THROW(RadicalBasis({3, 2}), InvalidArgument);
  EXPECT_THROW(RadicalBasis({2, 2}), InvalidArgument);
  EXPECT_NO_THROW(RadicalBasis({2, 3, 5}));
}

TEST(RadicalBasis, RadicandMaskRoundTrip) {
  const auto& b = *small_basis();
  EXPECT_EQ(b.radicand(0b101), 10);
  EXPECT_EQ(b.mask_of(Integer(42)), Mask{0b1011});
  EXPECT_THROW(b.mask_of(Integer(4)), MalformedInput);
  EXPECT_THROW(b.mask_of(Integer(11)), MalformedInput);
}

TEST(FieldScalar, Add) {
  EXPECT_EQ((FieldScalar(1) + sq(2)) + (FieldScalar(2) - sq(2)), FieldScalar(3));
  const FieldScalar x = FieldScalar(3) + Rational(1, 2) * sq(5);
  EXPECT_EQ(x + FieldScalar(), x);
  const FieldScalar half6 = Rational(1, 2) * sq(6);
  const FieldScalar sum = half6 + half6;
  ASSERT_EQ(sum.terms().size(), 1u);
  EXPECT_EQ(sum.radicand(sum.terms()[0].mask), 6);
  EXPECT_EQ(sum.terms()[0].coeff, 1);
}

TEST(FieldScalar, Mul) {
  EXPECT_EQ(sq(2) * sq(3), sq(6));
  EXPECT_EQ(sq(2) * sq(2), FieldScalar(2));
  EXPECT_EQ((FieldScalar(1) + sq(2)) * (FieldScalar(1) - sq(2)), FieldScalar(-1));
  EXPECT_EQ(sq(6) * sq(10), FieldScalar(2) * sq(15));
}

TEST(FieldScalar, Sign) {
  EXPECT_EQ((FieldScalar(1) - sq(2)).sign(), -1);
  EXPECT_EQ(FieldScalar().sign(), 0);
  // 5 - 2 sqrt 6 > 0 because 25 > 24.
  const FieldScalar x = FieldScalar(5) - FieldScalar(2) * sq(6);
  EXPECT_EQ(sign_by_squaring(x), 1);
  EXPECT_EQ(x.sign(), 1);
}

TEST(FieldScalar, SignOfNearCancellationNeedsEscalation) {
  // (sqrt2 + sqrt3)^8 is within about 1e-9 of an integer.
  FieldScalar s = sq(2) + sq(3);
  FieldScalar p = s * s;
  p = p * p;
  p = p * p;  // 9409 + 3840 sqrt6 ... with tiny conjugate
  const FieldScalar conj = (sq(3) - sq(2));
  FieldScalar c = conj * conj;
  c = c * c;
  c = c * c;
  const FieldScalar rounded = p + c;  // an integer
  ASSERT_TRUE(rounded.is_rational());
  const FieldScalar delta = p - rounded;  // = -c, about -1e-8
  EXPECT_EQ(delta.sign(), -1);
  EXPECT_EQ(sign_by_squaring(delta), -1);
}

TEST(FieldScalar, PrecisionCapIsEnforced) {
  const unsigned old = precision_cap();
  EXPECT_THROW(set_precision_cap(10), InvalidArgument);
  set_precision_cap(64);
  // Separating this from zero needs more than 64 bits.
  FieldScalar tiny = sq(3) - sq(2);
  for (int i = 0; i < 6; ++i) tiny = tiny * tiny;
  EXPECT_THROW(tiny.sign(), PrecisionCapExceeded);
  set_precision_cap(old);
  EXPECT_EQ(tiny.sign(), 1);
}

TEST(FieldScalar, BasisMismatch) {
  auto b1 = std::make_shared<const RadicalBasis>(std::vector<std::uint64_t>{2});
  auto b2 = std::make_shared<const RadicalBasis>(std::vector<std::uint64_t>{3});
  const FieldScalar x = FieldScalar::sqrt_of(b1, 2);
  const FieldScalar y = FieldScalar::sqrt_of(b2, 3);
  EXPECT_THROW(x + y, BasisMismatch);
  EXPECT_THROW(x * y, BasisMismatch);
  EXPECT_NO_THROW(x + FieldScalar(7));
  std::vector<FieldScalar> both{x, y};
  auto u = unify(both);
  EXPECT_EQ((u[0] * u[1]).to_string(), "sqrt(6)");
}

TEST(FieldScalar, Inverse) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis());
    if (a.is_zero()) {
      EXPECT_THROW(a.inverse(), DivisionByZero);
      continue;
    }
    EXPECT_EQ(a * a.inverse(), FieldScalar(1));
  }
}

TEST(FieldScalar, QLinearIndependence) {
  EXPECT_TRUE(q_linear_independent({FieldScalar(1), sq(2)}));
  EXPECT_FALSE(q_linear_independent({FieldScalar(1), sq(2), FieldScalar(1) + sq(2)}));
  // Coefficient matrix of sqrt2, sqrt3, sqrt6 is the 3x3 identity.
  EXPECT_TRUE(q_linear_independent({sq(2), sq(3), sq(6)}));
  EXPECT_FALSE(q_linear_independent({FieldScalar(2), FieldScalar(3)}));
  EXPECT_FALSE(q_linear_independent({FieldScalar(0), sq(2)}));
}

TEST(FieldScalarProperties, SignMatchesSquaringOracle) {
  Rng rng(1);
  for (int i = 0; i < kSamples; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis(), 6);
    EXPECT_EQ(a.sign(), sign_by_squaring(a)) << a;
  }
}

TEST(FieldScalarProperties, SignIsMultiplicative) {
  Rng rng(2);
  for (int i = 0; i < kSamples; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis());
    const FieldScalar b = random_scalar(rng, small_basis());
    EXPECT_EQ(a.sign() * b.sign(), (a * b).sign()) << a << " ; " << b;
  }
}

TEST(FieldScalarProperties, ZeroIffSignZeroIffNoTerms) {
  Rng rng(3);
  for (int i = 0; i < kSamples; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis(), 3, 2);
    EXPECT_EQ(a.is_zero(), a.sign() == 0);
    EXPECT_EQ(a.is_zero(), a.terms().empty());
    EXPECT_TRUE((a - a).terms().empty());
  }
}

TEST(FieldScalarProperties, RingLaws) {
  Rng rng(4);
  for (int i = 0; i < kSamples; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis());
    const FieldScalar b = random_scalar(rng, small_basis());
    const FieldScalar c = random_scalar(rng, small_basis());
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(FieldScalarProperties, SignAgreesWith256BitEnclosure) {
  Rng rng(5);
  for (int i = 0; i < kSamples; ++i) {
    const FieldScalar a = random_scalar(rng, small_basis());
    if (a.is_zero()) continue;
    const int s = a.sign_at_precision(256);
    if (s != 0) {
      EXPECT_EQ(s, a.sign());
    }
  }
}

TEST(Linalg, DeterminantsAgree) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    Matrix<FieldScalar> a(n, std::vector<FieldScalar>(n));
    for (auto& row : a)
      for (auto& x : row) x = random_scalar(rng, small_basis(), 2, 3);
    EXPECT_EQ(determinant_bareiss(a), determinant_cofactor(a));
  }
}

TEST(Linalg, SolveInSpanAndInverse) {
  const std::vector<std::vector<FieldScalar>> vecs{{FieldScalar(1), sq(2)}, {sq(3), FieldScalar(1)}};
  const std::vector<FieldScalar> target{FieldScalar(1) + FieldScalar(2) * sq(3),
                                        sq(2) + FieldScalar(2)};
  auto sol = solve_in_span(vecs, target);
  ASSERT_TRUE(sol);
  EXPECT_EQ((*sol)[0], FieldScalar(1));
  EXPECT_EQ((*sol)[1], FieldScalar(2));
  const std::vector<std::vector<FieldScalar>> one{{FieldScalar(1), sq(2)}};
  EXPECT_FALSE(solve_in_span(one, std::vector<FieldScalar>{FieldScalar(1), FieldScalar(1)}));
  Matrix<FieldScalar> m{{FieldScalar(1), sq(2)}, {-sq(2), FieldScalar(1)}};
  auto inv = inverse(m);
  EXPECT_EQ(inv[0][0] * m[0][0] + inv[0][1] * m[1][0], FieldScalar(1));
  EXPECT_EQ(inv[0][0] * m[0][1] + inv[0][1] * m[1][1], FieldScalar(0));
}

}  // namespace
}  // namespace multiorder
