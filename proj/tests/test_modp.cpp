#include <gtest/gtest.h>

#include <set>

#include "kloverify/modp.hpp"

using namespace klv;

namespace {

// independent Legendre evaluation: exhaust squares
std::set<i64> square_set(i64 p) {
  std::set<i64> s;
  for (i64 y = 1; y < p; ++y) s.insert(y * y % p);
  return s;
}

i64 pow_mod(i64 b, i64 e, i64 p) {
  i64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

TEST(PrimeContext, RejectsBadModuli) {
  for (i64 p : {0, 1, 2, 3, 4, 6, 9, 15, 91}) EXPECT_THROW(PrimeContext ctx(p), std::invalid_argument);
  EXPECT_NO_THROW(PrimeContext ctx(5));
  EXPECT_NO_THROW(PrimeContext ctx(9973));
}

TEST(PrimeContext, EllIsLegendreOfPModThree) {
  EXPECT_EQ(PrimeContext(7).ell(), 1);    // 7 = 1 mod 3
  EXPECT_EQ(PrimeContext(13).ell(), 1);
  EXPECT_EQ(PrimeContext(5).ell(), -1);   // 5 = 2 mod 3
  EXPECT_EQ(PrimeContext(11).ell(), -1);
}

TEST(Legendre, PinnedValues) {
  PrimeContext ctx(7);
  EXPECT_EQ(ctx.legendre(0), 0);
  EXPECT_EQ(ctx.legendre(1), 1);
  EXPECT_EQ(ctx.legendre(3), -1);  // squares mod 7 are {1,2,4}
  EXPECT_EQ(ctx.legendre(-4), -1); // -4 = 3 mod 7
  EXPECT_EQ(ctx.legendre(14), 0);
}

TEST(Legendre, MatchesEulerCriterionAndSquares) {
  for (i64 p : {5, 7, 11, 13, 31, 101}) {
    PrimeContext ctx(p);
    const auto squares = square_set(p);
    i64 qr_count = 0;
    for (i64 a = 0; a < p; ++a) {
      const int expect = a == 0 ? 0 : (squares.count(a) ? 1 : -1);
      EXPECT_EQ(ctx.legendre(a), expect) << "p=" << p << " a=" << a;
      const i64 euler = pow_mod(a, (p - 1) / 2, p);
      const int euler_sign = euler == 1 ? 1 : (euler == 0 ? 0 : -1);
      EXPECT_EQ(ctx.legendre(a), euler_sign);
      qr_count += ctx.is_qr(a) ? 1 : 0;
    }
    EXPECT_EQ(qr_count, (p - 1) / 2);
  }
}

TEST(Legendre, CompletelyMultiplicative) {
  for (i64 p : {5, 7, 13, 101}) {
    PrimeContext ctx(p);
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b) EXPECT_EQ(ctx.legendre(a) * ctx.legendre(b), ctx.legendre(a * b));
  }
}

TEST(Inverse, PinnedAndExhaustive) {
  EXPECT_EQ(PrimeContext(7).inv(1), 1);
  EXPECT_EQ(PrimeContext(7).inv(3), 5);  // 3*5 = 15 = 1 mod 7
  EXPECT_EQ(PrimeContext(5).inv(4), 4);  // 4*4 = 16 = 1 mod 5
  EXPECT_THROW(PrimeContext(7).inv(0), std::domain_error);
  EXPECT_THROW(PrimeContext(7).inv(14), std::domain_error);
  PrimeContext ctx(101);
  for (i64 x = 1; x < 101; ++x) EXPECT_EQ(ctx.mul(x, ctx.inv(x)), 1);
}

TEST(FPoly, PinnedValues) {
  PrimeContext p7(7), p13(13);
  EXPECT_EQ(f_poly(p7, 1, 0), 0);               // f_1 has no constant term
  EXPECT_EQ(f_poly(p7, 1, 1), p7.reduce(-3));   // f_1(1) = -3
  EXPECT_EQ(f_poly(p13, 9, 4), 0);              // f_9 = (x-4)(x-16)
  EXPECT_EQ(f_poly(p13, 9, 16 % 13), 0);
}

TEST(FPoly, SymmetricInArguments) {
  for (i64 p : {5, 7, 31, 101}) {
    PrimeContext ctx(p);
    for (i64 i = 1; i < p; ++i)
      for (i64 j = 1; j < p; ++j) EXPECT_EQ(f_poly(ctx, j, i), f_poly(ctx, i, j));
  }
}

TEST(FPoly, ShiftCompletesTheSquare) {
  // f_k(x + k + 1) = x^2 - 4k identically
  for (i64 p : {5, 7, 13, 61}) {
    PrimeContext ctx(p);
    for (i64 k = 1; k < p; ++k)
      for (i64 x = 0; x < p; ++x)
        EXPECT_EQ(f_poly(ctx, k, x + k + 1), ctx.reduce(x * x - 4 * k));
  }
}

TEST(GPoly, PinnedValues) {
  PrimeContext p5(5), p11(11), p13(13);
  EXPECT_EQ(g_poly(p5, 2, 0), 0);
  EXPECT_EQ(g_poly(p11, 1, 1), 0);   // 4 + (1-6-3) + 4 = 0
  EXPECT_EQ(g_poly(p13, 9, 1), 12);  // 36 + 24 + 4 = 64 = 12 mod 13
}

TEST(CharSums, LegendreSumIdentity) {
  for (i64 p : primes_in_range(5, 101)) {
    PrimeContext ctx(p);
    for (i64 k = 1; k < p; ++k) {
      const auto s = legendre_char_sums(ctx, k);
      EXPECT_EQ(s.s1, -1) << "p=" << p << " k=" << k;
      EXPECT_EQ(s.s2, p - 1 - ctx.legendre(k)) << "p=" << p << " k=" << k;
    }
  }
}

TEST(CharSums, PinnedValues) {
  PrimeContext p7(7), p11(11);
  EXPECT_EQ(legendre_char_sums(p7, 1).s1, -1);
  EXPECT_EQ(legendre_char_sums(p7, 1).s2, 5);
  EXPECT_EQ(legendre_char_sums(p11, 2).s2, 11);  // (2/11) = -1
}

TEST(Primes, RangeEnumeration) {
  EXPECT_EQ(primes_in_range(4, 10), (std::vector<i64>{5, 7}));
  EXPECT_EQ(primes_in_range(5, 5), (std::vector<i64>{5}));
  EXPECT_TRUE(primes_in_range(24, 28).empty());
  EXPECT_EQ(primes_in_range(2, 13).size(), 6u);
}
