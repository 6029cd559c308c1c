#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "kloverify/cyclotomic.hpp"

using namespace klv;

namespace {

CycInt random_element(i64 p, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> coeff(-5, 5);
  std::vector<BigInt> counts(static_cast<std::size_t>(p));
  for (auto& c : counts) c = coeff(rng);
  return CycInt::from_exponents(p, counts);
}

}  // namespace

TEST(CycInt, AdditiveIdentityAndReduction) {
  const i64 p = 7;
  EXPECT_EQ(CycInt::zeta_power(p, 1) + CycInt(p), CycInt::zeta_power(p, 1));
  // zeta^{p-1} reduces to -(1 + zeta + ... + zeta^{p-2})
  const CycInt top = CycInt::zeta_power(p, p - 1);
  for (const auto& c : top.coeffs()) EXPECT_EQ(c, BigInt(-1));
  // (1 + zeta) + (1 - zeta) = 2
  const CycInt two =
      (CycInt::integer(p, 1) + CycInt::zeta_power(p, 1)) + (CycInt::integer(p, 1) - CycInt::zeta_power(p, 1));
  EXPECT_EQ(two.rational_value(), BigInt(2));
}

TEST(CycInt, MultiplicationReduces) {
  const i64 p = 11;
  // zeta * zeta^{p-1} = zeta^p = 1
  EXPECT_EQ((CycInt::zeta_power(p, 1) * CycInt::zeta_power(p, p - 1)).rational_value(), BigInt(1));
  // (zeta + ... + zeta^{p-1})^2 = (-1)^2 = 1
  CycInt full(p);
  for (i64 e = 1; e < p; ++e) full += CycInt::zeta_power(p, e);
  EXPECT_EQ((full * full).rational_value(), BigInt(1));
}

TEST(CycInt, MismatchedModuliRejected) {
  CycInt a(5), b(7);
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(a * b, std::invalid_argument);
}

TEST(CycInt, RationalDetection) {
  const i64 p = 7;
  EXPECT_TRUE(CycInt::integer(p, 42).is_rational_integer());
  EXPECT_FALSE(CycInt::zeta_power(p, 2).is_rational_integer());
  EXPECT_THROW(CycInt::zeta_power(p, 2).rational_value(), not_rational_integer);
}

TEST(CycInt, RingAxiomsRandomized) {
  std::mt19937_64 rng(1729);
  for (i64 p : {7, 13}) {
    for (int round = 0; round < 20; ++round) {
      const CycInt a = random_element(p, rng), b = random_element(p, rng), c = random_element(p, rng);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
    }
  }
}

TEST(Kloosterman, ExactValueAtFive) {
  PrimeContext ctx(5);
  const CycInt k1 = kloosterman_cyc(ctx, 1);
  // exponents of x + x^{-1} for x = 1..4 are {2, 0, 0, 3}
  EXPECT_EQ(k1.coeffs()[0], BigInt(2));
  EXPECT_EQ(k1.coeffs()[1], BigInt(0));
  EXPECT_EQ(k1.coeffs()[2], BigInt(1));
  EXPECT_EQ(k1.coeffs()[3], BigInt(1));
  // embeds to 2 + 2 cos(4 pi / 5)
  const double expect = 2.0 + 2.0 * std::cos(4.0 * kPi / 5.0);
  EXPECT_NEAR(k1.embed().real(), expect, 1e-12);
  EXPECT_NEAR(k1.embed().real(), 0.3819660113, 1e-9);
  EXPECT_NEAR(k1.embed().imag(), 0.0, 1e-12);
  // K_1^2 ~ 0.1459 under the numeric embedding
  EXPECT_NEAR((k1 * k1).embed().real(), 0.3819660113 * 0.3819660113, 1e-9);
  EXPECT_THROW(kloosterman_cyc(ctx, 0), std::domain_error);
  EXPECT_THROW(kloosterman_cyc(ctx, 10), std::domain_error);
}

TEST(Kloosterman, TwistReducesToFirstArgument) {
  // K(a, b) = K(1, ab) whenever p does not divide a
  PrimeContext ctx(11);
  for (i64 a = 1; a < 11; ++a)
    for (i64 b = 1; b < 11; ++b) EXPECT_EQ(kloosterman_cyc_ab(ctx, a, b), kloosterman_cyc(ctx, a * b));
}

TEST(Kloosterman, FixedByComplexConjugation) {
  PrimeContext ctx(13);
  for (i64 u = 1; u < 13; ++u) {
    const CycInt k = kloosterman_cyc(ctx, u);
    EXPECT_EQ(k.galois(12), k);  // zeta -> zeta^{-1}
  }
}

TEST(MomentOracle, FirstMomentIsOne) {
  for (i64 p : {5, 7, 11, 13, 31}) {
    PrimeContext ctx(p);
    EXPECT_EQ(moment_oracle(ctx, 1), BigInt(1));
  }
}

TEST(MomentOracle, PinnedSmallValues) {
  PrimeContext p7(7), p5(5);
  EXPECT_EQ(moment_oracle(p7, 2), BigInt(41));   // p^2 - p - 1
  EXPECT_EQ(moment_oracle(p7, 3), BigInt(64));   // (p/3)p^2 + 2p + 1 with (7/3) = 1
  EXPECT_EQ(moment_oracle(p5, 4), BigInt(159));  // 2p^3 - 3p^2 - 3p - 1
}

TEST(MomentOracle, ClosedFormsThroughFour) {
  for (i64 p : primes_in_range(5, 101)) {
    PrimeContext ctx(p);
    const auto v = moment_oracle_range(ctx, 4);
    const BigInt bp = p;
    const int ell = ctx.ell();
    EXPECT_EQ(v[0], BigInt(1));
    EXPECT_EQ(v[1], bp * bp - bp - 1);
    EXPECT_EQ(v[2], ell * bp * bp + 2 * bp + 1);
    EXPECT_EQ(v[3], 2 * bp * bp * bp - 3 * bp * bp - 3 * bp - 1);
  }
}

TEST(MixedOracle, SecondAndThirdMoments) {
  PrimeContext ctx(7);
  const BigInt p2 = 49;
  for (i64 a = 2; a <= 6; ++a) EXPECT_EQ(mixed_moment_oracle(ctx, {a}), BigInt(-7));
  EXPECT_EQ(mixed_moment_oracle(ctx, {1}), p2 - 7);  // the a = 1 case is V_2 + K_0^2
  for (i64 a = 1; a <= 6; ++a)
    for (i64 b = 1; b <= 6; ++b)
      EXPECT_EQ(mixed_moment_oracle(ctx, {a, b}), BigInt(ctx.legendre(f_poly(ctx, a, b))) * p2 + 14);
}

TEST(MixedOracle, EmptyListIsFirstMoment) {
  PrimeContext ctx(5);
  EXPECT_EQ(mixed_moment_oracle(ctx, {}), BigInt(1));
}

TEST(MixedOracle, RejectsZeroMultiplier) {
  PrimeContext ctx(7);
  EXPECT_THROW(mixed_moment_oracle(ctx, {0}), std::domain_error);
  EXPECT_THROW(mixed_moment_oracle(ctx, {7}), std::domain_error);
}
