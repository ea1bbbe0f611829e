#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hypergauss/explog.hpp"
#include "test_util.hpp"

using namespace hypergauss;
using hgtest::ccd;
using hgtest::rand_ccd;

namespace {

CCDNumber scaled_random(int level, std::mt19937_64& rng, double max_norm) {
  CCDNumber z = rand_ccd(level, rng);
  std::uniform_real_distribution<double> u(0.0, max_norm);
  z *= u(rng) / ccd_norm(z);
  return z;
}

}  // namespace

TEST(ExpL, ZeroAndScalars) {
  EXPECT_EQ(exp_l_closed(CCDNumber(2)), CCDNumber::scalar(2, 1.0));
  const CCDNumber e1 = exp_l_closed(CCDNumber::scalar(2, 1.0));
  EXPECT_NEAR(e1.real(), std::exp(1.0), 1e-15);
  // exp(I pi) = -1
  const CCDNumber ipi = exp_l_closed(CCDNumber::scalar(3, {0.0, std::numbers::pi}));
  EXPECT_NEAR(ipi.re()[0], -1.0, 1e-15);
  EXPECT_NEAR(ipi.im()[0], 0.0, 1e-15);
}

TEST(ExpL, PureImaginaryUnitGivesEuler) {
  // exp(theta i1) = cos theta + i1 sin theta
  for (double th : {0.1, 1.0, 2.5, -4.0}) {
    const CCDNumber z = exp_l_closed(ccd(2, {{1, th}}));
    EXPECT_NEAR(z.re()[0], std::cos(th), 1e-15);
    EXPECT_NEAR(z.re()[1], std::sin(th), 1e-15);
    EXPECT_NEAR(z.abs2(), 1.0, 1e-14);
  }
}

TEST(ExpL, DecompositionReassembles) {
  std::mt19937_64 rng(3);
  for (int r = 0; r <= 5; ++r)
    for (int t = 0; t < 20; ++t) {
      const CCDNumber z = rand_ccd(r, rng);
      const ExpDecomposition d = decompose(z);
      CCDNumber back = d.w();
      back.re()[0] += d.u0;
      back.im()[0] += d.v0;
      EXPECT_EQ(back, z);
      // w^2 is the central scalar w2
      const CCDNumber w2 = ccd_mul(d.w(), d.w());
      EXPECT_NEAR(w2.re()[0], d.w2.real(), 1e-12);
      EXPECT_NEAR(w2.im()[0], d.w2.imag(), 1e-12);
      CCDNumber rest = w2;
      rest.re()[0] = 0.0;
      rest.im()[0] = 0.0;
      EXPECT_LE(ccd_norm(rest), 1e-12);
      EXPECT_LE(std::abs(d.nu * d.nu + d.w2), 1e-12 * (1 + std::abs(d.w2)));
      EXPECT_GE(d.nu.real(), 0.0);
    }
}

TEST(ExpL, ClosedFormMatchesSeries) {
  std::mt19937_64 rng(7);
  for (int r = 0; r <= 4; ++r)
    for (int t = 0; t < 200; ++t) {
      const CCDNumber z = scaled_random(r, rng, 3.0);
      const CCDNumber a = exp_l_closed(z);
      const SeriesResult s = exp_l_series(z, 60);
      EXPECT_LE(ccd_norm(a - s.value), 1e-10 * ccd_norm(s.value));
    }
}

TEST(ExpL, SeriesUsesLeftOrderedPowers) {
  // for level >= 4 power associativity still makes z (z z) = (z z) z, but the
  // series must use z * (previous power); compare against an explicit loop
  std::mt19937_64 rng(9);
  const CCDNumber z = scaled_random(4, rng, 1.0);
  CCDNumber sum = CCDNumber::scalar(4, 1.0), power = CCDNumber::scalar(4, 1.0);
  for (int n = 1; n <= 30; ++n) {
    power = ccd_mul(z, power) * (1.0 / n);
    sum += power;
  }
  EXPECT_LE(ccd_norm(sum - exp_l_series(z, 30).value), 1e-14);
}

TEST(ExpL, SeriesTailBoundDominatesError) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const CCDNumber z = scaled_random(3, rng, 4.0);
    const CCDNumber exact = exp_l_closed(z);
    for (int terms : {3, 6, 10}) {
      const SeriesResult s = exp_l_series(z, terms);
      EXPECT_LE(s.terms_used, terms);  // stops once the tail is below rounding
      // componentwise ||z^n|| <= ||z||^n / sqrt(2)^(n-1) <= ||z||^n
      EXPECT_LE(ccd_norm(exact - s.value), s.tail_bound + 1e-12);
    }
  }
  EXPECT_THROW(exp_l_series(CCDNumber(2), 0), InvalidInput);
}

TEST(ExpL, NormBoundBySeriesDomination) {
  // ||exp_l(z)|| <= ||1|| + sum ||z||^n / n! = sqrt(2) - 1 + exp(||z||)
  std::mt19937_64 rng(15);
  for (int r = 0; r <= 4; ++r)
    for (int t = 0; t < 200; ++t) {
      const CCDNumber z = scaled_random(r, rng, 5.0);
      EXPECT_LE(ccd_norm(exp_l_closed(z)), std::sqrt(2.0) - 1.0 + std::exp(ccd_norm(z)) + 1e-12);
    }
}

TEST(ExpL, CharacterLaw) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int r = 0; r <= 4; ++r)
    for (int k = 0; k < 100; ++k) {
      const CCDNumber z = scaled_random(r, rng, 3.0);
      const double t = u(rng), s = u(rng);
      const CCDNumber lhs = character(z, t + s);
      const CCDNumber rhs = ccd_mul(character(z, t), character(z, s));
      EXPECT_LE(ccd_norm(lhs - rhs), 1e-10 * std::max(1.0, ccd_norm(lhs)));
    }
}

TEST(ExpL, DerivativeLaw) {
  std::mt19937_64 rng(21);
  const double h = 1e-5;
  for (int r = 0; r <= 4; ++r)
    for (int k = 0; k < 50; ++k) {
      const CCDNumber z = scaled_random(r, rng, 2.0);
      for (double t : {-0.5, 0.0, 0.8}) {
        const CCDNumber fd = (character(z, t + h) - character(z, t - h)) * (1.0 / (2 * h));
        EXPECT_LE(ccd_norm(fd - ddt_exp_l(z, t)), 1e-8 * std::max(1.0, ccd_norm(ddt_exp_l(z, t))));
      }
    }
}

TEST(ExpL, SmallNuUsesTaylorBranchContinuously) {
  // nu just below and above the Taylor switch
  for (double eps : {1e-9, 5e-7, 2e-6, 1e-4}) {
    const CCDNumber z = ccd(3, {{0, -0.3}, {2, eps}});
    const CCDNumber a = exp_l_closed(z);
    const CCDNumber b = exp_l_series(z, 60).value;
    EXPECT_LE(ccd_norm(a - b), 1e-15);
  }
  // w nonzero but w^2 = 0 (nilpotent direction): u' and v' orthogonal, equal length
  const CCDNumber nil = ccd(2, {{1, 1.0}}, {{2, 1.0}});
  EXPECT_EQ(decompose(nil).nu, std::complex<double>(0.0, 0.0));
  EXPECT_LE(ccd_norm(exp_l_closed(nil) - exp_l_series(nil, 60).value), 1e-14);
}

TEST(ExpL, LargeArgumentsStayFinite) {
  // exp(u0 t) underflows while cosh(Im(t nu)) overflows if evaluated separately
  CCDNumber z = ccd(2, {{0, -800.0}}, {{1, 600.0}});
  const CCDNumber v = exp_l_closed(z);
  for (double c : v.re().coeffs()) EXPECT_TRUE(std::isfinite(c));
  for (double c : v.im().coeffs()) EXPECT_TRUE(std::isfinite(c));
  EXPECT_LE(v.abs2(), 1e-100);
}

TEST(ExpL, SincTaylor) {
  EXPECT_EQ(sinc(0.0), 1.0);
  for (double x : {1e-8, 1e-7, 9e-7}) EXPECT_NEAR(sinc(x).real(), std::sin(x) / x, 1e-16);
  EXPECT_NEAR(sinc(2.0).real(), std::sin(2.0) / 2.0, 1e-16);
}
