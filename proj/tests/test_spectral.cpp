#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypergauss/spectral.hpp"
#include "test_util.hpp"

using namespace hypergauss;
using hgtest::ccd;
using hgtest::one_block;
using hgtest::real;

namespace {

double max_abs(const Matrix& m) { return m.max_abs(); }

double determinant(Matrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

}  // namespace

TEST(Diagonalize, Identity) {
  const Eigensystem es = diagonalize(Matrix::identity(3));
  for (double l : es.lambdas) EXPECT_DOUBLE_EQ(l, 1.0);
  EXPECT_LE(max_abs(es.q * es.q.transposed() - Matrix::identity(3)), 1e-15);
}

TEST(Diagonalize, TwoByTwoByHand) {
  // det(B - l) = (2 - l)^2 - 1 -> l = 1, 3
  const Eigensystem es = diagonalize(Matrix(2, 2, {2, 1, 1, 2}));
  EXPECT_NEAR(es.lambdas[0], 1.0, 1e-14);
  EXPECT_NEAR(es.lambdas[1], 3.0, 1e-14);
  EXPECT_NEAR(std::abs(es.q(0, 0)), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(es.q(0, 0) * es.q(0, 1), -0.5, 1e-14);  // eigenvector (1, -1)/sqrt(2)
}

TEST(Diagonalize, RandomSpdReconstruction) {
  std::mt19937_64 rng(101);
  for (std::size_t m : {1u, 2u, 3u, 5u, 8u})
    for (int t = 0; t < 20; ++t) {
      const Matrix b = hgtest::random_spd(m, rng);
      const Eigensystem es = diagonalize(b);
      const Matrix lam = es.q * b * es.q.transposed();
      EXPECT_LE(max_abs(lam - Matrix::diagonal(es.lambdas)), 1e-10 * b.max_abs());
      EXPECT_LE(max_abs(es.q * es.q.transposed() - Matrix::identity(m)), 1e-12);
      EXPECT_TRUE(std::is_sorted(es.lambdas.begin(), es.lambdas.end()));
      double trace = 0.0, sum = 0.0, prod = 1.0;
      for (std::size_t k = 0; k < m; ++k) trace += b(k, k);
      for (double l : es.lambdas) {
        sum += l;
        prod *= l;
        EXPECT_GT(l, 0.0);
      }
      EXPECT_NEAR(sum, trace, 1e-10 * std::max(1.0, trace));
      const double det = determinant(b);
      EXPECT_NEAR(prod, det, 1e-8 * std::abs(det));
    }
}

TEST(Diagonalize, RejectsAsymmetric) {
  EXPECT_THROW(diagonalize(Matrix(2, 2, {1, 0.5, 0.4, 1})), InvalidInput);
  EXPECT_THROW(diagonalize(Matrix(2, 3)), InvalidInput);
}

TEST(QuadForm, Examples) {
  const auto blk1 = one_block(2, real(2, 1.0), Matrix::identity(2)).blocks[0];
  const double e1[] = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(quad_form(blk1, e1), 1.0);
  const auto blk2 = one_block(2, real(2, 1.0), Matrix::diagonal(std::vector<double>{2, 3})).blocks[0];
  const double ones[] = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(quad_form(blk2, ones), 5.0);
  const double zero[] = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(quad_form(blk2, zero), 0.0);
  const double three[] = {1.0, 1.0, 1.0};
  EXPECT_THROW(quad_form(blk2, three), InvalidInput);
}

TEST(Validate, NamesOffendingBlockAndEigenvalue) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(1));
  s.blocks.push_back(BlockSpec{real(2, 1.0), Matrix(2, 2, {1, 2, 2, 1}), {CCDNumber(2), CCDNumber(2)}});
  s.p.assign(3, CCDNumber(2));
  try {
    validate(s);
    FAIL() << "non-SPD B accepted";
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("block 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("eigenvalue -"), std::string::npos) << msg;
  }
}

TEST(Validate, StructuralErrors) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(2));
  s.p.pop_back();
  EXPECT_THROW(validate(s), InvalidInput);
  MeasureSpec z = one_block(2, CCDNumber(2), Matrix::identity(1));
  EXPECT_THROW(validate(z), InvalidInput);  // a = 0
  MeasureSpec lv = one_block(2, real(3, 1.0), Matrix::identity(1));
  EXPECT_THROW(validate(lv), InvalidInput);
  MeasureSpec asym = one_block(2, real(2, 1.0), Matrix(2, 2, {1, 0.1, 0.2, 1}));
  EXPECT_THROW(validate(asym), InvalidInput);
  MeasureSpec empty;
  EXPECT_THROW(validate(empty), InvalidInput);
}

TEST(Spec, OffsetsAndBlocks) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(2));
  s.blocks.push_back(BlockSpec{real(2, 2.0), Matrix::identity(3), std::vector<CCDNumber>(3, CCDNumber(2))});
  s.p.assign(5, CCDNumber(2));
  EXPECT_EQ(s.n(), 5u);
  EXPECT_EQ(s.offsets(), (std::vector<std::size_t>{0, 2, 5}));
  EXPECT_EQ(s.block_of(1), 0u);
  EXPECT_EQ(s.block_of(2), 1u);
  EXPECT_THROW(s.block_of(5), InvalidInput);
  EXPECT_EQ(s.drift().size(), 5u);
}

TEST(Alpha, RealCoefficientPasses) {
  const auto r = check_alpha(one_block(2, real(2, 1.0), Matrix::identity(1)));
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].q, std::complex<double>(0.0, 0.0));
  EXPECT_EQ(r.blocks[0].phi, 0.0);
  EXPECT_DOUBLE_EQ(r.blocks[0].margin, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.blocks[0].boundary);
}

TEST(Alpha, CentralUnitFailsOnBoundary) {
  const auto r = check_alpha(one_block(2, CCDNumber::unit_i(2), Matrix::identity(1)));
  EXPECT_EQ(r.blocks[0].margin, 0.0);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.blocks[0].boundary);
}

TEST(Alpha, ComplexifiedExample) {
  const auto r = check_alpha(one_block(2, hgtest::complexified(), Matrix::identity(1)));
  EXPECT_NEAR(r.blocks[0].q.real(), 0.0, 1e-15);
  EXPECT_NEAR(r.blocks[0].q.imag(), 1.0, 1e-15);
  EXPECT_NEAR(r.blocks[0].phi, std::numbers::pi / 2, 1e-15);
  EXPECT_DOUBLE_EQ(r.blocks[0].re_a0, 2.0);
  EXPECT_NEAR(r.blocks[0].margin, 1.0, 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(Alpha, OverallPassNeedsEveryBlock) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(1));
  s.blocks.push_back(BlockSpec{CCDNumber::unit_i(2), Matrix::identity(1), {CCDNumber(2)}});
  s.p.assign(2, CCDNumber(2));
  const auto r = check_alpha(s);
  EXPECT_TRUE(r.blocks[0].pass);
  EXPECT_FALSE(r.blocks[1].pass);
  EXPECT_FALSE(r.pass);
}

TEST(Alpha, InvariantUnderPositiveScaling) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> c(0.01, 50.0);
  int passes = 0, fails = 0;
  for (int t = 0; t < 500; ++t) {
    const CCDNumber a = hgtest::rand_ccd(3, rng);
    const auto base = check_alpha(one_block(3, a, Matrix::identity(1)));
    if (std::abs(base.blocks[0].margin) < 1e-9) continue;
    const double k = c(rng);
    const auto scaled = check_alpha(one_block(3, a * k, Matrix::identity(1)));
    EXPECT_EQ(base.pass, scaled.pass);
    EXPECT_NEAR(std::abs(scaled.blocks[0].q), k * std::abs(base.blocks[0].q), 1e-10 * k * (1 + std::abs(base.blocks[0].q)));
    (base.pass ? passes : fails)++;
  }
  EXPECT_GT(passes, 0);
  EXPECT_GT(fails, 0);
}

TEST(Alpha, DriftOrthogonalityIsReported) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(2), {ccd(2, {{1, 1.0}}), ccd(2, {{2, 1.0}})});
  EXPECT_TRUE(check_alpha(s).drift_orthogonal);
  s.blocks[0].psi[1] = ccd(2, {{1, 2.0}});
  EXPECT_FALSE(check_alpha(s).drift_orthogonal);
}

TEST(Alpha, ShiftFromDrift) {
  MeasureSpec s = one_block(2, real(2, 1.0), Matrix::identity(2), {ccd(2, {{1, 1.0}}), ccd(2, {{0, 0.5}})});
  const MeasureSpec p = shift_from_drift(s);
  EXPECT_EQ(p.p[0], ccd(2, {{1, -1.0}}));
  EXPECT_EQ(p.p[1], ccd(2, {{0, -0.5}}));
  for (const auto& psi : p.blocks[0].psi) EXPECT_TRUE(psi.is_zero());
}
