#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hypergauss/cylinder.hpp"
#include "test_util.hpp"

using namespace hypergauss;
using hgtest::ccd;
using hgtest::one_block;
using hgtest::real;

namespace {

DiscreteMeasure atoms(int level, std::vector<std::vector<double>> pts, std::vector<CCDNumber> w) {
  return DiscreteMeasure{level, std::move(pts), std::move(w)};
}

DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t count) {
  std::uniform_int_distribution<int> pick(-2, 2);
  DiscreteMeasure mu{2, {}, {}};
  for (std::size_t k = 0; k < count; ++k) {
    mu.support.push_back({static_cast<double>(pick(rng)), static_cast<double>(pick(rng))});
    mu.weights.push_back(hgtest::rand_ccd(2, rng));
  }
  return mu;
}

// three coordinates: a 2x2 complexified block and a scalar block
MeasureSpec base_spec() {
  MeasureSpec s;
  s.level = 2;
  s.blocks.push_back(BlockSpec{ccd(2, {{0, 1.0}}, {{1, 0.5}}), Matrix(2, 2, {2, 1, 1, 2}),
                               {ccd(2, {{1, 0.3}}), CCDNumber(2)}});
  s.blocks.push_back(BlockSpec{real(2, 1.0), Matrix(1, 1, {1.0}), {real(2, 0.2)}});
  s.p = {real(2, 0.5), ccd(2, {{2, 1.0}}), ccd(2, {}, {{0, 0.25}})};
  return s;
}

}  // namespace

TEST(Variation, Examples) {
  EXPECT_DOUBLE_EQ(variation(atoms(2, {{0.0}}, {real(2, 1.0)})), 1.0);
  EXPECT_DOUBLE_EQ(variation(atoms(2, {{0.0}}, {ccd(2, {{1, 1.0}}, {{1, -1.0}})})), 2.0);
  EXPECT_DOUBLE_EQ(variation(atoms(2, {{0.0}, {1.0}}, {real(2, 1.0), real(2, -1.0)})), 2.0);
  // atoms at one point cancel
  EXPECT_DOUBLE_EQ(variation(atoms(2, {{0.0}, {0.0}}, {real(2, 1.0), real(2, -1.0)})), 0.0);
  EXPECT_DOUBLE_EQ(variation(DiscreteMeasure{}), 0.0);
}

TEST(Variation, IsANorm) {
  std::mt19937_64 rng(501);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    const DiscreteMeasure mu = random_measure(rng, 5), nu = random_measure(rng, 5);
    DiscreteMeasure sum = mu;
    sum.support.insert(sum.support.end(), nu.support.begin(), nu.support.end());
    sum.weights.insert(sum.weights.end(), nu.weights.begin(), nu.weights.end());
    EXPECT_LE(variation(sum), variation(mu) + variation(nu) + 1e-12);
    const double c = g(rng);
    DiscreteMeasure scaled = mu;
    for (auto& w : scaled.weights) w *= c;
    EXPECT_NEAR(variation(scaled), std::abs(c) * variation(mu), 1e-12 * (1 + variation(mu)));
  }
}

TEST(Variation, RejectsMalformed) {
  EXPECT_THROW(variation(atoms(2, {{0.0}}, {})), InvalidInput);
  EXPECT_THROW(variation(atoms(2, {{0.0}, {0.0, 1.0}}, {real(2, 1.0), real(2, 1.0)})), InvalidInput);
  EXPECT_THROW(variation(atoms(2, {{0.0}}, {real(3, 1.0)})), InvalidInput);
}

TEST(Pushforward, MergesAtoms) {
  const DiscreteMeasure mu = atoms(2, {{0, 1}, {0, 2}, {1, 1}}, {real(2, 0.25), real(2, 0.25), real(2, 0.5)});
  const std::size_t first[] = {0};
  const DiscreteMeasure p = pushforward(mu, first);
  ASSERT_EQ(p.support.size(), 2u);
  EXPECT_EQ(p.weights[0], real(2, 0.5));
  EXPECT_EQ(p.weights[1], real(2, 0.5));
  EXPECT_EQ(p.total(), mu.total());
  const std::size_t bad[] = {2};
  EXPECT_THROW(pushforward(mu, bad), InvalidInput);
}

TEST(Marginal, FullSubsetIsIdentity) {
  const MeasureSpec s = base_spec();
  const std::size_t all[] = {0, 1, 2};
  const MeasureSpec m = marginal(s, all);
  ASSERT_EQ(m.blocks.size(), 2u);
  EXPECT_EQ(m.blocks[0].b, s.blocks[0].b);
  EXPECT_EQ(m.blocks[0].a, s.blocks[0].a);
  EXPECT_EQ(m.blocks[0].psi, s.blocks[0].psi);
  EXPECT_EQ(m.p, s.p);
}

TEST(Marginal, PrincipalSubmatrixAndFunctionalIdentity) {
  const MeasureSpec s = one_block(2, real(2, 1.0), Matrix::diagonal(std::vector<double>{2, 3}));
  const std::size_t first[] = {0};
  const MeasureSpec m = marginal(s, first);
  ASSERT_EQ(m.n(), 1u);
  EXPECT_EQ(m.blocks[0].b, Matrix(1, 1, {2.0}));

  std::mt19937_64 rng(503);
  std::normal_distribution<double> g;
  const MeasureSpec b = base_spec();
  const std::size_t keep[] = {1, 2};
  const MeasureSpec mb = marginal(b, keep);
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> y{g(rng), g(rng)};
    const std::vector<double> full{0.0, y[0], y[1]};
    EXPECT_LE(ccd_norm(char_functional(mb, y) - char_functional(b, full)), 1e-14);
  }
}

TEST(Marginal, KeepSecondBlockExactly) {
  const MeasureSpec s = base_spec();
  const std::size_t last[] = {2};
  const MeasureSpec m = marginal(s, last);
  ASSERT_EQ(m.blocks.size(), 1u);
  EXPECT_EQ(m.blocks[0].a, s.blocks[1].a);
  EXPECT_EQ(m.blocks[0].b, s.blocks[1].b);
  EXPECT_EQ(m.blocks[0].psi, s.blocks[1].psi);
  EXPECT_EQ(m.p[0], s.p[2]);
}

TEST(Marginal, Errors) {
  const MeasureSpec s = base_spec();
  EXPECT_THROW(marginal(s, std::span<const std::size_t>{}), InvalidInput);
  const std::size_t unordered[] = {1, 0};
  EXPECT_THROW(marginal(s, unordered), InvalidInput);
  const std::size_t out[] = {3};
  EXPECT_THROW(marginal(s, out), InvalidInput);
}

TEST(Semigroup, Examples) {
  const auto probes1 = random_probes(1, 100, 2.0, 1);
  EXPECT_EQ(semigroup_check(hgtest::heat(), 0.5, 0.0, probes1), 0.0);
  EXPECT_LE(semigroup_check(hgtest::heat(), 0.5, 0.5, probes1), 1e-12);
  const MeasureSpec c = one_block(2, hgtest::complexified(), Matrix::identity(1), {}, {ccd(2, {{0, 0.5}, {1, 0.3}})});
  EXPECT_LE(semigroup_check(c, 0.3, 0.7, probes1), 1e-10);
  const MeasureSpec b = base_spec();
  const auto probes3 = random_probes(3, 100, 2.0, 2);
  EXPECT_LE(semigroup_check(b, 0.3, 0.7, probes3), 1e-10);
  EXPECT_LE(semigroup_check(b, 0.5, 0.5, probes3), 1e-10);
  EXPECT_THROW(semigroup_check(b, -0.1, 0.5, probes3), InvalidInput);
}

TEST(Semigroup, SwapInvariance) {
  const MeasureSpec b = base_spec();
  const auto probes = random_probes(3, 100, 2.0, 3);
  EXPECT_NEAR(semigroup_check(b, 0.3, 0.7, probes), semigroup_check(b, 0.7, 0.3, probes), 1e-12);
}

TEST(Probes, DeterministicAndBounded) {
  const auto a = random_probes(3, 50, 1.5, 9), b = random_probes(3, 50, 1.5, 9);
  EXPECT_EQ(a, b);
  for (const auto& y : a) {
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    EXPECT_LE(std::sqrt(r2), 1.5);
  }
  EXPECT_NE(a, random_probes(3, 50, 1.5, 10));
}

TEST(Consistency, MarginalFamilyIsConsistent) {
  const MeasureSpec b = base_spec();
  const FamilySpec fam = family_from_marginals(b, {{"x1", {0}}, {"x12", {0, 1}}, {"x3", {2}}, {"all", {0, 1, 2}}});
  const FamilyReport r = consistency_check(fam);
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.composition_failures.empty());
  // comparable pairs: x1<x12, x1<all, x12<all, x3<all
  EXPECT_EQ(r.pairs.size(), 4u);
  for (const auto& p : r.pairs) EXPECT_LE(p.max_abs, 1e-14);
  ASSERT_EQ(r.member_variation.size(), 4u);
  for (double v : r.member_variation) EXPECT_GE(v, 1.0 - 1e-6);
  EXPECT_DOUBLE_EQ(r.bound, *std::max_element(r.member_variation.begin(), r.member_variation.end()));
}

TEST(Consistency, InjectedFaultIsDetectedAtItsScale) {
  const MeasureSpec b = base_spec();
  for (double fault : {1e-3, 1e-4, 1e-2}) {
    FamilySpec fam = family_from_marginals(b, {{"x3", {2}}, {"all", {0, 1, 2}}});
    std::get<MeasureSpec>(fam.members[0].measure).blocks[0].b(0, 0) += fault;
    ConsistencyOptions opts;
    opts.compute_spec_variation = false;
    const FamilyReport r = consistency_check(fam, opts);
    EXPECT_FALSE(r.consistent);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].lower, 0u);
    EXPECT_GE(r.violations[0].deviation, fault / 5);
    EXPECT_LE(r.violations[0].deviation, fault * 5);
  }
}

TEST(Consistency, DiscreteTwoPointFamily) {
  // mu on R^2 with two atoms; marginals computed by hand
  const CCDNumber w1 = ccd(2, {{0, 0.5}, {1, 0.25}}), w2 = ccd(2, {{0, 0.5}}, {{2, -0.25}});
  FamilySpec fam;
  fam.members.push_back({"t1", {0}, atoms(2, {{1.0}, {3.0}}, {w1, w2})});
  fam.members.push_back({"t2", {1}, atoms(2, {{2.0}}, {w1 + w2})});
  fam.members.push_back({"t12", {0, 1}, atoms(2, {{1.0, 2.0}, {3.0, 2.0}}, {w1, w2})});
  const FamilyReport r = consistency_check(fam);
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.monotone);
  EXPECT_DOUBLE_EQ(r.member_variation[0], 1.5);
  EXPECT_DOUBLE_EQ(r.member_variation[1], 1.0 + 0.25 + 0.25);
  EXPECT_DOUBLE_EQ(r.member_variation[2], 1.5);
  EXPECT_DOUBLE_EQ(r.bound, 1.5);
  for (const auto& p : r.pairs) EXPECT_EQ(p.max_abs, 0.0);

  fam.members[1].measure = atoms(2, {{2.0}}, {w1 + w2 + ccd(2, {{0, 1e-3}})});
  const FamilyReport bad = consistency_check(fam);
  EXPECT_FALSE(bad.consistent);
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_NEAR(bad.violations[0].deviation, 1e-3, 1e-15);
}

TEST(Consistency, MonotoneOnRandomConsistentFamilies) {
  std::mt19937_64 rng(509);
  for (int k = 0; k < 50; ++k) {
    DiscreteMeasure top = random_measure(rng, 6);
    const std::size_t c0[] = {0}, c1[] = {1};
    FamilySpec fam;
    fam.members.push_back({"a", {0}, pushforward(top, c0)});
    fam.members.push_back({"b", {1}, pushforward(top, c1)});
    fam.members.push_back({"ab", {0, 1}, top});
    const FamilyReport r = consistency_check(fam);
    EXPECT_TRUE(r.consistent);
    EXPECT_TRUE(r.monotone);
  }
}

TEST(Consistency, BrokenCompositionIsReported) {
  const MeasureSpec b = base_spec();
  FamilySpec fam = family_from_marginals(b, {{"x1", {0}}, {"x12", {0, 1}}, {"all", {0, 1, 2}}});
  // claim that x1 reads position 1 of "all", disagreeing with the path through x12
  fam.projections[{2, 0}] = {1};
  ConsistencyOptions opts;
  opts.compute_spec_variation = false;
  const FamilyReport r = consistency_check(fam, opts);
  EXPECT_FALSE(r.consistent);
  ASSERT_EQ(r.composition_failures.size(), 1u);
  EXPECT_EQ(r.composition_failures[0], (std::array<std::size_t, 3>{2, 1, 0}));
}

TEST(Consistency, StructuralErrors) {
  FamilySpec fam;
  fam.members.push_back({"x", {1, 0}, hgtest::heat()});
  EXPECT_THROW(consistency_check(fam), InvalidInput);
  fam.members[0].coords = {0, 1};
  EXPECT_THROW(consistency_check(fam), InvalidInput);
  FamilySpec mixed;
  mixed.members.push_back({"s", {0}, hgtest::heat()});
  mixed.members.push_back({"d", {0, 1}, atoms(2, {{0.0, 0.0}}, {real(2, 1.0)})});
  EXPECT_THROW(consistency_check(mixed), InvalidInput);
}

TEST(Consistency, ExtendFamilyStaysConsistent) {
  const MeasureSpec b = base_spec();
  FamilySpec fam = family_from_marginals(b, {{"x1", {0}}, {"all", {0, 1, 2}}});
  extend_family(fam, b, "x23", {1, 2});
  ASSERT_EQ(fam.members.size(), 3u);
  ConsistencyOptions opts;
  opts.compute_spec_variation = false;
  const FamilyReport r = consistency_check(fam, opts);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.pairs.size(), 2u);
  EXPECT_TRUE(std::isnan(r.bound));
}
