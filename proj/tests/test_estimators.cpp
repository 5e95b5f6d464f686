#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rare_union/analysis/oracles.hpp"
#include "rare_union/estimators/estimators.hpp"

using namespace rare_union;

namespace {

// Random pattern law with small-integer weights, some of them zero.
FinitePatternModel random_finite(std::size_t d, Rng& rng) {
  std::vector<double> w(std::size_t{1} << d);
  double total = 0;
  for (auto& x : w) {
    x = static_cast<double>(rng() % 7);
    if (rng() % 4 == 0) x = 0.0;
    total += x;
  }
  if (total == 0.0) {
    w.back() = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return FinitePatternModel(d, w);
}

std::vector<FinitePatternModel> random_models(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FinitePatternModel> out;
  for (int k = 0; k < count; ++k) out.push_back(random_finite(2 + k % 3, rng));
  return out;
}

double pattern_only(const PayoffSpec& y, const ExceedancePattern& p) {
  const std::vector<double> dummy(p.dim());
  return y(dummy, p);
}

} // namespace

TEST(ExactEstimators, UnbiasedForTheUnion) {
  for (const auto& m : random_models(50, 2024)) {
    const double truth = brute_force_union(m);
    EXPECT_NEAR(exact::cmc(m).estimate, truth, 1e-12);
    EXPECT_NEAR(exact::alpha_n(m, 1).estimate, truth, 1e-12);
    EXPECT_NEAR(exact::alpha_n(m, 2).estimate, truth, 1e-12);
    if (truth > 0) {
      EXPECT_NEAR(exact::alpha_1_is(m).estimate, truth, 1e-12);
      EXPECT_NEAR(exact::alpha_2_is(m).estimate, truth, 1e-12);
    }
    for (std::size_t n = 1; n <= m.dim(); ++n)
      EXPECT_NEAR(exact::beta_dagger_alpha(m, n).estimate, truth, 1e-12) << "n=" << n;
  }
}

TEST(ExactEstimators, BetaMatchesBruteForceForEachPayoff) {
  const auto custom = PayoffSpec::custom([](std::span<const double>, const ExceedancePattern& p) {
    return p[0] ? 2.5 : -1.0 + 0.25 * static_cast<double>(p.count());
  });
  for (const auto& m : random_models(50, 77)) {
    for (std::size_t n = 1; n <= m.dim(); ++n) {
      for (const auto& y : {PayoffSpec::constant_one(), PayoffSpec::residual_alternating(n - 1), custom}) {
        const double truth = brute_force_beta(m, n, [&](const ExceedancePattern& p) { return pattern_only(y, p); });
        EXPECT_NEAR(exact::beta_n(m, n, y).estimate, truth, 1e-12);
        EXPECT_NEAR(exact::beta_n_crude(m, n, y).estimate, truth, 1e-12);
        EXPECT_NEAR(exact::beta_n(m, n, y, EventOrder{}).estimate, truth, 1e-12);
      }
    }
  }
}

TEST(ExactEstimators, PermutedEventOrderIsStillUnbiased) {
  for (const auto& m : random_models(20, 5)) {
    EventOrder order(m.dim());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = order.size() - 1 - k;
    EXPECT_NEAR(exact::beta_dagger_alpha(m, 1, order).estimate, brute_force_union(m), 1e-12);
    EXPECT_NEAR(exact::beta_n(m, 2, PayoffSpec::constant_one(), order).estimate,
                brute_force_beta(m, 2, [](const ExceedancePattern&) { return 1.0; }), 1e-12);
  }
}

TEST(ExactEstimators, ResidualSecondMomentBound) {
  for (const auto& m : random_models(50, 9)) {
    const double q = m.sum_pairs(0.5);
    EXPECT_LE(exact::residual_second_moment(m, 1), 2.0 * q + 1e-15);
  }
}

TEST(ExactEstimators, ConditioningReducesVarianceByMaxIntersection) {
  for (const auto& m : random_models(50, 31)) {
    for (std::size_t n = 1; n <= m.dim(); ++n) {
      double pmax = 0;
      for (const auto& I : subsets_of_size(m.dim(), n)) pmax = std::max(pmax, m.intersection_survival(I, 0.5));
      for (const auto& y : {PayoffSpec::constant_one(), PayoffSpec::residual_alternating(n - 1)}) {
        const double v = std::pow(exact::beta_n(m, n, y).sample_std, 2);
        const double v0 = std::pow(exact::beta_n_crude(m, n, y).sample_std, 2);
        EXPECT_LE(v, pmax * v0 + 1e-15) << "n=" << n;
      }
    }
  }
}

TEST(ExactEstimators, IsIdentityHoldsForEveryCount) {
  // Under the first-order mixture the likelihood ratio is ᾱ/E, so
  // ᾱ + R₁·ᾱ/E collapses to ᾱ/E.
  const double abar = 0.37;
  for (std::size_t e = 1; e <= 20; ++e) {
    const double lr = abar / static_cast<double>(e);
    EXPECT_NEAR(abar + static_cast<double>(residual_term(e, 1)) * lr, lr, 1e-15) << e;
  }
}

TEST(ExactEstimators, DegenerateOnForcedCounts) {
  // Every replicate under the first-order mixture has E = 1 when events are
  // disjoint; the estimator collapses to ᾱ.
  const FinitePatternModel disjoint(3, {0.4, 0.2, 0.1, 0.0, 0.3, 0.0, 0.0, 0.0});
  const auto r = exact::alpha_1_is(disjoint);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.estimate, 0.6);
  const auto r2 = exact::alpha_2_is(disjoint);
  EXPECT_TRUE(r2.degenerate);
  EXPECT_DOUBLE_EQ(r2.estimate, 0.6);
}

TEST(Bonferroni, IndependentPair) {
  const double p = 0.1;
  const std::vector<double> ps{p, p};
  const auto m = FinitePatternModel::independent(ps);
  const auto b = bonferroni_bounds(m, 0.5);
  EXPECT_NEAR(b.upper, 2 * p, 1e-15);
  EXPECT_NEAR(b.second, 2 * p - p * p, 1e-15);
  EXPECT_NEAR(brute_force_union(m), b.second, 1e-15);
}

TEST(Bonferroni, NormalAndLaplaceValues) {
  const auto n = NormalModel::equicorrelated(4, 0.75);
  const auto b = bonferroni_bounds(n, 2.0);
  EXPECT_NEAR(b.upper, 9.100e-02, 5e-6);
  EXPECT_NEAR(b.second, 4.000e-02, 5e-6);
  EXPECT_NEAR(bonferroni_bounds(LaplaceModel(4), 6.0).upper, 4.130e-04, 5e-8);
}

TEST(MonteCarlo, ReproducibleAndThreadIndependent) {
  const auto m = NormalModel::equicorrelated(4, 0.75);
  const auto a = estimate_alpha_1_is(m, 3.0, 20000, 5);
  const auto b = estimate_alpha_1_is(m, 3.0, 20000, 5);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.sample_std, b.sample_std);
  const auto c = estimate_alpha_1_is(m, 3.0, 20000, 6);
  EXPECT_NE(a.estimate, c.estimate);

  std::vector<Component> comps{{IndexSet(4, 0b0001), 1.0}, {IndexSet(4, 0b0100), 2.0}};
  const Kernel k = [](std::span<const double> x, const ExceedancePattern& p) { return x[1] + p.count(); };
  const auto one = MonteCarloAverager(m, 3.0, 99, 1).average(comps, 30000, k, 3);
  const auto four = MonteCarloAverager(m, 3.0, 99, 4).average(comps, 30000, k, 3);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.variance, four.variance);
}

TEST(MonteCarlo, CapabilityMismatchIsReported) {
  const ArchimedeanModel arch(ArchimedeanFamily::Clayton, 2.0, 3);
  EXPECT_THROW(estimate_alpha_1_is(arch, 0.9, 100, 1), UnsupportedCapability);
  EXPECT_NO_THROW(estimate_alpha_n(arch, 0.9, 2, 100, 1));
  const LaplaceModel lap(3);
  EXPECT_THROW(estimate_alpha_2_is(lap, 3.0, 100, 1), UnsupportedCapability);
  EXPECT_THROW(estimate_beta_dagger_alpha(lap, 3.0, 2, 100, 1), UnsupportedCapability);
  EXPECT_THROW(estimate_alpha_n(lap, 3.0, 3, 100, 1), std::invalid_argument);
}

TEST(MonteCarlo, SingleEventModelIsDegenerate) {
  const auto m = NormalModel::equicorrelated(1, 0.0);
  const auto r = estimate_alpha_1_is(m, 3.0, 1000, 1);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_DOUBLE_EQ(r.estimate, m.marginal_survival(0, 3.0));
}

TEST(MonteCarlo, PairMixtureInTwoDimensionsIsDegenerate) {
  const auto m = NormalModel::equicorrelated(2, 0.5);
  const auto r = estimate_alpha_2_is(m, 2.0, 1000, 1);
  const auto b = bonferroni_bounds(m, 2.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.estimate, b.second);
}

TEST(MonteCarlo, PairMixtureEstimateInRange) {
  const auto m = NormalModel::equicorrelated(4, 0.75);
  const auto b = bonferroni_bounds(m, 3.0);
  const double q = b.upper - b.second;
  const auto r = estimate_alpha_2_is(m, 3.0, 20000, 3);
  EXPECT_GE(r.estimate, b.upper - q);
  EXPECT_LE(r.estimate, b.upper - 2 * q / 4);
}

TEST(MonteCarlo, DeepThresholdDegeneratesToBonferroni) {
  const auto m = NormalModel::equicorrelated(4, 0.75);
  for (double g : {6.0, 8.0}) {
    const auto b = bonferroni_bounds(m, g);
    const auto a1 = estimate_alpha_n(m, g, 1, 100000, 11);
    const auto a2 = estimate_alpha_n(m, g, 2, 100000, 12);
    EXPECT_TRUE(a1.degenerate);
    EXPECT_TRUE(a2.degenerate);
    EXPECT_EQ(a1.estimate, b.upper);
    EXPECT_EQ(a2.estimate, b.second);
    const auto c = estimate_cmc(m, g, 100000, 13);
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.estimate, 0.0);
  }
}

TEST(MonteCarlo, EstimatorsAgreeWithOracle) {
  const auto m = NormalModel::equicorrelated(4, 0.75);
  const double truth = oracle_union_normal_equicorr(4, 0.75, 4.0);
  const std::uint64_t R = 100000;
  for (const auto& r : {estimate_alpha_1_is(m, 4.0, R, 21), estimate_alpha_2_is(m, 4.0, R, 22),
                        estimate_beta_dagger_alpha(m, 4.0, 1, R, 23), estimate_beta_dagger_alpha(m, 4.0, 2, R, 24),
                        estimate_beta_n(m, 4.0, 1, PayoffSpec::constant_one(), R, 25)}) {
    EXPECT_FALSE(r.degenerate);
    EXPECT_NEAR(r.estimate, truth, 4 * r.std_error) << r.estimator;
    EXPECT_EQ(r.replicates, R);
  }
}

TEST(MonteCarlo, FiniteModelMatchesExactPath) {
  Rng rng(41);
  const auto m = random_finite(4, rng);
  const double truth = brute_force_union(m);
  const std::uint64_t R = 200000;
  for (const auto& r : {estimate_cmc(m, 0.5, R, 1), estimate_alpha_n(m, 0.5, 2, R, 2),
                        estimate_alpha_1_is(m, 0.5, R, 3), estimate_alpha_2_is(m, 0.5, R, 4),
                        estimate_beta_dagger_alpha(m, 0.5, 2, R, 5)}) {
    if (r.degenerate) {
      EXPECT_NEAR(r.estimate, truth, 1e-12) << r.estimator;
      continue;
    }
    EXPECT_NEAR(r.estimate, truth, 4 * r.std_error + 1e-12) << r.estimator;
  }
  // Sample standard deviations converge to the exact ones.
  EXPECT_NEAR(estimate_alpha_1_is(m, 0.5, R, 7).sample_std, exact::alpha_1_is(m).sample_std, 0.02);
}

TEST(Result, JsonShape) {
  const auto r = estimate_cmc(NormalModel::equicorrelated(2, 0.0), 1.0, 1000, 3);
  const auto j = r.to_json();
  for (const char* key : {"estimator", "gamma", "estimate", "sample_std", "stderr", "replicates",
                          "degenerate", "seed", "wall_ms"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["estimator"], "cmc");
  EXPECT_GT(j["stderr"].get<double>(), 0.0);
}
