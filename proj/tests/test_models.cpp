#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rare_union/analysis/oracles.hpp"
#include "rare_union/math/statistics.hpp"
#include "rare_union/models/factory.hpp"

using namespace rare_union;
using nlohmann::json;

namespace {

double correlation_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Empirical P(A_i) from unconditional draws, checked against the model value.
void expect_marginal_frequency(const DependenceModel& m, double gamma, std::uint64_t seed) {
  Rng rng(seed);
  const int n = 100000;
  std::vector<double> x(m.dim());
  std::vector<int> hits(m.dim(), 0);
  for (int k = 0; k < n; ++k) {
    m.sample(rng, x);
    const auto p = m.pattern(x, gamma);
    for (std::size_t i = 0; i < m.dim(); ++i) hits[i] += p[i];
  }
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double p = m.marginal_survival(i, gamma);
    EXPECT_NEAR(hits[i] / double(n), p, 4 * std::sqrt(p * (1 - p) / n) + 1e-12)
        << m.type_name() << " i=" << i;
  }
}

} // namespace

TEST(Factory, BuildsEachType) {
  const auto n = build_model(json::parse(R"({"type":"normal","d":4,"rho":0.75})"));
  const auto& nm = dynamic_cast<const NormalModel&>(*n);
  EXPECT_EQ(nm.dim(), 4u);
  EXPECT_DOUBLE_EQ(nm.covariance()(1, 3), 0.75);
  EXPECT_DOUBLE_EQ(nm.covariance()(2, 2), 1.0);
  EXPECT_EQ(*nm.equicorrelation(), 0.75);
  EXPECT_EQ(build_model(json::parse(R"({"type":"laplace","d":4})"))->type_name(), "laplace");
  EXPECT_EQ(build_model(json::parse(R"({"type":"archimedean","family":"clayton","theta":2,"d":3})"))->dim(), 3u);
  EXPECT_EQ(build_model(json::parse(R"({"type":"ar1","phi":0.5,"d":5})"))->type_name(), "ar1");
  EXPECT_EQ(build_model(json::parse(R"({"type":"finite","d":1,"pmf":[0.9,0.1]})"))->dim(), 1u);
  const auto g = build_model(json::parse(R"({"type":"normal","mu":[1,2],"sigma":[[1,0.5],[0.5,2]]})"));
  EXPECT_DOUBLE_EQ(dynamic_cast<const NormalModel&>(*g).mean()(1), 2.0);
}

TEST(Factory, RejectsInvalidSpecs) {
  EXPECT_THROW(build_model(json::parse(R"({"type":"normal","d":2,"sigma":[[1,2],[2,1]]})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"normal","d":3,"rho":-0.6})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"normal","d":3,"rho":1.0})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"archimedean","family":"gumbel","theta":0.5,"d":2})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"archimedean","family":"nope","theta":2,"d":2})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"ar1","phi":1.0,"d":3})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"cauchy","d":3})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"laplace"})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"({"type":"laplace","d":"four"})")), ModelError);
  EXPECT_THROW(build_model(json::parse(R"([1,2])")), ModelError);
}

TEST(Factory, JsonRoundTrip) {
  for (const char* s : {R"({"type":"normal","d":3,"rho":0.25})", R"({"type":"laplace","d":2})",
                        R"({"type":"archimedean","family":"frank","theta":3.0,"d":2})",
                        R"({"type":"ar1","phi":-0.3,"sigma_eps":2.0,"d":4})"}) {
    const auto a = build_model(json::parse(s));
    const auto b = build_model(a->to_json());
    EXPECT_EQ(a->to_json(), b->to_json()) << s;
  }
}

TEST(NormalModel, MarginalAndPairValues) {
  const auto m = NormalModel::equicorrelated(4, 0.75);
  EXPECT_NEAR(m.marginal_survival(0, 4.0), 3.1671e-05, 5e-10);
  EXPECT_NEAR(m.sum_marginals(4.0), 1.267e-04, 5e-8);
  EXPECT_NEAR(m.pair_survival(0, 1, 4.0) / 3.52712733568e-6, 1.0, 1e-10);
  EXPECT_EQ(m.pair_survival(0, 2, 3.0), m.pair_survival(2, 0, 3.0));
  const auto ind = NormalModel::equicorrelated(3, 0.0);
  EXPECT_NEAR(ind.pair_survival(0, 1, 1.5), std::pow(ind.marginal_survival(0, 1.5), 2), 1e-16);
  EXPECT_THROW(m.pair_survival(1, 1, 2.0), std::invalid_argument);
  EXPECT_THROW(m.marginal_survival(4, 2.0), std::out_of_range);
}

TEST(NormalModel, NonStandardMarginals) {
  Eigen::VectorXd mu(2);
  mu << 1.0, -1.0;
  Eigen::MatrixXd s(2, 2);
  s << 4.0, 1.0, 1.0, 1.0;
  const NormalModel m(mu, s);
  EXPECT_NEAR(m.marginal_survival(0, 3.0), math::normal_sf(1.0), 1e-16);
  EXPECT_NEAR(m.correlation(0, 1), 0.5, 1e-16);
  expect_marginal_frequency(m, 0.5, 1);
}

TEST(NormalModel, IndependentSamplesAreUncorrelated) {
  const auto m = NormalModel::equicorrelated(2, 0.0);
  Rng rng(2);
  std::vector<double> a(50000), b(50000), x(2);
  for (std::size_t k = 0; k < a.size(); ++k) {
    m.sample(rng, x);
    a[k] = x[0];
    b[k] = x[1];
  }
  EXPECT_NEAR(correlation_of(a, b), 0.0, 4 / std::sqrt(50000.0));
}

TEST(NormalModel, ConditionalGivenExceedance) {
  const auto one = NormalModel::equicorrelated(1, 0.0);
  Rng rng(3);
  std::vector<double> v(100000), x(1);
  const auto s = one.conditional_given_exceedance(0, 4.0);
  for (auto& y : v) {
    s(rng, x);
    y = x[0];
  }
  const Moments m = Moments::of(v);
  EXPECT_NEAR(m.mean, 4.22560714449, 4 * std::sqrt(m.sample_variance() / v.size()));

  // Far below the support the conditional law is the unconditional one.
  const auto m3 = NormalModel::equicorrelated(3, 0.5);
  const auto loose = m3.conditional_given_exceedance(1, -40.0);
  std::vector<double> y(3), first(50000);
  for (auto& f : first) {
    loose(rng, y);
    f = y[1];
  }
  const Moments lm = Moments::of(first);
  EXPECT_NEAR(lm.mean, 0.0, 4 * std::sqrt(lm.sample_variance() / first.size()));
  EXPECT_NEAR(lm.sample_variance(), 1.0, 0.03);
}

TEST(NormalModel, CompositionLawMatchesPairRatio) {
  const auto m = NormalModel::equicorrelated(3, 0.6);
  for (double g : {2.0, 3.0}) {
    const auto s = m.conditional_given_exceedance(0, g);
    Rng rng(4);
    const int n = 100000;
    std::vector<double> x(3);
    int hits = 0;
    for (int k = 0; k < n; ++k) {
      s(rng, x);
      ASSERT_GT(x[0], g);
      hits += x[2] > g;
    }
    const double p = m.pair_survival(0, 2, g) / m.marginal_survival(0, g);
    EXPECT_NEAR(hits / double(n), p, 4 * std::sqrt(p * (1 - p) / n)) << g;
  }
}

TEST(NormalModel, ConditionalGivenPair) {
  const auto ind = NormalModel::equicorrelated(3, 0.0);
  Rng rng(5);
  std::vector<double> a(30000), b(30000), x(3);
  const auto s = ind.conditional_given_pair_exceedance(0, 1, 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    s(rng, x);
    a[k] = x[0];
    b[k] = x[1];
  }
  EXPECT_NEAR(correlation_of(a, b), 0.0, 4 / std::sqrt(30000.0));

  const auto dep = NormalModel::equicorrelated(4, 0.75);
  const auto t = dep.conditional_given_pair_exceedance(1, 3, 4.0);
  std::vector<double> y(4);
  for (int k = 0; k < 2000; ++k) {
    t(rng, y);
    ASSERT_GE(y[1], 4.0);
    ASSERT_GE(y[3], 4.0);
  }
}

TEST(AR1Model, StationaryMoments) {
  const AR1Model m(0.5, std::sqrt(0.75), 6);
  EXPECT_NEAR(m.stationary_sd(), 1.0, 1e-15);
  EXPECT_NEAR(m.covariance()(0, 2), 0.25, 1e-15);
  Rng rng(6);
  const int n = 100000;
  std::vector<double> a(n), b(n), x(6);
  double s2 = 0;
  for (int k = 0; k < n; ++k) {
    m.sample(rng, x);
    a[k] = x[2];
    b[k] = x[3];
    s2 += x[5] * x[5];
  }
  EXPECT_NEAR(correlation_of(a, b), 0.5, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
  expect_marginal_frequency(m, 1.0, 7);
}

TEST(LaplaceModel, MarginalClosedFormAndPairValues) {
  const LaplaceModel m(4);
  EXPECT_NEAR(m.marginal_survival(0, 6.0) / (0.5 * std::exp(-std::sqrt(2.0) * 6.0)), 1.0, 1e-14);
  EXPECT_NEAR(m.marginal_survival(0, 6.0) / 1.03242645901181107707e-04, 1.0, 1e-14);
  EXPECT_NEAR(m.marginal_survival(0, -1.0), 1.0 - 0.5 * std::exp(-std::sqrt(2.0)), 1e-15);
  // Independent 40-digit quadrature of ∫ e^{−r} Φ̄(γ/√r)² dr.
  const double pairs[] = {6.16652380262e-7, 1.00695440166e-8, 1.68084722409e-10, 2.84759517034e-12};
  const double gammas[] = {6, 8, 10, 12};
  for (int k = 0; k < 4; ++k)
    EXPECT_NEAR(m.pair_survival(0, 1, gammas[k]) / pairs[k], 1.0, 1e-9) << gammas[k];
  EXPECT_EQ(m.pair_survival(1, 3, 7.0), m.pair_survival(3, 1, 7.0));
}

TEST(LaplaceModel, UnitVarianceAndFrequencies) {
  const LaplaceModel m(1);
  Rng rng(8);
  std::vector<double> v(200000), x(1);
  for (auto& y : v) {
    m.sample(rng, x);
    y = x[0];
  }
  EXPECT_NEAR(Moments::of(v).sample_variance(), 1.0, 0.02);
  expect_marginal_frequency(LaplaceModel(3), 1.5, 9);
}

TEST(LaplaceModel, CapabilitiesAreTruthful) {
  const LaplaceModel m(3);
  EXPECT_FALSE(m.capabilities().conditional_pair);
  EXPECT_THROW(m.conditional_given_pair_exceedance(0, 1, 2.0), UnsupportedCapability);
  // Non-positive thresholds fall back to rejection.
  const auto s = m.conditional_given_exceedance(1, -0.5);
  Rng rng(10);
  std::vector<double> x(3);
  for (int k = 0; k < 1000; ++k) {
    s(rng, x);
    ASSERT_GT(x[1], -0.5);
  }
}

TEST(ArchimedeanModel, DiagonalAndMarginals) {
  const ArchimedeanModel c(ArchimedeanFamily::Clayton, 1.0, 2);
  EXPECT_NEAR(c.marginal_survival(0, 0.9), 0.1, 1e-15);
  EXPECT_NEAR(c.pair_survival(0, 1, 0.9), 1.0 - 1.8 + 0.9 / 1.1, 1e-14);
  const ArchimedeanModel g(ArchimedeanFamily::GumbelHougaard, 1.0, 2);
  EXPECT_NEAR(g.pair_survival(0, 1, 0.9), 0.01, 1e-14);
}

TEST(ArchimedeanModel, SupportedParameterRanges) {
  using F = ArchimedeanFamily;
  EXPECT_THROW(ArchimedeanGenerator(F::Clayton, -0.5), ModelError);
  EXPECT_THROW(ArchimedeanGenerator(F::GumbelHougaard, 0.9), ModelError);
  EXPECT_THROW(ArchimedeanGenerator(F::Frank, 0.0), ModelError);
  EXPECT_THROW(ArchimedeanGenerator(F::AliMikhailHaq, 1.0), ModelError);
  EXPECT_NO_THROW(ArchimedeanGenerator(F::AliMikhailHaq, 0.0));
  EXPECT_EQ(parse_archimedean_family("Gumbel"), F::GumbelHougaard);
  EXPECT_EQ(parse_archimedean_family("amh"), F::AliMikhailHaq);
}

TEST(ArchimedeanModel, GeneratorInverts) {
  using F = ArchimedeanFamily;
  for (auto [f, th] : {std::pair{F::Clayton, 2.0}, {F::GumbelHougaard, 1.7}, {F::Frank, 5.0},
                       {F::AliMikhailHaq, 0.6}}) {
    const ArchimedeanGenerator g(f, th);
    for (double u : {0.05, 0.5, 0.93}) EXPECT_NEAR(g.psi_inverse(g.psi(u)), u, 1e-13) << to_string(f);
    EXPECT_NEAR(g.psi(1.0), 0.0, 1e-15);
  }
}

TEST(ArchimedeanModel, FrailtySamplingMatchesCopula) {
  using F = ArchimedeanFamily;
  std::uint64_t seed = 11;
  for (auto [f, th] : {std::pair{F::Clayton, 2.0}, {F::GumbelHougaard, 2.0}, {F::Frank, 6.0},
                       {F::AliMikhailHaq, 0.7}}) {
    const ArchimedeanModel m(f, th, 3);
    Rng rng(seed++);
    const int n = 100000;
    const double u = 0.8;
    std::vector<double> x(3);
    int pair = 0, all = 0;
    for (int k = 0; k < n; ++k) {
      m.sample(rng, x);
      for (double v : x) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
      pair += x[0] > u && x[2] > u;
      all += x[0] > u || x[1] > u || x[2] > u;
    }
    const double p = m.pair_survival(0, 2, u);
    EXPECT_NEAR(pair / double(n), p, 4 * std::sqrt(p * (1 - p) / n)) << to_string(f);
    const double a = oracle_union_archimedean(m, u);
    EXPECT_NEAR(all / double(n), a, 4 * std::sqrt(a * (1 - a) / n)) << to_string(f);
    expect_marginal_frequency(m, 0.9, seed++);
  }
}

TEST(Brackets, BooleFrechetAndBonferroni) {
  std::vector<std::pair<ModelPtr, std::vector<double>>> cases;
  cases.push_back({std::make_shared<NormalModel>(NormalModel::equicorrelated(4, 0.75)), {1, 2, 4, 6, 8}});
  cases.push_back({std::make_shared<NormalModel>(NormalModel::equicorrelated(3, 0.2)), {0.5, 2, 5}});
  cases.push_back({std::make_shared<LaplaceModel>(4), {1, 3, 6, 10, 12}});
  cases.push_back({std::make_shared<ArchimedeanModel>(ArchimedeanFamily::Clayton, 2.0, 4), {0.5, 0.9, 0.999}});
  cases.push_back({std::make_shared<ArchimedeanModel>(ArchimedeanFamily::Frank, 3.0, 3), {0.5, 0.9, 0.999}});
  for (const auto& [m, grid] : cases)
    for (double g : grid) {
      const double a = *union_oracle(*m, g);
      double mx = 0;
      for (std::size_t i = 0; i < m->dim(); ++i) mx = std::max(mx, m->marginal_survival(i, g));
      const double abar = m->sum_marginals(g), q = m->sum_pairs(g);
      EXPECT_LE(mx, a * (1 + 1e-12)) << m->type_name() << " " << g;
      EXPECT_LE(a, abar * (1 + 1e-12)) << m->type_name() << " " << g;
      EXPECT_LE(abar - q, a * (1 + 1e-12)) << m->type_name() << " " << g;
    }
}
