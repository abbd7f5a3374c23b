#include "biaseval/error.hpp"
#include "biaseval/measures.hpp"
#include "biaseval/scores.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace biaseval;
using testing_support::make_scores;
using testing_support::Rng;

namespace {

GaussianSummary normal(double mu, double sigma)
{
  return { mu, sigma, 100 };
}

BiasScore score(double value)
{
  return { value, MeasureKind::KLS, "m", std::nullopt };
}

} // namespace

TEST(Indicator, CountsStrictWinsOnly)
{
  const auto set = make_scores("m", { 1, 2, 3, 4 }, { 0, 2, 5, 4 });
  EXPECT_EQ(indicator_bias_score(set).value, 25.0);
  EXPECT_EQ(indicator_bias_score(set).kind, MeasureKind::Indicator);
  EXPECT_EQ(indicator_bias_score(set).model_id, "m");
}

TEST(Indicator, EmptySetThrows)
{
  EXPECT_THROW(indicator_bias_score(make_scores("m", {}, {})), EmptySet);
}

TEST(Indicator, WorkedScenarioIsFifty)
{
  const auto set = make_scores("m", { 0.4, 0.3, 0.9, 0.8 }, { 0.5, 0.4, 0.1, 0.2 });
  EXPECT_EQ(indicator_bias_score(set).value, 50.0);
}

TEST(FitGaussian, MeanAndSampleSd)
{
  const double values[] = { 0.0, 2.0 };
  const auto g = fit_gaussian(values);
  EXPECT_EQ(g.mu, 1.0);
  EXPECT_NEAR(g.sigma, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(g.n, 2u);
}

TEST(FitGaussian, Errors)
{
  const double constant[] = { 5.0, 5.0, 5.0 };
  const double single[] = { 1.0 };
  EXPECT_THROW(fit_gaussian(constant), DegenerateDistribution);
  EXPECT_THROW(fit_gaussian(single), TooFewSamples);
}

TEST(GaussianSummary, DensityMatchesFormula)
{
  const auto g = normal(1.5, 0.5);
  const double x = 2.2;
  const double expected = std::exp(-0.5 * std::pow((x - 1.5) / 0.5, 2)) / (0.5 * std::sqrt(2 * M_PI));
  EXPECT_NEAR(g.density(x), expected, 1e-15);
  EXPECT_NEAR(g.log_density(x), std::log(expected), 1e-14);
}

TEST(KlGaussian, KnownValues)
{
  EXPECT_NEAR(kl_gaussian(normal(0, 1), normal(1, 1)), 0.5, 1e-15);
  EXPECT_NEAR(kl_gaussian(normal(0, 1), normal(0, 2)), std::log(2.0) + 0.125 - 0.5, 1e-15);
  EXPECT_EQ(kl_gaussian(normal(3, 7), normal(3, 7)), 0.0);
}

TEST(KlGaussian, MatchesQuadrature)
{
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const double mp = rng.uniform(-10, 10), sp = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
    const double mq = rng.uniform(-10, 10), sq = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
    const double closed = kl_gaussian(normal(mp, sp), normal(mq, sq));
    EXPECT_NEAR(closed, oracles::kl_quadrature(mp, sp, mq, sq), 1e-6 * std::max(1.0, closed));
  }
}

TEST(Kls, StandardVersusVarianceFour)
{
  const double forward = std::log(2.0) + 0.125 - 0.5;  // KL(N(0,1) || N(0,4))
  const double backward = std::log(0.5) + 2.0 - 0.5;   // KL(N(0,4) || N(0,1))
  const double expected = 100.0 * backward / (forward + backward);
  EXPECT_NEAR(kls(normal(0, 1), normal(0, 2)), expected, 1e-12);
  EXPECT_NEAR(expected, 71.72, 0.01);
}

TEST(Kls, IdenticalAndEqualVarianceGiveFifty)
{
  EXPECT_EQ(kls(normal(-2, 0.3), normal(-2, 0.3)), 50.0);
  // equal variances make the two directions equal
  EXPECT_NEAR(kls(normal(0, 1), normal(4, 1)), 50.0, 1e-12);
}

TEST(Kls, Bounds)
{
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto p = normal(rng.uniform(-10, 10), rng.uniform(0.01, 100));
    const auto q = normal(rng.uniform(-10, 10), rng.uniform(0.01, 100));
    const double v = kls(p, q);
    EXPECT_GE(v, 50.0);
    EXPECT_LE(v, 100.0);
  }
}

TEST(JsGaussian, FarApartIsOneBit)
{
  EXPECT_NEAR(js_gaussian(normal(0, 1), normal(1e6, 1)), 1.0, 1e-9);
  EXPECT_EQ(js_gaussian(normal(0.25, 3), normal(0.25, 3)), 0.0);
}

TEST(JsGaussian, SymmetricAndBounded)
{
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto p = normal(rng.uniform(-10, 10), std::exp(rng.uniform(-4.6, 4.6)));
    const auto q = normal(rng.uniform(-10, 10), std::exp(rng.uniform(-4.6, 4.6)));
    const double pq = js_gaussian(p, q);
    EXPECT_LT(std::abs(pq - js_gaussian(q, p)), 1e-12);
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
  }
}

TEST(JsGaussian, MatchesMonteCarlo)
{
  const oracles::JsMonteCarlo mc(1'000'000, 3);
  const double cases[][4] = {
    { 0, 1, 1, 1 }, { 0, 1, 0, 2 }, { -3, 0.1, 2, 5 }, { 0, 0.01, 0.02, 0.015 }, { 1, 50, -4, 0.05 },
  };
  for (const auto& c : cases)
    EXPECT_NEAR(js_gaussian(normal(c[0], c[1]), normal(c[2], c[3])), mc(c[0], c[1], c[2], c[3]), 1e-4)
      << c[0] << " " << c[1] << " " << c[2] << " " << c[3];
}

TEST(Jss, DefinitionAndIdentity)
{
  EXPECT_EQ(jss(normal(1, 2), normal(1, 2)), 100.0);
  const auto p = normal(0, 1), q = normal(0.5, 1.75);
  EXPECT_NEAR(jss(p, q), 100.0 * (1.0 - js_gaussian(p, q)) / 1.75, 1e-12);
  EXPECT_GE(jss(normal(0, 0.01), normal(1e3, 100)), 0.0);
}

TEST(Weighted, ThreeToOne)
{
  const auto w = weighted_measure({ { "gender", score(52) }, { "race", score(96) } },
                                  { { "gender", 3 }, { "race", 1 } });
  EXPECT_NEAR(w.value, 63.0, 1e-12);
  EXPECT_EQ(w.kind, MeasureKind::KLS);
  EXPECT_FALSE(w.bias_type.has_value());
}

TEST(Weighted, KeyMismatch)
{
  EXPECT_THROW(weighted_measure({ { "gender", score(52) } }, { { "race", 1 } }), KeyMismatch);
  EXPECT_THROW(weighted_measure({ { "gender", score(52) } }, { { "gender", 1 }, { "race", 1 } }),
               KeyMismatch);
  EXPECT_THROW(weighted_measure({ { "gender", score(52) } }, { { "gender", 0 } }), KeyMismatch);
}

TEST(Divergence, OverallIsCountWeighted)
{
  Rng rng(23);
  std::vector<double> st, at;
  std::vector<std::string> types;
  const char* names[] = { "age", "gender", "race" };
  for (int i = 0; i < 60; ++i) {
    const int t = i % 3 == 0 ? 0 : (i % 5 == 0 ? 1 : 2);
    types.push_back(names[t]);
    st.push_back(rng.normal(-1.0 - 0.1 * t, 0.5 + 0.2 * t));
    at.push_back(rng.normal(-1.1, 0.6));
  }
  const auto report = divergence_measures(make_scores("m", st, at, types));
  double kls_sum = 0.0, jss_sum = 0.0;
  std::size_t total = 0;
  for (const auto& [type, d] : report.per_type) {
    std::vector<double> s, a;
    for (std::size_t i = 0; i < types.size(); ++i)
      if (types[i] == type) {
        s.push_back(st[i]);
        a.push_back(at[i]);
      }
    EXPECT_EQ(d.count, s.size());
    EXPECT_NEAR(d.kls, kls(fit_gaussian(s), fit_gaussian(a)), 1e-12);
    kls_sum += static_cast<double>(d.count) * d.kls;
    jss_sum += static_cast<double>(d.count) * d.jss;
    total += d.count;
  }
  EXPECT_EQ(total, 60u);
  EXPECT_NEAR(report.kls.value, kls_sum / 60.0, 1e-9);
  EXPECT_NEAR(report.jss.value, jss_sum / 60.0, 1e-9);
}

TEST(Divergence, TypeWithOnePairThrows)
{
  const auto set = make_scores("m", { 1, 2, 3 }, { 2, 1, 0 }, { "a", "a", "b" });
  EXPECT_THROW(divergence_measures(set), TooFewSamples);
}
