// Copyright 2026 The mepgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mepgof/ts_gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mepgof/error.hpp"
#include "mepgof/random.hpp"
#include "mepgof/stats.hpp"

namespace mepgof {
namespace {

std::vector<double> ar1_series(std::uint64_t stream, std::size_t n, double rho = 0.5,
                               NoiseLaw noise = NoiseLaw()) {
  PhiloxStream gen({kDefaultRootSeed, stream});
  return simulate_ts(ar1_model(rho, 1.0, noise), n, 1000, gen);
}

const TSHypothesis& ar1_hypothesis() {
  static const TSHypothesis hyp = ar1_normal_hypothesis(0.5);
  return hyp;
}

double lag1_autocorrelation(const std::vector<double>& x) {
  const double m = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i + 1 < x.size()) num += (x[i] - m) * (x[i + 1] - m);
  }
  return num / den;
}

TEST(SimulateTs, IidNoiseHasNoLagOneCorrelation) {
  EXPECT_NEAR(lag1_autocorrelation(ar1_series(0, 10'000, 0.0)), 0.0, 0.02);
}

TEST(SimulateTs, Ar1StationaryVariance) {
  EXPECT_NEAR(sample_variance(ar1_series(1, 10'000)), 4.0 / 3.0, 0.05 * 4.0 / 3.0);
}

TEST(SimulateTs, ResidualSignsBalancedUnderTruth) {
  const auto x = ar1_series(2, 10'000);
  std::size_t non_positive = 0;
  for (std::size_t i = 1; i < x.size(); ++i) non_positive += x[i] - 0.5 * x[i - 1] <= 0.0;
  EXPECT_NEAR(static_cast<double>(non_positive) / 10'000.0, 0.5, 0.02);
}

TEST(SimulateTs, LengthAndDeterminism) {
  const auto a = ar1_series(3, 50);
  EXPECT_EQ(a.size(), 51u);
  EXPECT_EQ(a, ar1_series(3, 50));
}

TEST(NoiseLaw, MedianShift) {
  for (NoiseKind kind : {NoiseKind::kNormal, NoiseKind::kStudentT3, NoiseKind::kCauchy}) {
    for (double delta : {0.0, 0.1, -0.2}) {
      const NoiseLaw law(kind, delta);
      EXPECT_NEAR(law.cdf(0.0), 0.5 - delta, 1e-10) << to_string(kind);
      PhiloxStream gen({kDefaultRootSeed, 7});
      std::size_t below = 0;
      const std::size_t draws = 100'000;
      for (std::size_t i = 0; i < draws; ++i) below += law.draw(gen) <= 0.0;
      EXPECT_NEAR(static_cast<double>(below) / draws, 0.5 - delta, 0.005) << to_string(kind);
    }
  }
  EXPECT_THROW(NoiseLaw(NoiseKind::kNormal, 0.5), InvalidArgument);
}

TEST(NoiseLaw, FixedWordsPerDraw) {
  const std::pair<NoiseKind, std::uint64_t> expected[] = {
      {NoiseKind::kNormal, 1}, {NoiseKind::kCauchy, 1}, {NoiseKind::kStudentT3, 4}};
  for (const auto& [kind, words] : expected) {
    PhiloxStream gen({1, 1});
    const NoiseLaw law(kind, 0.05);
    for (int i = 0; i < 10; ++i) law.draw(gen);
    EXPECT_EQ(gen.position(), 10 * words) << to_string(kind);
  }
}

TEST(NoiseKind, Parse) {
  EXPECT_EQ(parse_noise("t3"), NoiseKind::kStudentT3);
  EXPECT_EQ(parse_noise(to_string(NoiseKind::kCauchy)), NoiseKind::kCauchy);
  EXPECT_THROW(parse_noise("laplace"), InvalidArgument);
}

TEST(CheckScaleFloor, DetectsDip) {
  TimeSeriesModel model = ar1_model(0.5);
  EXPECT_NO_THROW(check_scale_floor(model));
  model.scale = [](double x) { return 0.1 + std::abs(x); };
  model.sigma_min = 0.5;
  EXPECT_THROW(check_scale_floor(model), InvalidArgument);
}

TEST(Sgn, ZeroIsZero) {
  EXPECT_EQ(sgn(0.0), 0.0);
  EXPECT_EQ(sgn(-0.0), 0.0);
  EXPECT_EQ(sgn(1e-300), 1.0);
  EXPECT_EQ(sgn(-3.0), -1.0);
}

TEST(SignMarks, Examples) {
  // With S0 = 0 the residuals are the states themselves.
  const auto zero = [](double) { return 0.0; };
  const std::vector<double> series{5.0, 1.0, -1.0, 0.0};
  const auto marks = sign_marks(series, zero);
  const double r = 1.0 / std::sqrt(3.0);
  ASSERT_EQ(marks.size(), 3u);
  EXPECT_EQ(marks.marks()[0], r);
  EXPECT_EQ(marks.marks()[1], -r);
  EXPECT_EQ(marks.marks()[2], 0.0);
  EXPECT_EQ(marks.anchors()[0], 5.0);

  const std::vector<double> rising{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto all_up = sign_marks(rising, zero);
  for (double m : all_up.marks()) EXPECT_EQ(m, 0.5);
  EXPECT_THROW(sign_marks(std::vector<double>{1.0}, zero), InvalidArgument);
}

TEST(SignMarks, SquaredMarksAreOneOverN) {
  const auto x = ar1_series(4, 999);
  const auto marks = sign_marks(x, ar1_hypothesis().location);
  for (double m : marks.marks()) EXPECT_DOUBLE_EQ(m * m, 1.0 / 999.0);
}

TEST(AdStatistic, AllZeroSigns) {
  const std::vector<double> flat(100, 0.0);
  EXPECT_EQ(ad_statistic(flat, ar1_hypothesis()), 0.0);
}

TEST(AdStatistic, ConstantSignIdentity) {
  const auto& hyp = ar1_hypothesis();
  const auto x = ar1_series(5, 400);
  const std::size_t n = x.size() - 1;
  std::vector<double> anchors(x.begin(), x.end() - 1);
  const std::vector<double> marks(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double expected = 0.0;
  for (std::size_t k = 0; k < hyp.measure.size(); ++k) {
    const double a = hyp.measure.atoms()[k];
    double ecdf = 0.0;
    for (double v : anchors) ecdf += v <= a;
    ecdf /= static_cast<double>(n);
    expected += static_cast<double>(n) * ecdf * ecdf / hyp.psi_at_atoms[k] * hyp.measure.weights()[k];
  }
  const double got = ad_statistic(MarkedSample(anchors, marks), hyp);
  EXPECT_NEAR(got, expected, 1e-10 * expected);
}

TEST(AdStatistic, MeanUnderNullNearOne) {
  std::vector<double> stats;
  for (std::uint64_t r = 0; r < 500; ++r) stats.push_back(ad_statistic(ar1_series(r, 10'000), ar1_hypothesis()));
  EXPECT_NEAR(mean(stats), 1.0, 0.1);
}

TEST(AdStatistic, InvariantUnderMonotoneReparametrization) {
  const auto& hyp = ar1_hypothesis();
  const double sd = 1.0 / std::sqrt(0.75);
  const TSHypothesis image = make_ts_hypothesis(
      "exp-image", [](double) { return 0.0; },
      [&hyp](double y) { return y > 0.0 ? hyp.cdf(std::log(y)) : 0.0; },
      [&hyp](double y) { return y > 0.0 ? hyp.density(std::log(y)) / y : 0.0; },
      [sd](double p) { return std::exp(sd * normal_quantile(p)); },
      {std::exp(hyp.domain.first), std::exp(hyp.domain.second)});
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto marks = sign_marks(ar1_series(r, 300), hyp.location);
    std::vector<double> mapped(marks.anchors().begin(), marks.anchors().end());
    for (double& a : mapped) a = std::exp(a);
    const std::vector<double> m(marks.marks().begin(), marks.marks().end());
    const double base = ad_statistic(marks, hyp);
    EXPECT_NEAR(ad_statistic(MarkedSample(mapped, m), image), base, 1e-9 * base) << r;
  }
}

TEST(AdStatistic, SignAntisymmetry) {
  const auto& hyp = ar1_hypothesis();
  const auto marks = sign_marks(ar1_series(6, 500), hyp.location);
  const std::vector<double> anchors(marks.anchors().begin(), marks.anchors().end());
  std::vector<double> flipped(marks.marks().begin(), marks.marks().end());
  for (double& m : flipped) m = -m;
  const MarkedSample negated(anchors, flipped);
  const auto z = build_marked_process(marks);
  const auto zn = build_marked_process(negated);
  for (std::size_t k = 0; k < z.cumulative_values().size(); ++k)
    EXPECT_EQ(zn.cumulative_values()[k], -z.cumulative_values()[k]);
  EXPECT_EQ(ad_statistic(negated, hyp), ad_statistic(marks, hyp));
}

TEST(AdStatistic, OutlierChangeWithinBound) {
  const auto& hyp = ar1_hypothesis();
  const double bound = outlier_sensitivity_bound(hyp);
  EXPECT_LE(bound, 8.0 / hyp.psi_floor);
  const auto x = ar1_series(7, 2000);
  const double base = ad_statistic(x, hyp);
  for (std::size_t j : {0u, 1u, 17u, 1000u, 1999u, 2000u}) {
    for (double outlier : {1e12, -1e12, 40.0}) {
      auto y = x;
      y[j] = outlier;
      EXPECT_LE(std::abs(ad_statistic(y, hyp) - base), bound) << j << " " << outlier;
    }
  }
}

TEST(AdStatistic, DegenerateIntegrationDomain) {
  const TSHypothesis hyp = make_ts_hypothesis(
      "flat", [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 1.0; }, [](double p) { return p; }, {0.0, 1.0});
  const std::vector<double> series{0.1, 0.2, 0.3};
  try {
    ad_statistic(series, hyp);
    FAIL() << "expected an exception";
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "degenerate integration domain");
  }
}

TEST(AdStatistic, PluginWeightIsFinite) {
  AdOptions options;
  options.plugin_weight = true;
  const double t = ad_statistic(ar1_series(8, 2000), ar1_hypothesis(), options);
  EXPECT_TRUE(std::isfinite(t));
  EXPECT_GE(t, 0.0);
}

TEST(ConditionB, UniformLawClosedForm) {
  const TSHypothesis hyp = make_ts_hypothesis(
      "uniform", [](double) { return 0.0; },
      [](double x) { return std::clamp(x, 0.0, 1.0); },
      [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; }, [](double p) { return p; },
      {0.0, 1.0});
  const auto diag = condition_b_diagnostic(hyp);
  EXPECT_NEAR(diag.value, 2.0, 0.02);
  EXPECT_FALSE(diag.warn);
}

TEST(ConditionB, DivergentIntegralWarns) {
  const TSHypothesis hyp = make_ts_hypothesis(
      "quartic", [](double) { return 0.0; },
      [](double x) { return std::pow(std::clamp(x, 0.0, 1.0), 4); },
      [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; },
      [](double p) { return std::pow(p, 0.25); }, {0.0, 1.0});
  EXPECT_TRUE(condition_b_diagnostic(hyp).warn);
}

TEST(ConditionB, GaussianLawFinite) {
  const auto diag = condition_b_diagnostic(ar1_normal_hypothesis(0.0));
  EXPECT_TRUE(std::isfinite(diag.value));
  EXPECT_NEAR(diag.value, 2.0, 0.02);
  EXPECT_FALSE(diag.warn);
}

TEST(TsTest, RejectsWrongLimitLaw) {
  const auto limit = sample_limit_law(Functional::kCvm, 16, 100, 1, 1);
  EXPECT_THROW(ts_test(ar1_series(0, 100), ar1_hypothesis(), 0.05, limit), InvalidArgument);
}

TEST(TsTest, ZeroStatisticNeverRejects) {
  const auto limit = sample_limit_law(Functional::kAd, 64, 1000, 1, 1);
  const std::vector<double> flat(50, 0.0);
  for (double alpha : {0.01, 0.5, 0.99}) {
    const TestResult r = ts_test(flat, ar1_hypothesis(), alpha, limit);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_FALSE(r.reject);
  }
}

TEST(Hypotheses, CatalogLaws) {
  const auto& hyp = ar1_hypothesis();
  EXPECT_NEAR(hyp.measure.total_mass(), 1.0 - hyp.psi_floor, 1e-12);
  for (double p : hyp.psi_at_atoms) EXPECT_GE(p, hyp.psi_floor * (1.0 - 1e-9));
  const auto cauchy = ar1_cauchy_hypothesis(0.5);
  EXPECT_NEAR(cauchy.cdf(0.0), 0.5, 1e-12);
  EXPECT_FALSE(cauchy.approximate);
  EXPECT_FALSE(condition_b_diagnostic(cauchy).warn);
}

TEST(Hypotheses, EmpiricalLawApproximatesAnalytic) {
  const auto empirical = empirical_ts_hypothesis(ar1_model(0.5), 1'000'000, 9);
  EXPECT_TRUE(empirical.approximate);
  for (double x : {-2.0, -1.0, 0.0, 0.5, 1.5}) EXPECT_NEAR(empirical.cdf(x), ar1_hypothesis().cdf(x), 0.01) << x;
  EXPECT_THROW(empirical_ts_hypothesis(ar1_model(0.5), 10, 9), InvalidArgument);
}

}  // namespace
}  // namespace mepgof
