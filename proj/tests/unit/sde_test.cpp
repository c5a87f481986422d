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

#include "mepgof/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mepgof/error.hpp"
#include "mepgof/random.hpp"
#include "mepgof/stats.hpp"

namespace mepgof {
namespace {

DiffusionModel custom_model(RealFunction drift, RealFunction diffusion) {
  return DiffusionModel{"custom", std::move(drift), std::move(diffusion), 1.0, {-10.0, 10.0}};
}

SamplingScheme uniform_times(double spacing, std::size_t n) {
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times[i] = spacing * static_cast<double>(i);
  return SamplingScheme(times);
}

double sup_ecdf_distance(std::vector<double> xs, const InvariantLaw& law) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = law.cdf(xs[i]);
    worst = std::max({worst, std::abs(f - static_cast<double>(i + 1) / n),
                      std::abs(f - static_cast<double>(i) / n)});
  }
  return worst;
}

TEST(MakeScheme, HighFrequencyArithmetic) {
  const SamplingScheme s = make_scheme(10'000, 2.0 / 3.0, 1.0);
  EXPECT_EQ(s.n(), 10'000u);
  // n^{-2/3}, n^{1/3} and n^{-1/3}.
  EXPECT_NEAR(s.delta_max(), 2.1544e-3, 1e-7);
  EXPECT_NEAR(s.horizon(), 21.544, 1e-3);
  EXPECT_NEAR(s.n() * s.delta_max() * s.delta_max(), 0.046416, 1e-6);
}

TEST(MakeScheme, RejectsBoundaryExponent) {
  for (double beta : {0.5, 1.0, 0.3}) {
    try {
      make_scheme(100, beta, 1.0);
      FAIL() << beta;
    } catch (const InvalidArgument& e) {
      EXPECT_NE(std::string(e.what()).find("scheme violates high-frequency conditions"),
                std::string::npos);
    }
  }
  EXPECT_THROW(make_scheme(100, 0.7, 0.0), InvalidArgument);
}

TEST(MakeScheme, SingleInterval) {
  const SamplingScheme s = make_scheme(1, 0.75, 2.5);
  ASSERT_EQ(s.times().size(), 2u);
  EXPECT_EQ(s.times()[0], 0.0);
  EXPECT_DOUBLE_EQ(s.times()[1], 2.5);
}

TEST(MakeScheme, MonotoneHighFrequencyConditions) {
  double horizon = 0.0;
  double n_delta_sq = INFINITY;
  for (std::size_t n : {10u, 100u, 1000u, 10000u, 100000u}) {
    const SamplingScheme s = make_scheme(n, 0.6, 1.3);
    EXPECT_GT(s.horizon(), horizon);
    const double nd2 = static_cast<double>(n) * s.delta_max() * s.delta_max();
    EXPECT_LT(nd2, n_delta_sq);
    horizon = s.horizon();
    n_delta_sq = nd2;
  }
}

TEST(SamplingScheme, RejectsBadTimes) {
  EXPECT_THROW(SamplingScheme({0.0}), InvalidArgument);
  EXPECT_THROW(SamplingScheme({0.1, 1.0}), InvalidArgument);
  EXPECT_THROW(SamplingScheme({0.0, 1.0, 1.0}), InvalidArgument);
}

TEST(DiscreteSample, CsvSchema) {
  const DiscreteSample s = make_discrete_sample({0.0, 0.5}, {1.0, 0.25});
  std::ostringstream out;
  s.write_csv(out);
  EXPECT_EQ(out.str(), "t,X\n0,1\n0.5,0.25\n");
  EXPECT_THROW(make_discrete_sample({0.0, 0.5}, {1.0}), InvalidArgument);
  EXPECT_THROW(make_discrete_sample({0.0, 0.5}, {1.0, NAN}), InvalidArgument);
}

TEST(EulerMaruyama, ZeroNoiseOde) {
  const auto model = custom_model([](double x) { return -x; }, [](double) { return 0.0; });
  PhiloxStream gen({1, 0});
  EulerOptions options;
  options.substeps = 10'000;
  const auto sample = euler_maruyama(model, SamplingScheme({0.0, 1.0}), 1.0, gen, options);
  EXPECT_NEAR(sample.states[1], std::exp(-1.0), 1e-4);
}

TEST(EulerMaruyama, BrownianMarginal) {
  const auto model = custom_model([](double) { return 0.0; }, [](double) { return 1.0; });
  const SamplingScheme scheme({0.0, 1.0, 2.0});
  std::vector<double> ends;
  for (std::uint64_t r = 0; r < 10'000; ++r) {
    PhiloxStream gen({kDefaultRootSeed, r});
    EulerOptions options;
    options.substeps = 4;
    ends.push_back(euler_maruyama(model, scheme, 0.3, gen, options).states[2] - 0.3);
  }
  EXPECT_NEAR(sample_variance(ends), 2.0, 0.05 * 2.0);
}

TEST(EulerMaruyama, OuStationaryVariance) {
  const auto model = ou_model(1.0, 1.0);
  PhiloxStream gen({kDefaultRootSeed, 0});
  const auto sample = euler_maruyama(model, uniform_times(0.05, 100'000), 0.0, gen);
  EXPECT_NEAR(sample_variance(sample.states), 0.5, 0.05 * 0.5);
}

TEST(EulerMaruyama, BitDeterministic) {
  const auto model = tanh_drift_model(1.0, 0.5, 1.0);
  const auto scheme = make_scheme(500, 0.7, 1.0);
  PhiloxStream a({3, 9});
  PhiloxStream b({3, 9});
  EXPECT_EQ(euler_maruyama(model, scheme, 0.1, a).states,
            euler_maruyama(model, scheme, 0.1, b).states);
}

TEST(EulerMaruyama, RecordsBrownianIncrements) {
  const auto model = custom_model([](double) { return 0.0; }, [](double) { return 1.0; });
  PhiloxStream gen({2, 0});
  std::vector<double> dw;
  EulerOptions options;
  options.brownian_increments = &dw;
  const auto sample = euler_maruyama(model, make_scheme(50, 0.75, 1.0), 0.0, gen, options);
  ASSERT_EQ(dw.size(), 50u);
  for (std::size_t i = 0; i < dw.size(); ++i)
    EXPECT_NEAR(sample.states[i + 1] - sample.states[i], dw[i], 1e-12);
}

TEST(EulerMaruyama, ReportsDivergence) {
  const auto model = custom_model([](double x) { return x * x * x; }, [](double) { return 1.0; });
  PhiloxStream gen({1, 0});
  try {
    euler_maruyama(model, uniform_times(1.0, 20), 10.0, gen);
    FAIL() << "expected divergence";
  } catch (const RuntimeError& e) {
    EXPECT_NE(std::string(e.what()).find("trajectory diverged"), std::string::npos);
  }
}

TEST(InvariantLaw, OuMatchesGaussian) {
  const auto law = invariant_law(ou_model(1.0, 1.0));
  EXPECT_NEAR(law.cdf(0.0), 0.5, 1e-6);
  const double sd = std::sqrt(0.5);
  for (double x : {-1.5, -0.3, 0.0, 0.7, 2.0}) {
    const double expected =
        std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
    EXPECT_NEAR(law.density(x), expected, 1e-6) << x;
    EXPECT_NEAR(law.cdf(x), 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))), 1e-6) << x;
  }
}

TEST(InvariantLaw, OuVarianceByQuadrature) {
  const auto law = invariant_law(ou_model(2.0, 1.0));
  const auto [lo, hi] = law.support();
  const std::size_t cells = 200'000;
  const double h = (hi - lo) / cells;
  double mass = 0.0, second = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double x = lo + (k + 0.5) * h;
    mass += law.density(x) * h;
    second += x * x * law.density(x) * h;
  }
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_NEAR(second, 0.25, 1e-4);
  EXPECT_NEAR(law.second_abs_moment(), 0.25, 1e-4);
  EXPECT_TRUE(std::isfinite(law.third_abs_moment()));
  EXPECT_NEAR(law.third_abs_moment(), 2.0 * std::pow(0.5, 3) * std::sqrt(2.0 / std::numbers::pi),
              1e-4);
}

TEST(InvariantLaw, QuantileInvertsCdf) {
  const auto law = invariant_law(tanh_drift_model(1.0, 0.5, 1.0));
  double previous = -INFINITY;
  for (int k = 1; k <= 9; ++k) {
    const double p = 0.1 * k;
    const double x = law.quantile(p);
    EXPECT_NEAR(law.cdf(x), p, 1e-8);
    EXPECT_GT(x, previous);
    previous = x;
  }
}

TEST(InvariantLaw, SymmetricModelIsEven) {
  const auto law = invariant_law(tanh_drift_model(1.5, 0.8, 1.0));
  EXPECT_NEAR(law.cdf(0.0), 0.5, 1e-9);
  for (double x : {0.1, 0.9, 2.3}) EXPECT_NEAR(law.density(x), law.density(-x), 1e-10);
}

TEST(InvariantLaw, RejectsTransientModel) {
  const auto model = custom_model([](double x) { return 0.5 * x; }, [](double) { return 1.0; });
  try {
    invariant_law(model);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("model not positive recurrent on domain"),
              std::string::npos);
  }
}

TEST(PsiFunction, ConstantSigmaScalesCdf) {
  const auto model = ou_model(1.0, 2.0);
  const auto law = invariant_law(model);
  const auto psi = psi_function(model, law);
  EXPECT_NEAR(psi.total_mass(), 4.0, 1e-8);
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) EXPECT_NEAR(psi(x), 4.0 * law.cdf(x), 1e-8);
}

TEST(PsiFunction, OuAtZero) {
  const auto model = ou_model(1.0, 1.0);
  const auto psi = psi_function(model, invariant_law(model));
  EXPECT_NEAR(psi(0.0), 0.5, 1e-4);
}

TEST(PsiFunction, MonotoneWithVanishingLeftTail) {
  const auto model = tanh_drift_model(1.0, 0.5, 1.0);
  const auto law = invariant_law(model);
  const auto psi = psi_function(model, law);
  EXPECT_NEAR(psi(law.support().first), 0.0, 1e-12);
  double previous = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    EXPECT_GE(psi(x), previous);
    previous = psi(x);
  }
  EXPECT_NEAR(psi.inverse(psi(0.4)), 0.4, 1e-9);
}

TEST(StationaryStart, DrawsFromTheLaw) {
  const auto law = invariant_law(ou_model(1.0, 1.0));
  std::vector<double> draws;
  for (std::uint64_t r = 0; r < 100'000; ++r) {
    PhiloxStream gen({kDefaultRootSeed, r});
    draws.push_back(stationary_start(law, gen));
  }
  EXPECT_NEAR(sample_variance(draws), 0.5, 0.02 * 0.5);
  EXPECT_LT(sup_ecdf_distance(draws, law), 0.01);
}

TEST(StationaryStart, IsQuantileOfOneUniform) {
  const auto law = invariant_law(ou_model(1.0, 1.0));
  PhiloxStream a({8, 1});
  PhiloxStream b({8, 1});
  EXPECT_EQ(stationary_start(law, a), law.quantile(b.uniform()));
  EXPECT_EQ(a.position(), 1u);
  EXPECT_NEAR(law.quantile(0.5), 0.0, 1e-9);
}

TEST(Ergodicity, LongTrajectoryMatchesInvariantCdf) {
  const auto model = ou_model(1.0, 1.0);
  const auto law = invariant_law(model);
  PhiloxStream gen({kDefaultRootSeed, 0});
  const double x0 = stationary_start(law, gen);
  const auto sample = euler_maruyama(model, uniform_times(0.05, 100'000), x0, gen);
  EXPECT_GE(sample.scheme.horizon(), 500.0);
  EXPECT_LT(sup_ecdf_distance(sample.states, law), 0.03);
}

TEST(WithDriftShift, AddsConstant) {
  const auto model = ou_model(1.0, 1.0);
  const auto shifted = with_drift_shift(model, 0.5);
  for (double x : {-1.0, 0.0, 2.0}) EXPECT_DOUBLE_EQ(shifted.drift(x), -x + 0.5);
  EXPECT_LE(shifted.domain.first, model.domain.first);
  EXPECT_GE(shifted.domain.second, model.domain.second);
  EXPECT_NEAR(invariant_law(shifted).quantile(0.5), 0.5, 1e-6);
}

}  // namespace
}  // namespace mepgof
