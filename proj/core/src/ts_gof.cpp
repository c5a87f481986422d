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
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "mepgof/csv.hpp"
#include "mepgof/error.hpp"

namespace mepgof {
namespace {

double standard_noise_quantile(NoiseKind kind, double p) {
  switch (kind) {
    case NoiseKind::kNormal:
      return normal_quantile(p);
    case NoiseKind::kCauchy:
      return std::tan(std::numbers::pi * (p - 0.5));
    case NoiseKind::kStudentT3:
      return boost::math::quantile(boost::math::students_t_distribution<double>(3.0), p);
  }
  return 0.0;
}

double standard_noise_cdf(NoiseKind kind, double x) {
  switch (kind) {
    case NoiseKind::kNormal:
      return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    case NoiseKind::kCauchy:
      return 0.5 + std::atan(x) / std::numbers::pi;
    case NoiseKind::kStudentT3:
      return boost::math::cdf(boost::math::students_t_distribution<double>(3.0), x);
  }
  return 0.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNormal:
      return "normal";
    case NoiseKind::kStudentT3:
      return "t3";
    case NoiseKind::kCauchy:
      return "cauchy";
  }
  return "normal";
}

NoiseKind parse_noise(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "normal") return NoiseKind::kNormal;
  if (lower == "t3" || lower == "student-t3") return NoiseKind::kStudentT3;
  if (lower == "cauchy") return NoiseKind::kCauchy;
  throw InvalidArgument("unknown noise '" + std::string(text) +
                        "' (expected normal, t3 or cauchy)");
}

NoiseLaw::NoiseLaw(NoiseKind kind, double delta) : kind_(kind), delta_(delta) {
  if (!(std::abs(delta) < 0.5)) throw InvalidArgument("delta must satisfy |delta| < 1/2");
  // P(e0 + c <= 0) = F0(-c) = 1/2 - delta, so c = F0^{-1}(1/2 + delta) for
  // a symmetric base law.
  location_ = delta == 0.0 ? 0.0 : standard_noise_quantile(kind, 0.5 + delta);
}

double NoiseLaw::draw(PhiloxStream& gen) const {
  double e = 0.0;
  switch (kind_) {
    case NoiseKind::kNormal:
      e = standard_normal(gen);
      break;
    case NoiseKind::kCauchy:
      e = std::tan(std::numbers::pi * (gen.uniform() - 0.5));
      break;
    case NoiseKind::kStudentT3: {
      const double z = standard_normal(gen);
      double chi2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double g = standard_normal(gen);
        chi2 += g * g;
      }
      e = z / std::sqrt(chi2 / 3.0);
      break;
    }
  }
  return e + location_;
}

double NoiseLaw::cdf(double x) const { return standard_noise_cdf(kind_, x - location_); }

TimeSeriesModel ar1_model(double rho, double s, NoiseLaw noise) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("rho must satisfy |rho| < 1");
  if (!(s > 0.0)) throw InvalidArgument("sigma must be positive");
  return TimeSeriesModel{"ar1", [rho](double x) { return rho * x; },
                         [s](double) { return s; }, noise, s, {-50.0, 50.0}};
}

TimeSeriesModel tanh_ar_model(double rho, double a, double s, NoiseLaw noise) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("rho must satisfy |rho| < 1");
  if (!(s > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!std::isfinite(a)) throw InvalidArgument("a must be finite");
  return TimeSeriesModel{"tanh-ar",
                         [rho, a](double x) { return rho * x + a * std::tanh(x); },
                         [s](double) { return s; }, noise, s, {-50.0, 50.0}};
}

void check_scale_floor(const TimeSeriesModel& model, std::size_t points) {
  if (!(model.sigma_min > 0.0)) throw InvalidArgument("sigma_min must be positive");
  const auto [lo, hi] = model.domain;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    if (!(model.scale(x) >= model.sigma_min))
      throw InvalidArgument("scale function drops below sigma_min at x = " + format_real(x));
  }
}

std::vector<double> simulate_ts(const TimeSeriesModel& model, std::size_t n,
                                std::size_t burn_in, PhiloxStream& gen, double x0) {
  double x = x0;
  auto step = [&](std::size_t index) {
    x = model.location(x) + model.scale(x) * model.noise.draw(gen);
    if (!std::isfinite(x))
      throw RuntimeError("time series diverged at step " + std::to_string(index));
  };
  for (std::size_t k = 0; k < burn_in; ++k) step(k + 1);
  std::vector<double> series(n + 1);
  series[0] = x;
  for (std::size_t i = 1; i <= n; ++i) {
    step(burn_in + i);
    series[i] = x;
  }
  return series;
}

TSHypothesis make_ts_hypothesis(std::string name, RealFunction location, RealFunction cdf,
                                RealFunction density, const RealFunction& quantile,
                                std::pair<double, double> domain, double psi_floor,
                                std::size_t atoms) {
  if (!(psi_floor > 0.0 && psi_floor < 1.0))
    throw InvalidArgument("psi_floor must lie in (0, 1)");
  if (atoms < 1) throw InvalidArgument("measure needs at least one atom");
  const double mass = (1.0 - psi_floor) / static_cast<double>(atoms);
  std::vector<double> grid;
  std::vector<double> levels;
  grid.reserve(atoms);
  levels.reserve(atoms);
  for (std::size_t k = 0; k < atoms; ++k) {
    const double u = psi_floor + (static_cast<double>(k) + 0.5) * mass;
    const double x = quantile(u);
    // Flat stretches of an approximate quantile can repeat atoms; merge them.
    if (!grid.empty() && !(x > grid.back())) continue;
    grid.push_back(x);
    levels.push_back(u);
  }
  // Weights follow the Psi-levels so merged atoms keep their mass.
  std::vector<double> weights(grid.size());
  std::vector<double> psi(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double upper = k + 1 < grid.size() ? levels[k + 1] - 0.5 * mass : 1.0;
    const double lower = k == 0 ? psi_floor : levels[k] - 0.5 * mass;
    weights[k] = upper - lower;
    psi[k] = cdf(grid[k]);
  }
  return TSHypothesis{std::move(name),
                      std::move(location),
                      std::move(cdf),
                      std::move(density),
                      domain,
                      QuadratureMeasure(QuadratureMeasure::Kind::kDensityOnGrid,
                                        std::move(grid), std::move(weights)),
                      std::move(psi),
                      psi_floor,
                      false};
}

TSHypothesis ar1_normal_hypothesis(double rho, double s, double psi_floor) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("rho must satisfy |rho| < 1");
  const double sd = s / std::sqrt(1.0 - rho * rho);
  return make_ts_hypothesis(
      "ar1-normal", [rho](double x) { return rho * x; },
      [sd](double x) { return normal_cdf(x / sd); },
      [sd](double x) {
        const double z = x / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
      },
      [sd](double u) { return sd * normal_quantile(u); }, {-12.0 * sd, 12.0 * sd}, psi_floor);
}

TSHypothesis ar1_cauchy_hypothesis(double rho, double s, double psi_floor) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("rho must satisfy |rho| < 1");
  const double scale = s / (1.0 - std::abs(rho));
  return make_ts_hypothesis(
      "ar1-cauchy", [rho](double x) { return rho * x; },
      [scale](double x) { return 0.5 + std::atan(x / scale) / std::numbers::pi; },
      [scale](double x) {
        const double z = x / scale;
        return 1.0 / (std::numbers::pi * scale * (1.0 + z * z));
      },
      [scale](double u) { return scale * std::tan(std::numbers::pi * (u - 0.5)); },
      {-1e3 * scale, 1e3 * scale}, psi_floor);
}

TSHypothesis empirical_ts_hypothesis(const TimeSeriesModel& null_model, std::size_t length,
                                     std::uint64_t root_seed, double psi_floor) {
  if (length < 1000) throw InvalidArgument("empirical law needs a run of at least 1000 steps");
  TimeSeriesModel model = null_model;
  model.noise = NoiseLaw(null_model.noise.kind(), 0.0);
  constexpr std::size_t kBurnIn = 1000;
  const SeedSpec seed{root_seed, kAuxiliaryStreamBase};

  std::vector<double> run;
  {
    PhiloxStream gen(seed);
    run = simulate_ts(model, length, kBurnIn, gen);
  }
  std::sort(run.begin(), run.end());
  // Node densities from a histogram on 1024 bins, padded by one bin on
  // each side so the density vanishes at the domain ends.
  constexpr std::size_t kBins = 1024;
  const double span = run.back() - run.front();
  const double width = (span > 0.0 ? span : 1.0) / static_cast<double>(kBins - 2);
  const double lo = run.front() - width;
  const double hi = lo + width * static_cast<double>(kBins);
  std::vector<double> bins(kBins, 0.0);
  for (double x : run) {
    const auto b = std::min(kBins - 1, static_cast<std::size_t>((x - lo) / width));
    bins[b] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(run.size()) * width);
  std::vector<double> nodes(kBins + 1, 0.0);
  for (std::size_t k = 1; k < kBins; ++k) nodes[k] = 0.5 * (bins[k - 1] + bins[k]) * norm;
  auto table = std::make_shared<CumulativeTable>(lo, hi, std::move(nodes));
  const double total = table->total();

  TSHypothesis hyp = make_ts_hypothesis(
      null_model.name + "-empirical", null_model.location,
      [table, total](double x) { return table->cumulative(x) / total; },
      [table, total](double x) { return table->density(x) / total; },
      [table, total](double u) { return table->inverse(u * total); }, {lo, hi}, psi_floor);
  hyp.approximate = true;
  return hyp;
}

MarkedSample sign_marks(std::span<const double> series, const RealFunction& location) {
  if (series.size() < 2) throw InvalidArgument("series needs at least two states");
  const std::size_t n = series.size() - 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> anchors(series.begin(), series.end() - 1);
  std::vector<double> marks(n);
  for (std::size_t i = 1; i <= n; ++i)
    marks[i - 1] = sgn(series[i] - location(series[i - 1])) * scale;
  return MarkedSample(std::move(anchors), std::move(marks));
}

double ad_statistic(const MarkedSample& marks, const TSHypothesis& hyp,
                    const AdOptions& options) {
  const auto atoms = hyp.measure.atoms();
  const auto weights = hyp.measure.weights();
  const StepFunctionProcess z = build_marked_process(marks);
  const std::vector<double> values = z.evaluate_sorted(atoms);

  std::vector<double> plugin;
  if (options.plugin_weight) {
    std::vector<double> ones(marks.size(), 1.0 / static_cast<double>(marks.size()));
    plugin = build_marked_process(MarkedSample(
                 std::vector<double>(marks.anchors().begin(), marks.anchors().end()),
                 std::move(ones)))
                 .evaluate_sorted(atoms);
  }

  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (hyp.psi_at_atoms[k] < hyp.psi_floor) continue;
    ++used;
    const double psi = options.plugin_weight ? plugin[k] : hyp.psi_at_atoms[k];
    if (psi <= 0.0) continue;  // no anchors at or below the atom: Z = 0 there
    sum += values[k] * values[k] / psi * weights[k];
  }
  if (used == 0) throw InvalidArgument("degenerate integration domain");
  return sum;
}

double ad_statistic(std::span<const double> series, const TSHypothesis& hyp,
                    const AdOptions& options) {
  return ad_statistic(sign_marks(series, hyp.location), hyp, options);
}

double outlier_sensitivity_bound(const TSHypothesis& hyp) {
  const auto weights = hyp.measure.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (hyp.psi_at_atoms[k] >= hyp.psi_floor) sum += weights[k] / hyp.psi_at_atoms[k];
  }
  return 8.0 * sum;
}

ConditionBDiagnostic condition_b_diagnostic(const TSHypothesis& hyp, std::size_t points) {
  const auto [lo, hi] = hyp.domain;
  auto midpoint = [&](std::size_t cells) {
    const double h = (hi - lo) / static_cast<double>(cells);
    double sum = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
      const double x = lo + (static_cast<double>(k) + 0.5) * h;
      const double f = hyp.density(x);
      if (f <= 0.0) continue;
      const double psi = hyp.cdf(x);
      if (psi <= 0.0) return std::numeric_limits<double>::infinity();
      sum += f / std::sqrt(psi) * h;
    }
    return sum;
  };
  ConditionBDiagnostic out;
  out.value = midpoint(std::max<std::size_t>(points, 2));
  out.coarse_value = midpoint(std::max<std::size_t>(points / 2, 1));
  out.warn = !std::isfinite(out.value) ||
             std::abs(out.value - out.coarse_value) > 0.05 * std::abs(out.value);
  return out;
}

TestResult ts_test(std::span<const double> series, const TSHypothesis& hyp, double alpha,
                   const LimitLawSample& limit_sample, const AdOptions& options) {
  if (limit_sample.functional != Functional::kAd) throw InvalidArgument("wrong limit law");
  TestResult result =
      decide("ad-sign", ad_statistic(series, hyp, options), alpha, limit_sample);
  result.n = series.size() - 1;
  result.metadata.emplace_back("hypothesis", hyp.name);
  result.metadata.emplace_back("psi_floor", format_real(hyp.psi_floor));
  result.metadata.emplace_back("measure_atoms", std::to_string(hyp.measure.size()));
  result.metadata.emplace_back("approximate_law", hyp.approximate ? "true" : "false");
  result.metadata.emplace_back("plugin_weight", options.plugin_weight ? "true" : "false");
  return result;
}

}  // namespace mepgof
