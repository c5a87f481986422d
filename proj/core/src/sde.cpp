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
#include <ostream>

#include "mepgof/csv.hpp"
#include "mepgof/error.hpp"

namespace mepgof {
namespace {

// Relative density allowed at the ends of an integration domain.
constexpr double kBoundaryDensityTolerance = 1e-8;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidArgument(std::string(name) + " must be positive and finite");
}

double stationary_sd(double theta, double s) { return s / std::sqrt(2.0 * theta); }

}  // namespace

DiffusionModel ou_model(double theta, double s) {
  require_positive(theta, "theta");
  require_positive(s, "sigma");
  const double half_width = 12.0 * stationary_sd(theta, s);
  return DiffusionModel{"ou",
                        [theta](double x) { return -theta * x; },
                        [s](double) { return s; },
                        theta,
                        {-half_width, half_width}};
}

DiffusionModel tanh_drift_model(double theta, double a, double s) {
  require_positive(theta, "theta");
  require_positive(s, "sigma");
  if (!std::isfinite(a)) throw InvalidArgument("a must be finite");
  const double half_width = std::abs(a) / theta + 12.0 * stationary_sd(theta, s);
  return DiffusionModel{"tanh",
                        [theta, a](double x) { return -theta * x + a * std::tanh(x); },
                        [s](double) { return s; },
                        theta + std::abs(a),
                        {-half_width, half_width}};
}

DiffusionModel with_drift_shift(const DiffusionModel& model, double shift) {
  DiffusionModel shifted = model;
  shifted.drift = [drift = model.drift, shift](double x) { return drift(x) + shift; };
  if (shift != 0.0) shifted.name = model.name + "+shift";
  // The invariant law moves by roughly shift / C for drift Lipschitz
  // constant C; widen the domain accordingly.
  if (model.lipschitz_hint && *model.lipschitz_hint > 0.0) {
    const double widen = std::abs(shift) / *model.lipschitz_hint;
    shifted.domain = {model.domain.first - widen, model.domain.second + widen};
  }
  return shifted;
}

SamplingScheme::SamplingScheme(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw InvalidArgument("sampling scheme needs at least one interval");
  if (times_.front() != 0.0) throw InvalidArgument("sampling scheme must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i]))
      throw InvalidArgument("sampling times must be strictly increasing");
  }
}

double SamplingScheme::delta_max() const {
  double delta = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i)
    delta = std::max(delta, times_[i] - times_[i - 1]);
  return delta;
}

SamplingScheme make_scheme(std::size_t n, double beta, double c) {
  if (!(beta > 0.5 && beta < 1.0))
    throw InvalidArgument("scheme violates high-frequency conditions: beta must lie in (1/2, 1)");
  require_positive(c, "spacing constant c");
  if (n == 0) throw InvalidArgument("scheme needs n >= 1");
  const double delta = c * std::pow(static_cast<double>(n), -beta);
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times[i] = delta * static_cast<double>(i);
  return SamplingScheme(std::move(times));
}

void DiscreteSample::write_csv(std::ostream& out) const {
  CsvWriter csv(out, {"t", "X"});
  const auto t = scheme.times();
  for (std::size_t i = 0; i < states.size(); ++i) csv.row({t[i], states[i]});
}

DiscreteSample make_discrete_sample(std::vector<double> times, std::vector<double> states) {
  if (times.size() != states.size())
    throw InvalidArgument("t and X columns must have equal length");
  for (double x : states) {
    if (!std::isfinite(x)) throw InvalidArgument("column 'X' contains a non-finite value");
  }
  return DiscreteSample{SamplingScheme(std::move(times)), std::move(states)};
}

DiscreteSample euler_maruyama(const DiffusionModel& model, const SamplingScheme& scheme,
                              double x0, PhiloxStream& gen, const EulerOptions& options) {
  if (options.substeps == 0) throw InvalidArgument("substeps must be at least 1");
  if (!std::isfinite(x0)) throw InvalidArgument("initial state must be finite");
  const auto times = scheme.times();
  const auto substeps = static_cast<double>(options.substeps);
  double x = x0;
  std::size_t step = 0;

  auto advance = [&](double h, double sqrt_h) {
    const double xi = standard_normal(gen);
    x += model.drift(x) * h + model.diffusion(x) * sqrt_h * xi;
    ++step;
    if (!std::isfinite(x))
      throw RuntimeError("trajectory diverged at step " + std::to_string(step));
    return sqrt_h * xi;
  };

  if (options.burn_in > 0.0) {
    const double h = (times[1] - times[0]) / substeps;
    const auto steps = static_cast<std::size_t>(std::ceil(options.burn_in / h));
    const double sqrt_h = std::sqrt(h);
    for (std::size_t k = 0; k < steps; ++k) advance(h, sqrt_h);
  }

  std::vector<double> states(times.size());
  states[0] = x;
  if (options.brownian_increments) options.brownian_increments->assign(scheme.n(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = (times[i] - times[i - 1]) / substeps;
    const double sqrt_h = std::sqrt(h);
    double dw = 0.0;
    for (std::size_t k = 0; k < options.substeps; ++k) dw += advance(h, sqrt_h);
    states[i] = x;
    if (options.brownian_increments) (*options.brownian_increments)[i - 1] = dw;
  }
  return DiscreteSample{scheme, std::move(states)};
}

CumulativeTable::CumulativeTable(double lo, double hi, std::vector<double> node_density)
    : lo_(lo), hi_(hi), density_(std::move(node_density)) {
  if (density_.size() < 2 || !(hi > lo)) throw InvalidArgument("invalid cumulative table grid");
  step_ = (hi_ - lo_) / static_cast<double>(density_.size() - 1);
  cumulative_.resize(density_.size());
  cumulative_[0] = 0.0;
  for (std::size_t k = 1; k < density_.size(); ++k) {
    if (!(density_[k] >= 0.0) || !std::isfinite(density_[k]))
      throw InvalidArgument("density must be finite and non-negative");
    cumulative_[k] = cumulative_[k - 1] + 0.5 * step_ * (density_[k - 1] + density_[k]);
  }
}

double CumulativeTable::density(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  const double pos = (x - lo_) / step_;
  const auto k = std::min(static_cast<std::size_t>(pos), density_.size() - 2);
  const double frac = pos - static_cast<double>(k);
  return density_[k] + (density_[k + 1] - density_[k]) * frac;
}

double CumulativeTable::cumulative(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return total();
  const double pos = (x - lo_) / step_;
  const auto k = std::min(static_cast<std::size_t>(pos), density_.size() - 2);
  const double t = x - node(k);
  const double slope = (density_[k + 1] - density_[k]) / step_;
  return cumulative_[k] + density_[k] * t + 0.5 * slope * t * t;
}

double CumulativeTable::inverse(double level) const {
  if (level <= 0.0) return lo_;
  if (level >= total()) return hi_;
  // First node whose cumulative value reaches the level.
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), level);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin(), 1)) - 1;
  const double remaining = level - cumulative_[k];
  const double f0 = density_[k];
  const double half_slope = 0.5 * (density_[k + 1] - density_[k]) / step_;
  // Solve f0 t + half_slope t^2 = remaining in the cancellation-free form.
  const double disc = std::max(0.0, f0 * f0 + 4.0 * half_slope * remaining);
  const double denom = f0 + std::sqrt(disc);
  double t = denom > 0.0 ? 2.0 * remaining / denom : 0.0;
  t = std::clamp(t, 0.0, step_);
  return node(k) + t;
}

InvariantLaw::InvariantLaw(CumulativeTable table, double second_abs_moment,
                           double third_abs_moment)
    : table_(std::move(table)), second_(second_abs_moment), third_(third_abs_moment) {}

double InvariantLaw::cdf(double x) const {
  return table_.cumulative(x) / table_.total();
}

double InvariantLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  return table_.inverse(p * table_.total());
}

InvariantLaw invariant_law(const DiffusionModel& model, std::pair<double, double> domain,
                           std::size_t points) {
  const auto [lo, hi] = domain;
  if (!(hi > lo) || points < 3) throw InvalidArgument("invalid invariant-law domain");
  const double h = (hi - lo) / static_cast<double>(points - 1);

  // Log of the unnormalized speed density; the reference point of the
  // integral only changes the normalization.
  std::vector<double> log_density(points);
  double integral = 0.0;
  double previous_integrand = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = lo + h * static_cast<double>(k);
    const double sigma = model.diffusion(x);
    if (!(sigma > 0.0)) throw InvalidArgument("diffusion coefficient must be positive on domain");
    const double integrand = 2.0 * model.drift(x) / (sigma * sigma);
    if (k > 0) integral += 0.5 * h * (previous_integrand + integrand);
    previous_integrand = integrand;
    log_density[k] = integral - 2.0 * std::log(sigma);
  }
  const double peak = *std::max_element(log_density.begin(), log_density.end());
  std::vector<double> density(points);
  for (std::size_t k = 0; k < points; ++k) density[k] = std::exp(log_density[k] - peak);
  if (!std::isfinite(peak) || density.front() > kBoundaryDensityTolerance ||
      density.back() > kBoundaryDensityTolerance)
    throw InvalidArgument("model not positive recurrent on domain");

  CumulativeTable unnormalized(lo, hi, density);
  const double mass = unnormalized.total();
  for (double& d : density) d /= mass;

  double second = 0.0;
  double third = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = std::abs(lo + h * static_cast<double>(k));
    const double w = (k == 0 || k + 1 == points) ? 0.5 * h : h;
    second += w * density[k] * x * x;
    third += w * density[k] * x * x * x;
  }
  return InvariantLaw(CumulativeTable(lo, hi, std::move(density)), second, third);
}

PsiFunction psi_function(const DiffusionModel& model, const InvariantLaw& law) {
  const CumulativeTable& table = law.table();
  std::vector<double> weighted(table.nodes());
  const double mass = table.total();
  for (std::size_t k = 0; k < weighted.size(); ++k) {
    const double x = table.node(k);
    const double sigma = model.diffusion(x);
    weighted[k] = sigma * sigma * table.density(x) / mass;
  }
  return PsiFunction(CumulativeTable(table.lo(), table.hi(), std::move(weighted)));
}

double stationary_start(const InvariantLaw& law, PhiloxStream& gen) {
  return law.quantile(gen.uniform());
}

}  // namespace mepgof
