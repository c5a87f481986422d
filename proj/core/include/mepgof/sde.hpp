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

// Scalar diffusions dX = S(X) dt + sigma(X) dW: model catalog, high-frequency
// observation schemes, Euler-Maruyama simulation, and the invariant law
// together with the variance profile Psi(x) = int_{-inf}^x sigma^2 dmu.

#ifndef MEPGOF_SDE_HPP_
#define MEPGOF_SDE_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mepgof/random.hpp"

namespace mepgof {

using RealFunction = std::function<double(double)>;

struct DiffusionModel {
  std::string name;
  RealFunction drift;
  RealFunction diffusion;
  std::optional<double> lipschitz_hint;
  // Interval carrying all but a negligible part of the invariant law.
  std::pair<double, double> domain{-10.0, 10.0};
};

// dX = -theta X dt + s dW. Invariant law N(0, s^2 / (2 theta)).
DiffusionModel ou_model(double theta, double s);

// dX = (-theta X + a tanh X) dt + s dW. Lipschitz with constant theta + |a|.
DiffusionModel tanh_drift_model(double theta, double a, double s);

// Same model with drift S(x) + shift.
DiffusionModel with_drift_shift(const DiffusionModel& model, double shift);

// Observation times 0 = t_0 < t_1 < ... < t_n. Spacing and horizon are
// derived from the stored times.
class SamplingScheme {
 public:
  // Times must start at 0 and increase strictly; at least two entries.
  explicit SamplingScheme(std::vector<double> times);

  std::size_t n() const { return times_.size() - 1; }
  std::span<const double> times() const { return times_; }
  double delta_max() const;
  double horizon() const { return times_.back(); }

 private:
  std::vector<double> times_;
};

// Uniform spacing c n^-beta. For 1/2 < beta < 1 the horizon c n^(1-beta)
// grows while n Delta^2 = c^2 n^(1-2 beta) vanishes.
SamplingScheme make_scheme(std::size_t n, double beta, double c);

struct DiscreteSample {
  SamplingScheme scheme;
  std::vector<double> states;  // X at scheme.times(), n + 1 entries

  // CSV columns t,X.
  void write_csv(std::ostream& out) const;
};

// Builds a sample from (t, X) columns. Throws if t is not strictly
// increasing from 0 or the lengths differ.
DiscreteSample make_discrete_sample(std::vector<double> times, std::vector<double> states);

struct EulerOptions {
  std::size_t substeps = 10;
  // Simulated time discarded before t_0.
  double burn_in = 0.0;
  // When set, receives W(t_i) - W(t_{i-1}) for each observation interval.
  std::vector<double>* brownian_increments = nullptr;
};

// Euler-Maruyama with `substeps` equal internal steps per observation
// interval. Throws RuntimeError("trajectory diverged at step k") on a
// non-finite state.
DiscreteSample euler_maruyama(const DiffusionModel& model, const SamplingScheme& scheme,
                              double x0, PhiloxStream& gen, const EulerOptions& options = {});

// A distribution-like function on a uniform grid: nonnegative node
// densities, linear between nodes, with the cumulative integral exact for
// that interpolant (quadratic within a cell). Shared by the invariant law
// and Psi.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(double lo, double hi, std::vector<double> node_density);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t nodes() const { return density_.size(); }
  double node(std::size_t k) const { return lo_ + step_ * static_cast<double>(k); }
  double total() const { return cumulative_.back(); }

  double density(double x) const;
  double cumulative(double x) const;
  // Smallest x with cumulative(x) = level; level in [0, total()].
  double inverse(double level) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  double step_ = 1.0;
  std::vector<double> density_;
  std::vector<double> cumulative_;
};

class InvariantLaw {
 public:
  InvariantLaw(CumulativeTable table, double second_abs_moment, double third_abs_moment);

  double density(double x) const { return table_.density(x); }
  double cdf(double x) const;
  // p in (0, 1).
  double quantile(double p) const;
  std::pair<double, double> support() const { return {table_.lo(), table_.hi()}; }
  double second_abs_moment() const { return second_; }
  double third_abs_moment() const { return third_; }
  const CumulativeTable& table() const { return table_; }

 private:
  CumulativeTable table_;
  double second_;
  double third_;
};

inline constexpr std::size_t kInvariantLawPoints = (1u << 14) + 1;

// Speed-measure density m(x) ∝ sigma(x)^-2 exp(int_0^x 2 S / sigma^2),
// normalized by the trapezoid rule on a uniform grid over `domain`. Throws
// InvalidArgument("model not positive recurrent on domain") if the density
// does not decay at the ends of the domain.
InvariantLaw invariant_law(const DiffusionModel& model, std::pair<double, double> domain,
                           std::size_t points = kInvariantLawPoints);
inline InvariantLaw invariant_law(const DiffusionModel& model) {
  return invariant_law(model, model.domain);
}

// x -> int_{-inf}^x sigma(z)^2 mu(dz).
class PsiFunction {
 public:
  explicit PsiFunction(CumulativeTable table) : table_(std::move(table)) {}

  double operator()(double x) const { return table_.cumulative(x); }
  double total_mass() const { return table_.total(); }
  double inverse(double level) const { return table_.inverse(level); }

 private:
  CumulativeTable table_;
};

PsiFunction psi_function(const DiffusionModel& model, const InvariantLaw& law);

// quantile(U) with U uniform on (0, 1).
double stationary_start(const InvariantLaw& law, PhiloxStream& gen);

}  // namespace mepgof

#endif  // MEPGOF_SDE_HPP_
