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

// Anderson-Darling type sign test for X_i = S(X_{i-1}) + sigma(X_{i-1}) e_i
// with median-zero noise, H0: S = S0:
//
//   T_n = int (1 / (n Psi(x))) (sum_i sgn(X_i - S0(X_{i-1})) 1{X_{i-1} <= x})^2 mu(dx)
//
// where Psi is the distribution function of the invariant law mu. Under H0,
// T_n converges to int_0^1 B(u)^2 / u du. No moments of the noise are needed.

#ifndef MEPGOF_TS_GOF_HPP_
#define MEPGOF_TS_GOF_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mepgof/l2core.hpp"
#include "mepgof/limitlaws.hpp"
#include "mepgof/random.hpp"
#include "mepgof/sde.hpp"
#include "mepgof/test_result.hpp"

namespace mepgof {

enum class NoiseKind { kNormal, kStudentT3, kCauchy };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise(std::string_view text);

// Catalog noise shifted so that P(e <= 0) = 1/2 - delta; delta = 0 gives a
// median-zero law. |delta| < 1/2.
class NoiseLaw {
 public:
  explicit NoiseLaw(NoiseKind kind = NoiseKind::kNormal, double delta = 0.0);

  NoiseKind kind() const { return kind_; }
  double delta() const { return delta_; }
  double location() const { return location_; }

  // Fixed word consumption per draw: normal 1, Cauchy 1, Student-t(3) 4.
  double draw(PhiloxStream& gen) const;
  // CDF of the shifted law.
  double cdf(double x) const;

 private:
  NoiseKind kind_;
  double delta_;
  double location_;
};

struct TimeSeriesModel {
  std::string name;
  RealFunction location;  // S
  RealFunction scale;     // sigma, bounded below by sigma_min on domain
  NoiseLaw noise;
  double sigma_min = 1.0;
  std::pair<double, double> domain{-50.0, 50.0};
};

// X_i = rho X_{i-1} + s e_i.
TimeSeriesModel ar1_model(double rho, double s = 1.0, NoiseLaw noise = NoiseLaw());
// X_i = rho X_{i-1} + a tanh(X_{i-1}) + s e_i.
TimeSeriesModel tanh_ar_model(double rho, double a, double s = 1.0,
                              NoiseLaw noise = NoiseLaw());

// Grid scan of sigma over the model domain; throws if it drops below
// sigma_min or is not positive.
void check_scale_floor(const TimeSeriesModel& model, std::size_t points = 4097);

// Iterates from x0 through burn_in discarded steps, then records n + 1
// states. Throws RuntimeError on a non-finite state.
std::vector<double> simulate_ts(const TimeSeriesModel& model, std::size_t n,
                                std::size_t burn_in, PhiloxStream& gen, double x0 = 0.0);

inline constexpr double kDefaultPsiFloor = 1e-4;
inline constexpr std::size_t kTsMeasureAtoms = 1u << 12;

// Hypothesis: S0 and the invariant law mu of the null model with its
// distribution function Psi. The integration measure has equal-mass atoms at
// Psi-levels u_k = floor + (k + 1/2) (1 - floor) / M, so every atom has
// Psi >= floor and the mass below the floor is truncated.
struct TSHypothesis {
  std::string name;
  RealFunction location;  // S0
  RealFunction cdf;       // Psi
  RealFunction density;   // of mu
  std::pair<double, double> domain;
  QuadratureMeasure measure;
  std::vector<double> psi_at_atoms;
  double psi_floor = kDefaultPsiFloor;
  // True when Psi comes from a long simulated run rather than a closed form.
  bool approximate = false;
};

TSHypothesis make_ts_hypothesis(std::string name, RealFunction location, RealFunction cdf,
                                RealFunction density, const RealFunction& quantile,
                                std::pair<double, double> domain,
                                double psi_floor = kDefaultPsiFloor,
                                std::size_t atoms = kTsMeasureAtoms);

// AR(1), normal noise: mu = N(0, s^2 / (1 - rho^2)).
TSHypothesis ar1_normal_hypothesis(double rho, double s = 1.0,
                                   double psi_floor = kDefaultPsiFloor);
// AR(1), Cauchy noise: mu = Cauchy(0, s / (1 - |rho|)).
TSHypothesis ar1_cauchy_hypothesis(double rho, double s = 1.0,
                                   double psi_floor = kDefaultPsiFloor);
// Psi estimated from a long run of the null model with median-zero noise,
// drawn from the auxiliary stream block. The histogram of the run is
// smoothed onto a grid; approximate by construction.
TSHypothesis empirical_ts_hypothesis(const TimeSeriesModel& null_model, std::size_t length,
                                     std::uint64_t root_seed,
                                     double psi_floor = kDefaultPsiFloor);

// sgn(x) = -1{x < 0} + 1{x > 0}; sgn(0) = 0.
inline double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

// Anchors X_{i-1}, marks sgn(X_i - S0(X_{i-1})) / sqrt(n). Needs at least
// two states.
MarkedSample sign_marks(std::span<const double> series, const RealFunction& location);

struct AdOptions {
  // Replace Psi in the weight by the empirical CDF of the anchors.
  // Experimental; its limit law is not established.
  bool plugin_weight = false;
};

double ad_statistic(const MarkedSample& marks, const TSHypothesis& hyp,
                    const AdOptions& options = {});
double ad_statistic(std::span<const double> series, const TSHypothesis& hyp,
                    const AdOptions& options = {});

// Largest possible |change| of T_n when one observation is replaced by an
// arbitrary value: 8 sum_k w_k / Psi(a_k) over atoms above the floor. Never
// exceeds 8 / psi_floor, whatever n.
double outlier_sensitivity_bound(const TSHypothesis& hyp);

struct ConditionBDiagnostic {
  double value = 0.0;         // finer resolution
  double coarse_value = 0.0;  // half the resolution
  bool warn = false;          // relative change above 5%
};

inline constexpr std::size_t kConditionBPoints = 1u << 15;

// Midpoint quadrature of int mu(dx) / sqrt(Psi(x)) over the hypothesis
// domain at `points` and `points / 2` cells.
ConditionBDiagnostic condition_b_diagnostic(const TSHypothesis& hyp,
                                            std::size_t points = kConditionBPoints);

TestResult ts_test(std::span<const double> series, const TSHypothesis& hyp, double alpha,
                   const LimitLawSample& limit_sample, const AdOptions& options = {});

}  // namespace mepgof

#endif  // MEPGOF_TS_GOF_HPP_
