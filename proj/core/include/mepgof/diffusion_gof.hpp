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

// Cramer-von Mises type test of a simple drift hypothesis H0: S = S0 for a
// diffusion with known sigma, observed at high frequency.
//
// Residual marks  m_i = (X_i - X_{i-1} - S0(X_{i-1}) (t_i - t_{i-1})) / sqrt(T)
// build U_n(x) = sum_i 1{X_{i-1} <= x} m_i, and
//
//   D_n = int U_n(x)^2 / Psi(inf)  Psi(dx) / Psi(inf),
//
// which converges to int_0^1 B(u)^2 du under H0.

#ifndef MEPGOF_DIFFUSION_GOF_HPP_
#define MEPGOF_DIFFUSION_GOF_HPP_

#include <cstddef>
#include <span>
#include <string>

#include "mepgof/l2core.hpp"
#include "mepgof/limitlaws.hpp"
#include "mepgof/sde.hpp"
#include "mepgof/test_result.hpp"

namespace mepgof {

inline constexpr std::size_t kPsiMeasureAtoms = 1u << 12;
inline constexpr double kPsiMeasureLowerLevel = 0.0005;
inline constexpr double kPsiMeasureUpperLevel = 0.9995;

struct DiffusionHypothesis {
  std::string name;
  RealFunction drift;      // S0
  RealFunction diffusion;  // known sigma
  PsiFunction psi;
  // Psi(dx) / Psi(inf) on atoms; total mass 1.
  QuadratureMeasure measure;
};

// Discretizes Psi_{S0,sigma}(dx)/Psi(inf) onto `atoms` equally spaced points
// between the invariant law's lower and upper quantile levels. Each atom
// carries the Psi-mass of its cell; the two tails are lumped onto the end
// atoms so that the total mass is exactly 1.
DiffusionHypothesis make_diffusion_hypothesis(const DiffusionModel& null_model,
                                              std::size_t atoms = kPsiMeasureAtoms);

MarkedSample residual_marks(const DiscreteSample& sample, const RealFunction& drift);

// sigma(X_{i-1}) (W_{t_i} - W_{t_{i-1}}) / sqrt(T): the martingale part of
// the residual marks, available when the Brownian increments were recorded.
MarkedSample martingale_marks(const DiscreteSample& sample, const RealFunction& diffusion,
                              std::span<const double> brownian_increments);

StepFunctionProcess u_process(const DiscreteSample& sample, const RealFunction& drift);

double cvm_statistic(const StepFunctionProcess& u, const DiffusionHypothesis& hyp);
double cvm_statistic(const DiscreteSample& sample, const DiffusionHypothesis& hyp);

TestResult diffusion_test(const DiscreteSample& sample, const DiffusionHypothesis& hyp,
                          double alpha, const LimitLawSample& limit_sample);

}  // namespace mepgof

#endif  // MEPGOF_DIFFUSION_GOF_HPP_
