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

#include "mepgof/diffusion_gof.hpp"

#include <cmath>

#include "mepgof/csv.hpp"
#include "mepgof/error.hpp"

namespace mepgof {

DiffusionHypothesis make_diffusion_hypothesis(const DiffusionModel& null_model,
                                              std::size_t atoms) {
  if (atoms < 2) throw InvalidArgument("Psi measure needs at least two atoms");
  const InvariantLaw law = invariant_law(null_model);
  PsiFunction psi = psi_function(null_model, law);
  const double total = psi.total_mass();
  if (!(total > 0.0)) throw InvalidArgument("Psi(inf) must be positive");

  const double lo = law.quantile(kPsiMeasureLowerLevel);
  const double hi = law.quantile(kPsiMeasureUpperLevel);
  const double h = (hi - lo) / static_cast<double>(atoms - 1);
  std::vector<double> grid(atoms);
  std::vector<double> weights(atoms);
  for (std::size_t k = 0; k < atoms; ++k) grid[k] = lo + h * static_cast<double>(k);
  double previous = 0.0;
  for (std::size_t k = 0; k + 1 < atoms; ++k) {
    const double boundary = psi(grid[k] + 0.5 * h);
    weights[k] = (boundary - previous) / total;
    previous = boundary;
  }
  weights[atoms - 1] = (total - previous) / total;

  return DiffusionHypothesis{
      null_model.name, null_model.drift, null_model.diffusion, std::move(psi),
      QuadratureMeasure(QuadratureMeasure::Kind::kDensityOnGrid, std::move(grid),
                        std::move(weights))};
}

MarkedSample residual_marks(const DiscreteSample& sample, const RealFunction& drift) {
  const double horizon = sample.scheme.horizon();
  if (!(horizon > 0.0)) throw InvalidArgument("zero horizon");
  const auto t = sample.scheme.times();
  const auto& x = sample.states;
  const std::size_t n = sample.scheme.n();
  const double scale = 1.0 / std::sqrt(horizon);
  std::vector<double> anchors(n);
  std::vector<double> marks(n);
  for (std::size_t i = 1; i <= n; ++i) {
    anchors[i - 1] = x[i - 1];
    marks[i - 1] = (x[i] - x[i - 1] - drift(x[i - 1]) * (t[i] - t[i - 1])) * scale;
  }
  return MarkedSample(std::move(anchors), std::move(marks));
}

MarkedSample martingale_marks(const DiscreteSample& sample, const RealFunction& diffusion,
                              std::span<const double> brownian_increments) {
  const std::size_t n = sample.scheme.n();
  if (brownian_increments.size() != n)
    throw InvalidArgument("need one Brownian increment per observation interval");
  const double scale = 1.0 / std::sqrt(sample.scheme.horizon());
  std::vector<double> anchors(sample.states.begin(), sample.states.end() - 1);
  std::vector<double> marks(n);
  for (std::size_t i = 0; i < n; ++i)
    marks[i] = diffusion(anchors[i]) * brownian_increments[i] * scale;
  return MarkedSample(std::move(anchors), std::move(marks));
}

StepFunctionProcess u_process(const DiscreteSample& sample, const RealFunction& drift) {
  return build_marked_process(residual_marks(sample, drift));
}

double cvm_statistic(const StepFunctionProcess& u, const DiffusionHypothesis& hyp) {
  const double total = hyp.psi.total_mass();
  if (!(total > 0.0)) throw InvalidArgument("Psi(inf) must be positive");
  return l2_norm_squared(u, hyp.measure) / total;
}

double cvm_statistic(const DiscreteSample& sample, const DiffusionHypothesis& hyp) {
  return cvm_statistic(u_process(sample, hyp.drift), hyp);
}

TestResult diffusion_test(const DiscreteSample& sample, const DiffusionHypothesis& hyp,
                          double alpha, const LimitLawSample& limit_sample) {
  if (limit_sample.functional != Functional::kCvm) throw InvalidArgument("wrong limit law");
  TestResult result = decide("cvm-diffusion", cvm_statistic(sample, hyp), alpha, limit_sample);
  result.n = sample.scheme.n();
  result.metadata.emplace_back("hypothesis", hyp.name);
  result.metadata.emplace_back("horizon", format_real(sample.scheme.horizon()));
  result.metadata.emplace_back("delta_max", format_real(sample.scheme.delta_max()));
  result.metadata.emplace_back("psi_total_mass", format_real(hyp.psi.total_mass()));
  result.metadata.emplace_back("measure_atoms", std::to_string(hyp.measure.size()));
  return result;
}

}  // namespace mepgof
