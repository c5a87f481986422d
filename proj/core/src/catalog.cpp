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

#include "mepgof/catalog.hpp"

#include "mepgof/error.hpp"

namespace mepgof {

bool is_diffusion_model(const std::string& name) { return name == "ou" || name == "tanh"; }
bool is_ts_model(const std::string& name) { return name == "ar1" || name == "tanh-ar"; }

DiffusionModel make_diffusion_model(const ModelSpec& spec) {
  if (spec.name == "ou") return ou_model(spec.theta, spec.sigma);
  if (spec.name == "tanh") return tanh_drift_model(spec.theta, spec.a, spec.sigma);
  throw InvalidArgument("unknown diffusion model '" + spec.name + "' (expected ou or tanh)");
}

TimeSeriesModel make_ts_model(const ModelSpec& spec, double delta) {
  const NoiseLaw noise(spec.noise, delta);
  if (spec.name == "ar1") return ar1_model(spec.rho, spec.sigma, noise);
  if (spec.name == "tanh-ar") return tanh_ar_model(spec.rho, spec.a, spec.sigma, noise);
  throw InvalidArgument("unknown time-series model '" + spec.name +
                        "' (expected ar1 or tanh-ar)");
}

TSHypothesis make_ts_null_hypothesis(const ModelSpec& spec, double psi_floor,
                                     std::uint64_t root_seed) {
  if (spec.name == "ar1" && spec.noise == NoiseKind::kNormal)
    return ar1_normal_hypothesis(spec.rho, spec.sigma, psi_floor);
  if (spec.name == "ar1" && spec.noise == NoiseKind::kCauchy)
    return ar1_cauchy_hypothesis(spec.rho, spec.sigma, psi_floor);
  return empirical_ts_hypothesis(make_ts_model(spec), kEmpiricalLawLength, root_seed,
                                 psi_floor);
}

}  // namespace mepgof
