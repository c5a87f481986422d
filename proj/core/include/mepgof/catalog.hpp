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

// Model lookup by name and parameter set.
//
//   ou       dX = -theta X dt + sigma dW
//   tanh     dX = (-theta X + a tanh X) dt + sigma dW
//   ar1      X_i = rho X_{i-1} + sigma e_i
//   tanh-ar  X_i = rho X_{i-1} + a tanh(X_{i-1}) + sigma e_i

#ifndef MEPGOF_CATALOG_HPP_
#define MEPGOF_CATALOG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "mepgof/sde.hpp"
#include "mepgof/ts_gof.hpp"

namespace mepgof {

struct ModelSpec {
  std::string name = "ou";
  double theta = 1.0;
  double sigma = 1.0;
  double a = 0.5;
  double rho = 0.5;
  NoiseKind noise = NoiseKind::kNormal;
};

bool is_diffusion_model(const std::string& name);
bool is_ts_model(const std::string& name);

// Throws InvalidArgument naming the model or parameter on bad input.
DiffusionModel make_diffusion_model(const ModelSpec& spec);
TimeSeriesModel make_ts_model(const ModelSpec& spec, double delta = 0.0);

inline constexpr std::size_t kEmpiricalLawLength = 1'000'000;

// Null hypothesis for a time-series model: closed-form invariant law for
// AR(1) with normal or Cauchy noise, otherwise a long-run empirical law.
TSHypothesis make_ts_null_hypothesis(const ModelSpec& spec, double psi_floor,
                                     std::uint64_t root_seed);

}  // namespace mepgof

#endif  // MEPGOF_CATALOG_HPP_
