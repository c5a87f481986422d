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

#ifndef MEPGOF_STATS_HPP_
#define MEPGOF_STATS_HPP_

#include <cstddef>
#include <span>

namespace mepgof {

double mean(std::span<const double> x);
// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> x);

// sup_x |F_a(x) - F_b(x)| between the two empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// sqrt(p (1 - p) / count).
double binomial_standard_error(double rate, std::size_t count);

// Number of consecutive pairs where values[k + 1] > values[k].
std::size_t count_increases(std::span<const double> values);
// Number of consecutive pairs where values[k + 1] < values[k].
std::size_t count_decreases(std::span<const double> values);

}  // namespace mepgof

#endif  // MEPGOF_STATS_HPP_
