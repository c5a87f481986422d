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

// Brownian motion on [0, 1] and Monte Carlo laws of the two limit
// functionals
//
//   CVM:  int_0^1 B(u)^2 du
//   AD:   int_0^1 B(u)^2 / u du      (mean 1)
//
// Both are left-endpoint Riemann sums on a uniform grid of K cells. The AD
// integrand is undefined at u = 0, so the first cell borrows the value at
// u_1; this keeps the discrete mean at exactly 1.

#ifndef MEPGOF_LIMITLAWS_HPP_
#define MEPGOF_LIMITLAWS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mepgof/random.hpp"

namespace mepgof {

enum class Functional { kCvm, kAd };

std::string_view to_string(Functional f);
// Accepts "cvm" or "ad" (case-insensitive).
Functional parse_functional(std::string_view text);

// Default grid sizes and path counts.
inline constexpr std::size_t kDefaultCvmGrid = 2048;
inline constexpr std::size_t kDefaultAdGrid = 4096;
inline constexpr std::size_t kTestPaths = 100'000;
inline constexpr std::size_t kGoldenPaths = 1'000'000;

inline std::size_t default_grid(Functional f) {
  return f == Functional::kCvm ? kDefaultCvmGrid : kDefaultAdGrid;
}

// Values at u_k = k/K, k = 0..K, with values[0] = 0.
struct BMPath {
  std::vector<double> values;

  std::size_t cells() const { return values.empty() ? 0 : values.size() - 1; }
  double grid_point(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(cells());
  }
};

BMPath simulate_bm(std::size_t K, PhiloxStream& gen);
// Builds the path from given N(0,1) innovations, one per cell.
BMPath bm_from_innovations(std::span<const double> innovations);

double cvm_functional(const BMPath& path);
// Requires at least two cells.
double ad_functional(const BMPath& path);
double evaluate_functional(Functional f, const BMPath& path);

struct LimitLawSample {
  Functional functional = Functional::kCvm;
  std::vector<double> draws;  // draws[p] comes from stream base + p
  std::size_t K = 0;
  std::size_t n_paths = 0;
  SeedSpec seed;  // stream_id holds the base of the path stream block
};

// Path p uses stream kLimitLawStreamBase + p under root_seed; the result is
// identical for every worker count.
LimitLawSample sample_limit_law(Functional f, std::size_t K, std::size_t n_paths,
                                std::uint64_t root_seed, std::size_t workers = 0);

// Empirical (1 - alpha)-quantile: the ceil((1 - alpha) N)-th order
// statistic. alpha must lie in (0, 1).
double critical_value(const LimitLawSample& sample, double alpha);

double limit_quantile(Functional f, double alpha, std::size_t K, std::size_t n_paths,
                      std::uint64_t root_seed, std::size_t workers = 0);

// (#{draws >= statistic} + 1) / (n_paths + 1).
double p_value(double statistic, const LimitLawSample& sample);

// Golden critical-value table, CSV columns
//   functional,alpha,K,n_paths,root_seed,critical_value
struct GoldenRow {
  Functional functional;
  double alpha;
  std::size_t K;
  std::size_t n_paths;
  std::uint64_t root_seed;
  double critical_value;
};

inline constexpr double kGoldenAlphas[] = {0.10, 0.05, 0.01};
inline constexpr double kGoldenRelativeTolerance = 0.005;

// One sample per functional; rows for each alpha in kGoldenAlphas.
std::vector<GoldenRow> generate_golden_rows(Functional f, std::size_t K,
                                            std::size_t n_paths,
                                            std::uint64_t root_seed,
                                            std::size_t workers = 0);
void write_golden_table(std::ostream& out, std::span<const GoldenRow> rows);
std::vector<GoldenRow> read_golden_table(const std::filesystem::path& path);

}  // namespace mepgof

#endif  // MEPGOF_LIMITLAWS_HPP_
