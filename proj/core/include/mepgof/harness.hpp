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

// Monte Carlo campaigns: size, power and weak-convergence studies.
//
// Replication r always draws from stream r under the root seed, for every
// sample size and every alternative rung, so rungs share their noise and
// the zero rung of a power study reproduces the size study. Limit-law
// samples use the reserved stream blocks. Results are merged in index
// order: reports do not depend on the worker count.

#ifndef MEPGOF_HARNESS_HPP_
#define MEPGOF_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mepgof/catalog.hpp"
#include "mepgof/random.hpp"

namespace mepgof {

enum class StudyKind { kSize, kPower, kConvergence };
enum class TestKind { kDiffusion, kTimeSeries };

std::string_view to_string(StudyKind kind);
std::string_view to_string(TestKind kind);

// Stream block for the quadrature-based limits of ||Z||^2 and ||Z^w||^2.
inline constexpr std::uint64_t kNormLimitStreamBase = kLimitLawStreamBase + (1ULL << 40);

struct ExperimentSpec {
  StudyKind kind = StudyKind::kSize;
  ModelSpec model;  // the test kind follows from the model name
  std::vector<std::size_t> n_grid{10'000};
  std::size_t replications = 1000;
  double alpha = 0.05;
  std::uint64_t root_seed = kDefaultRootSeed;
  // Limit-law grid size; 0 selects the functional's default.
  std::size_t limit_K = 0;
  std::size_t limit_paths = 100'000;
  // Draws compared against in KS distances (a prefix of the limit sample).
  std::size_t ks_limit_draws = 10'000;
  // Power rungs. Diffusion: shift added to the hypothesized drift.
  // Time series: delta of the data noise, P(e <= 0) = 1/2 - delta.
  std::vector<double> ladder{0.0};
  // High-frequency scheme and Euler refinement.
  double beta = 2.0 / 3.0;
  double c = 1.0;
  std::size_t substeps = 10;
  // Time-series settings.
  double psi_floor = 1e-4;
  std::size_t burn_in = 1000;
  bool plugin_weight = false;
  std::size_t workers = 0;

  TestKind test() const;
};

// Throws InvalidArgument naming the offending field.
void validate(const ExperimentSpec& spec);

struct ReportRow {
  std::size_t n = 0;
  double magnitude = 0.0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double rejection_rate = 0.0;
  double std_error = 0.0;
  double statistic_mean = 0.0;
  double statistic_variance = 0.0;
  std::optional<double> ks_statistic;
  std::optional<double> ks_norm;
  std::optional<double> ks_weighted_norm;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ReportRow> rows;
  std::size_t limit_K = 0;
  double critical_value = 0.0;
  double elapsed_seconds = 0.0;
  // Per-row statistic draws in replication order (successful ones only).
  std::vector<std::vector<double>> statistics;
};

ExperimentReport run_size_study(const ExperimentSpec& spec);
ExperimentReport run_power_study(const ExperimentSpec& spec);
ExperimentReport run_convergence_study(const ExperimentSpec& spec);
ExperimentReport run_study(const ExperimentSpec& spec);

// Columns: study,test,n,magnitude,replications,failures,rejection_rate,
// std_error,statistic_mean,statistic_variance,ks_statistic,ks_norm,
// ks_weighted_norm (empty cell where not applicable).
void write_report_csv(std::ostream& out, const ExperimentReport& report);

// Sidecar JSON: spec echo, seeds, limit-law identity and timings. The
// effective configuration, when given, is stored verbatim under
// "effective_config" so the run can be replayed from the sidecar.
std::string report_sidecar_json(const ExperimentReport& report,
                                const std::string& effective_config_json = "{}");

std::string spec_to_json(const ExperimentSpec& spec);

}  // namespace mepgof

#endif  // MEPGOF_HARNESS_HPP_
