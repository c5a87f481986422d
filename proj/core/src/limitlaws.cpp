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

#include "mepgof/limitlaws.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

#include "mepgof/csv.hpp"
#include "mepgof/error.hpp"
#include "mepgof/parallel.hpp"

namespace mepgof {
namespace {

void fill_path(std::size_t K, PhiloxStream& gen, std::vector<double>& values) {
  values.resize(K + 1);
  const double scale = std::sqrt(1.0 / static_cast<double>(K));
  values[0] = 0.0;
  for (std::size_t k = 1; k <= K; ++k) values[k] = values[k - 1] + scale * standard_normal(gen);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("alpha must lie in (0, 1), got " + format_real(alpha));
}

}  // namespace

std::string_view to_string(Functional f) {
  return f == Functional::kCvm ? "cvm" : "ad";
}

Functional parse_functional(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cvm") return Functional::kCvm;
  if (lower == "ad") return Functional::kAd;
  throw InvalidArgument("unknown functional '" + std::string(text) + "' (expected cvm or ad)");
}

BMPath simulate_bm(std::size_t K, PhiloxStream& gen) {
  if (K == 0) throw InvalidArgument("Brownian path needs K >= 1");
  BMPath path;
  fill_path(K, gen, path.values);
  return path;
}

BMPath bm_from_innovations(std::span<const double> innovations) {
  const std::size_t K = innovations.size();
  if (K == 0) throw InvalidArgument("Brownian path needs K >= 1");
  const double scale = std::sqrt(1.0 / static_cast<double>(K));
  BMPath path;
  path.values.resize(K + 1);
  path.values[0] = 0.0;
  for (std::size_t k = 1; k <= K; ++k)
    path.values[k] = path.values[k - 1] + scale * innovations[k - 1];
  return path;
}

double cvm_functional(const BMPath& path) {
  const std::size_t K = path.cells();
  if (K == 0) throw InvalidArgument("empty Brownian path");
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) sum += path.values[k] * path.values[k];
  return sum / static_cast<double>(K);
}

double ad_functional(const BMPath& path) {
  const std::size_t K = path.cells();
  if (K < 2) throw InvalidArgument("AD functional needs K >= 2");
  const double h = 1.0 / static_cast<double>(K);
  // First cell [0, u_1) uses the integrand at u_1.
  double sum = path.values[1] * path.values[1] / path.grid_point(1);
  for (std::size_t k = 1; k < K; ++k)
    sum += path.values[k] * path.values[k] / path.grid_point(k);
  return sum * h;
}

double evaluate_functional(Functional f, const BMPath& path) {
  return f == Functional::kCvm ? cvm_functional(path) : ad_functional(path);
}

LimitLawSample sample_limit_law(Functional f, std::size_t K, std::size_t n_paths,
                                std::uint64_t root_seed, std::size_t workers) {
  if (n_paths == 0) throw InvalidArgument("n_paths must be positive");
  if (K == 0 || (f == Functional::kAd && K < 2))
    throw InvalidArgument("grid size too small for the functional");
  LimitLawSample sample;
  sample.functional = f;
  sample.K = K;
  sample.n_paths = n_paths;
  sample.seed = {root_seed, kLimitLawStreamBase};
  sample.draws.resize(n_paths);

  // Paths are processed in chunks so each worker reuses one buffer.
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (n_paths + kChunk - 1) / kChunk;
  parallel_for(chunks, workers == 0 ? default_workers() : workers, [&](std::size_t c) {
    BMPath path;
    const std::size_t end = std::min(n_paths, (c + 1) * kChunk);
    for (std::size_t p = c * kChunk; p < end; ++p) {
      PhiloxStream gen(SeedSpec{root_seed, kLimitLawStreamBase + p});
      fill_path(K, gen, path.values);
      sample.draws[p] = evaluate_functional(f, path);
    }
  });
  return sample;
}

double critical_value(const LimitLawSample& sample, double alpha) {
  check_alpha(alpha);
  if (sample.draws.empty()) throw InvalidArgument("empty limit-law sample");
  const double n = static_cast<double>(sample.draws.size());
  // 1-based rank ceil((1 - alpha) n), clamped into [1, n].
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sample.draws.size());
  std::vector<double> copy = sample.draws;
  auto nth = copy.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(copy.begin(), nth, copy.end());
  return *nth;
}

double limit_quantile(Functional f, double alpha, std::size_t K, std::size_t n_paths,
                      std::uint64_t root_seed, std::size_t workers) {
  check_alpha(alpha);
  return critical_value(sample_limit_law(f, K, n_paths, root_seed, workers), alpha);
}

double p_value(double statistic, const LimitLawSample& sample) {
  if (!(statistic >= 0.0)) throw InvalidArgument("statistic must be non-negative");
  const auto exceed = std::count_if(sample.draws.begin(), sample.draws.end(),
                                    [statistic](double d) { return d >= statistic; });
  return static_cast<double>(exceed + 1) / static_cast<double>(sample.draws.size() + 1);
}

std::vector<GoldenRow> generate_golden_rows(Functional f, std::size_t K,
                                            std::size_t n_paths,
                                            std::uint64_t root_seed,
                                            std::size_t workers) {
  const LimitLawSample sample = sample_limit_law(f, K, n_paths, root_seed, workers);
  std::vector<GoldenRow> rows;
  for (double alpha : kGoldenAlphas)
    rows.push_back({f, alpha, K, n_paths, root_seed, critical_value(sample, alpha)});
  return rows;
}

void write_golden_table(std::ostream& out, std::span<const GoldenRow> rows) {
  CsvWriter csv(out, {"functional", "alpha", "K", "n_paths", "root_seed", "critical_value"});
  for (const GoldenRow& r : rows)
    csv.row({std::string(to_string(r.functional)), r.alpha, r.K, r.n_paths,
             static_cast<unsigned long long>(r.root_seed), r.critical_value});
}

std::vector<GoldenRow> read_golden_table(const std::filesystem::path& path) {
  const CsvTable table = CsvTable::read(path);
  const auto functional = table.text_column("functional");
  const auto alpha = table.numeric_column("alpha");
  const auto K = table.text_column("K");
  const auto n_paths = table.text_column("n_paths");
  const auto seed = table.text_column("root_seed");
  const auto cv = table.numeric_column("critical_value");
  std::vector<GoldenRow> rows;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    rows.push_back({parse_functional(functional[r]), alpha[r], std::stoull(K[r]),
                    std::stoull(n_paths[r]), std::stoull(seed[r]), cv[r]});
  }
  return rows;
}

}  // namespace mepgof
