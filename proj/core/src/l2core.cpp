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

#include "mepgof/l2core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "mepgof/csv.hpp"
#include "mepgof/error.hpp"

namespace mepgof {
namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool strictly_increasing(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

// Sorts (anchor, value) pairs and merges ties into one jump with the summed
// value, then accumulates.
StepFunctionProcess accumulate_pairs(std::span<const double> anchors,
                                     std::span<const double> values) {
  std::vector<std::size_t> order(anchors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Ties are ordered by value so tie groups are summed in a canonical order.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return anchors[a] < anchors[b] || (anchors[a] == anchors[b] && values[a] < values[b]);
  });

  std::vector<double> jumps;
  std::vector<double> cumulative;
  jumps.reserve(order.size());
  cumulative.reserve(order.size());
  double running = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double x = anchors[order[k]];
    double group = 0.0;
    for (; k < order.size() && anchors[order[k]] == x; ++k) group += values[order[k]];
    running += group;
    jumps.push_back(x);
    cumulative.push_back(running);
  }
  return StepFunctionProcess(std::move(jumps), std::move(cumulative));
}

}  // namespace

MarkedSample::MarkedSample(std::vector<double> anchors, std::vector<double> marks)
    : anchors_(std::move(anchors)), marks_(std::move(marks)) {
  if (anchors_.empty()) throw InvalidArgument("empty sample");
  if (anchors_.size() != marks_.size())
    throw InvalidArgument("anchors and marks must have equal length");
  if (!all_finite(anchors_) || !all_finite(marks_))
    throw InvalidArgument("marked sample contains non-finite entries");
}

StepFunctionProcess::StepFunctionProcess(std::vector<double> jump_points,
                                         std::vector<double> cumulative_values)
    : jumps_(std::move(jump_points)), values_(std::move(cumulative_values)) {
  if (jumps_.size() != values_.size())
    throw InvalidArgument("jump points and values must have equal length");
  if (!strictly_increasing(jumps_))
    throw InvalidArgument("jump points must be strictly increasing");
}

double StepFunctionProcess::operator()(double x) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

std::vector<double> StepFunctionProcess::evaluate_sorted(
    std::span<const double> sorted_grid) const {
  std::vector<double> out(sorted_grid.size());
  std::size_t j = 0;
  double current = 0.0;
  for (std::size_t k = 0; k < sorted_grid.size(); ++k) {
    while (j < jumps_.size() && jumps_[j] <= sorted_grid[k]) current = values_[j++];
    out[k] = current;
  }
  return out;
}

void StepFunctionProcess::write_csv(std::ostream& out) const {
  CsvWriter csv(out, {"x", "value"});
  for (std::size_t k = 0; k < jumps_.size(); ++k) csv.row({jumps_[k], values_[k]});
}

QuadratureMeasure::QuadratureMeasure(Kind kind, std::vector<double> atoms,
                                     std::vector<double> weights)
    : kind_(kind), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw InvalidArgument("measure has no atoms");
  if (atoms_.size() != weights_.size())
    throw InvalidArgument("atoms and weights must have equal length");
  if (!all_finite(atoms_) || !strictly_increasing(atoms_))
    throw InvalidArgument("measure atoms must be finite and strictly increasing");
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0)
      throw InvalidArgument("measure weights must be finite and non-negative");
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(total_mass_ > 0.0)) throw InvalidArgument("measure total mass must be positive");
}

QuadratureMeasure QuadratureMeasure::from_density(
    const std::function<double(double)>& density, double lo, double hi,
    std::size_t points) {
  if (points < 2 || !(hi > lo)) throw InvalidArgument("invalid density grid");
  const double h = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> atoms(points);
  std::vector<double> weights(points);
  for (std::size_t k = 0; k < points; ++k) {
    atoms[k] = lo + h * static_cast<double>(k);
    const double end_factor = (k == 0 || k + 1 == points) ? 0.5 : 1.0;
    weights[k] = density(atoms[k]) * h * end_factor;
  }
  return QuadratureMeasure(Kind::kDensityOnGrid, std::move(atoms), std::move(weights));
}

StepFunctionProcess build_marked_process(const MarkedSample& sample) {
  return accumulate_pairs(sample.anchors(), sample.marks());
}

TabulatedFunction tabulate(const StepFunctionProcess& process,
                           std::span<const double> eval_grid) {
  if (!std::is_sorted(eval_grid.begin(), eval_grid.end()))
    throw InvalidArgument("evaluation grid must be sorted");
  return {std::vector<double>(eval_grid.begin(), eval_grid.end()),
          process.evaluate_sorted(eval_grid)};
}

TabulatedFunction apply_weight(const StepFunctionProcess& process,
                               const WeightFunction& w,
                               std::span<const double> eval_grid) {
  TabulatedFunction out = tabulate(process, eval_grid);
  for (std::size_t k = 0; k < out.grid.size(); ++k) {
    const double wk = w(out.grid[k]);
    if (!(wk > 0.0) || !std::isfinite(wk)) throw InvalidArgument("invalid weight");
    out.values[k] *= wk;
  }
  return out;
}

double l2_inner(const TabulatedFunction& f, const TabulatedFunction& g,
                const QuadratureMeasure& nu) {
  const auto atoms = nu.atoms();
  const auto matches = [&](const TabulatedFunction& t) {
    return t.grid.size() == atoms.size() && t.values.size() == atoms.size() &&
           std::equal(t.grid.begin(), t.grid.end(), atoms.begin());
  };
  if (!matches(f) || !matches(g))
    throw InvalidArgument("tabulation does not match the measure's atoms");
  const auto weights = nu.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) sum += f.values[k] * g.values[k] * weights[k];
  return sum;
}

double l2_norm(const TabulatedFunction& f, const QuadratureMeasure& nu) {
  return std::sqrt(l2_inner(f, f, nu));
}

double l2_norm_squared(const StepFunctionProcess& process,
                       const QuadratureMeasure& nu) {
  const std::vector<double> values = process.evaluate_sorted(nu.atoms());
  const auto weights = nu.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) sum += values[k] * values[k] * weights[k];
  return sum;
}

double lyapunov_diagnostic(const MarkedSample& sample, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  double sum = 0.0;
  for (double m : sample.marks()) sum += std::pow(std::abs(m), 2.0 + delta);
  return sum;
}

StepFunctionProcess variance_process_diagnostic(std::span<const double> anchors,
                                                std::span<const double> cond_variances) {
  if (anchors.size() != cond_variances.size())
    throw InvalidArgument("anchors and conditional variances must have equal length");
  if (anchors.empty()) throw InvalidArgument("empty sample");
  for (double v : cond_variances) {
    if (!(v >= 0.0)) throw InvalidArgument("negative conditional variance");
  }
  return accumulate_pairs(anchors, cond_variances);
}

double sup_distance(const StepFunctionProcess& process,
                    const std::function<double(double)>& reference,
                    std::span<const double> eval_grid) {
  const TabulatedFunction t = tabulate(process, eval_grid);
  double sup = 0.0;
  for (std::size_t k = 0; k < t.grid.size(); ++k)
    sup = std::max(sup, std::abs(t.values[k] - reference(t.grid[k])));
  return sup;
}

std::vector<double> default_eval_grid(const MarkedSample& sample,
                                      const QuadratureMeasure& nu) {
  std::vector<double> grid(sample.anchors().begin(), sample.anchors().end());
  grid.insert(grid.end(), nu.atoms().begin(), nu.atoms().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace mepgof
