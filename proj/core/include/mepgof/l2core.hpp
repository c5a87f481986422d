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

// Marked empirical processes and L2(nu) quadrature.
//
// A marked sample {(x_i, m_i)} defines the step function
//
//   Z(x) = sum_i 1{x_i <= x} m_i,
//
// right-continuous, zero left of the smallest anchor. Integrals against a
// finite measure nu are evaluated on nu's atoms, where the step function is
// exact.

#ifndef MEPGOF_L2CORE_HPP_
#define MEPGOF_L2CORE_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mepgof {

class MarkedSample {
 public:
  // Throws InvalidArgument on length mismatch, empty input ("empty sample")
  // or non-finite entries.
  MarkedSample(std::vector<double> anchors, std::vector<double> marks);

  std::size_t size() const { return anchors_.size(); }
  std::span<const double> anchors() const { return anchors_; }
  std::span<const double> marks() const { return marks_; }

 private:
  std::vector<double> anchors_;
  std::vector<double> marks_;
};

// Right-continuous step function x -> value, zero left of the first jump.
class StepFunctionProcess {
 public:
  StepFunctionProcess() = default;
  // jump_points must be strictly increasing and the same length as values.
  StepFunctionProcess(std::vector<double> jump_points,
                      std::vector<double> cumulative_values);

  std::span<const double> jump_points() const { return jumps_; }
  std::span<const double> cumulative_values() const { return values_; }
  bool empty() const { return jumps_.empty(); }

  double operator()(double x) const;

  // Evaluates on an ascending grid in a single merge pass.
  std::vector<double> evaluate_sorted(std::span<const double> sorted_grid) const;

  // CSV with header "x,value", one row per jump point, 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> jumps_;
  std::vector<double> values_;
};

// Finite measure represented by atoms and non-negative weights. A density
// discretized on a grid is stored the same way; `kind` records the origin.
class QuadratureMeasure {
 public:
  enum class Kind { kDiscreteAtoms, kDensityOnGrid };

  QuadratureMeasure() = default;
  // Atoms must be strictly increasing; weights finite, non-negative, with a
  // positive sum.
  QuadratureMeasure(Kind kind, std::vector<double> atoms,
                    std::vector<double> weights);

  // Trapezoid discretization of a density on a uniform grid over [lo, hi].
  static QuadratureMeasure from_density(const std::function<double(double)>& density,
                                        double lo, double hi, std::size_t points);

  Kind kind() const { return kind_; }
  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return total_mass_; }

 private:
  Kind kind_ = Kind::kDiscreteAtoms;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

struct WeightFunction {
  std::function<double(double)> evaluator;
  std::string description;

  double operator()(double x) const { return evaluator(x); }
};

// A function tabulated on an ascending grid.
struct TabulatedFunction {
  std::vector<double> grid;
  std::vector<double> values;
};

StepFunctionProcess build_marked_process(const MarkedSample& sample);

// Tabulates the process on the grid as a TabulatedFunction.
TabulatedFunction tabulate(const StepFunctionProcess& process,
                           std::span<const double> eval_grid);

// Pointwise w(x) * Z(x) on eval_grid. Throws "invalid weight" if w is not
// strictly positive (and finite) at some grid point.
TabulatedFunction apply_weight(const StepFunctionProcess& process,
                               const WeightFunction& w,
                               std::span<const double> eval_grid);

// sum_k f(x_k) g(x_k) nu_k. Both functions must be tabulated exactly on the
// atoms of nu.
double l2_inner(const TabulatedFunction& f, const TabulatedFunction& g,
                const QuadratureMeasure& nu);
double l2_norm(const TabulatedFunction& f, const QuadratureMeasure& nu);

// ||Z||^2 in L2(nu) directly from the step function.
double l2_norm_squared(const StepFunctionProcess& process,
                       const QuadratureMeasure& nu);

// sum_i |m_i|^(2 + delta): unconditional proxy for the conditional
// Lyapunov condition on the marks.
double lyapunov_diagnostic(const MarkedSample& sample, double delta);

// x -> sum_i 1{anchor_i <= x} v_i for caller-supplied conditional variances,
// to be compared with a reference variance profile (see sup_distance).
// Throws on length mismatch or a negative variance.
StepFunctionProcess variance_process_diagnostic(std::span<const double> anchors,
                                                std::span<const double> cond_variances);

// sup over the grid of |F(x) - reference(x)|.
double sup_distance(const StepFunctionProcess& process,
                    const std::function<double(double)>& reference,
                    std::span<const double> eval_grid);

// Sorted distinct anchors merged with the measure's atoms.
std::vector<double> default_eval_grid(const MarkedSample& sample,
                                      const QuadratureMeasure& nu);

}  // namespace mepgof

#endif  // MEPGOF_L2CORE_HPP_
