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
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "mepgof/error.hpp"

namespace mepgof {
namespace {

using Kind = QuadratureMeasure::Kind;

struct RandomInstance {
  MarkedSample sample;
  QuadratureMeasure nu;
};

// Ties are drawn on purpose: anchors live on a coarse lattice.
RandomInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t atoms) {
  std::uniform_int_distribution<int> lattice(-20, 20);
  std::normal_distribution<double> mark;
  std::uniform_real_distribution<double> weight(0.0, 2.0);
  std::vector<double> anchors(n), marks(n);
  for (std::size_t i = 0; i < n; ++i) {
    anchors[i] = 0.25 * lattice(rng);
    marks[i] = mark(rng);
  }
  std::vector<double> at(atoms), w(atoms);
  for (std::size_t k = 0; k < atoms; ++k) {
    at[k] = -6.0 + 12.0 * (static_cast<double>(k) + 0.37) / static_cast<double>(atoms);
    w[k] = weight(rng);
  }
  return {MarkedSample(anchors, marks), QuadratureMeasure(Kind::kDiscreteAtoms, at, w)};
}

// Sum over pairs of m_i m_j nu({a >= max(x_i, x_j)}).
double brute_force_norm_squared(const MarkedSample& s, const QuadratureMeasure& nu) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double x = std::max(s.anchors()[i], s.anchors()[j]);
      double mass = 0.0;
      for (std::size_t k = 0; k < nu.size(); ++k) {
        if (nu.atoms()[k] >= x) mass += nu.weights()[k];
      }
      total += s.marks()[i] * s.marks()[j] * mass;
    }
  }
  return total;
}

TEST(BuildMarkedProcess, SingleTerm) {
  const auto z = build_marked_process(MarkedSample({2.0}, {3.0}));
  EXPECT_EQ(z(1.999), 0.0);
  EXPECT_EQ(z(2.0), 3.0);
  EXPECT_EQ(z(100.0), 3.0);
}

TEST(BuildMarkedProcess, CancellationAtSharedAnchor) {
  const auto z = build_marked_process(MarkedSample({1.0, 1.0}, {1.0, -1.0}));
  for (double x : {-1.0, 0.999, 1.0, 2.0}) EXPECT_EQ(z(x), 0.0);
  ASSERT_EQ(z.jump_points().size(), 1u);
}

TEST(BuildMarkedProcess, IndicatorArithmetic) {
  const double a = 0.3, b = -1.7, c = 2.9;
  const auto z = build_marked_process(MarkedSample({0.0, 1.0, -1.0}, {a, b, c}));
  EXPECT_DOUBLE_EQ(z(0.5), a + c);
  EXPECT_DOUBLE_EQ(z(1.5), a + b + c);
  EXPECT_EQ(z(-1.5), 0.0);
}

TEST(BuildMarkedProcess, JumpPointsAreSortedDistinctAnchors) {
  const auto z = build_marked_process(MarkedSample({3.0, -1.0, 3.0, 0.5}, {1, 1, 1, 1}));
  const std::vector<double> jumps(z.jump_points().begin(), z.jump_points().end());
  EXPECT_EQ(jumps, (std::vector<double>{-1.0, 0.5, 3.0}));
}

TEST(MarkedSample, RejectsInvalidInput) {
  EXPECT_THROW(MarkedSample({}, {}), InvalidArgument);
  EXPECT_THROW(MarkedSample({1.0}, {1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(MarkedSample({NAN}, {1.0}), InvalidArgument);
  EXPECT_THROW(MarkedSample({1.0}, {INFINITY}), InvalidArgument);
  try {
    MarkedSample({}, {});
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "empty sample");
  }
}

TEST(BuildMarkedProcess, PermutationInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 40, 10);
    std::vector<std::size_t> order(40);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> anchors, marks;
    for (std::size_t i : order) {
      anchors.push_back(inst.sample.anchors()[i]);
      marks.push_back(inst.sample.marks()[i]);
    }
    const auto z1 = build_marked_process(inst.sample);
    const auto z2 = build_marked_process(MarkedSample(anchors, marks));
    ASSERT_TRUE(std::ranges::equal(z1.jump_points(), z2.jump_points()));
    ASSERT_TRUE(std::ranges::equal(z1.cumulative_values(), z2.cumulative_values()));
  }
}

TEST(BuildMarkedProcess, LinearInConcatenation) {
  std::mt19937_64 rng(12);
  const auto a = random_instance(rng, 15, 5).sample;
  const auto b = random_instance(rng, 25, 5).sample;
  std::vector<double> anchors(a.anchors().begin(), a.anchors().end());
  std::vector<double> marks(a.marks().begin(), a.marks().end());
  anchors.insert(anchors.end(), b.anchors().begin(), b.anchors().end());
  marks.insert(marks.end(), b.marks().begin(), b.marks().end());
  const auto za = build_marked_process(a);
  const auto zb = build_marked_process(b);
  const auto zab = build_marked_process(MarkedSample(anchors, marks));
  for (double x = -6.0; x <= 6.0; x += 0.125) EXPECT_NEAR(zab(x), za(x) + zb(x), 1e-12) << x;
}

TEST(StepFunctionProcess, EvaluateSortedMatchesPointwise) {
  std::mt19937_64 rng(13);
  const auto z = build_marked_process(random_instance(rng, 30, 5).sample);
  const auto grid = std::vector<double>{-7.0, -5.0, -0.25, 0.0, 0.1, 0.25, 3.0, 9.0};
  const auto values = z.evaluate_sorted(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(values[k], z(grid[k]));
}

TEST(StepFunctionProcess, RejectsUnsortedJumps) {
  EXPECT_THROW(StepFunctionProcess({1.0, 1.0}, {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(StepFunctionProcess({1.0}, {0.0, 1.0}), InvalidArgument);
}

TEST(StepFunctionProcess, CsvSchema) {
  std::ostringstream out;
  build_marked_process(MarkedSample({0.5, -0.25}, {1.0, 0.1})).write_csv(out);
  EXPECT_EQ(out.str(), "x,value\n-0.25,0.10000000000000001\n0.5,1.1000000000000001\n");
}

TEST(ApplyWeight, UnitWeightIsIdentity) {
  const auto z = build_marked_process(MarkedSample({0.0, 1.0}, {2.0, -1.0}));
  const std::vector<double> grid{-1.0, 0.0, 0.5, 1.0, 2.0};
  const auto t = apply_weight(z, {[](double) { return 1.0; }, "one"}, grid);
  EXPECT_EQ(t.values, z.evaluate_sorted(grid));
}

TEST(ApplyWeight, ZeroProcessStaysZero) {
  const auto z = build_marked_process(MarkedSample({0.0, 0.0}, {1.0, -1.0}));
  const std::vector<double> grid{-1.0, 0.0, 1.0};
  const auto t = apply_weight(z, {[](double x) { return 1.0 + x * x; }, "quad"}, grid);
  for (double v : t.values) EXPECT_EQ(v, 0.0);
}

TEST(ApplyWeight, ScalarProduct) {
  const auto z = build_marked_process(MarkedSample({0.0}, {3.0}));
  const std::vector<double> grid{0.5};
  EXPECT_EQ(apply_weight(z, {[](double) { return 2.0; }, "two"}, grid).values[0], 6.0);
}

TEST(ApplyWeight, RejectsNonPositiveWeight) {
  const auto z = build_marked_process(MarkedSample({0.0}, {3.0}));
  const std::vector<double> grid{-1.0, 0.0, 1.0};
  try {
    apply_weight(z, {[](double x) { return x; }, "identity"}, grid);
    FAIL() << "expected an exception";
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "invalid weight");
  }
}

TEST(L2Inner, ConstantFunctions) {
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 1.0, 2.0}, {0.5, 1.5, 0.5});
  const TabulatedFunction one{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  EXPECT_DOUBLE_EQ(nu.total_mass(), 2.5);
  EXPECT_DOUBLE_EQ(l2_inner(one, one, nu), 2.5);
}

TEST(L2Inner, DisjointIndicatorsAreOrthogonal) {
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 1.0, 2.0, 3.0}, {1, 2, 3, 4});
  const TabulatedFunction f{{0, 1, 2, 3}, {1, 1, 0, 0}};
  const TabulatedFunction g{{0, 1, 2, 3}, {0, 0, 1, 1}};
  EXPECT_EQ(l2_inner(f, g, nu), 0.0);
}

TEST(L2Inner, ThreePointSampleTwoAtoms) {
  const MarkedSample s({-1.0, 0.5, 2.0}, {0.7, -0.2, 1.3});
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 3.0}, {0.4, 0.9});
  const auto z = build_marked_process(s);
  const auto t = tabulate(z, nu.atoms());
  // At 0 only the first anchor counts; at 3 all three do.
  const double hand = 0.7 * 0.7 * 0.4 + (0.7 - 0.2 + 1.3) * (0.7 - 0.2 + 1.3) * 0.9;
  EXPECT_NEAR(l2_inner(t, t, nu), hand, 1e-14);
  EXPECT_NEAR(l2_norm(t, nu), std::sqrt(hand), 1e-14);
}

TEST(L2Inner, RejectsTabulationMismatch) {
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 1.0}, {1, 1});
  const TabulatedFunction f{{0.0, 2.0}, {1, 1}};
  const TabulatedFunction g{{0.0}, {1}};
  EXPECT_THROW(l2_inner(f, f, nu), InvalidArgument);
  EXPECT_THROW(l2_inner(g, g, nu), InvalidArgument);
}

TEST(L2Inner, SymmetricAndBilinear) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> z;
  const std::size_t m = 30;
  std::vector<double> atoms(m), weights(m);
  for (std::size_t k = 0; k < m; ++k) {
    atoms[k] = static_cast<double>(k);
    weights[k] = 0.1 + std::abs(z(rng));
  }
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, atoms, weights);
  auto random_fn = [&] {
    TabulatedFunction f{atoms, std::vector<double>(m)};
    for (double& v : f.values) v = z(rng);
    return f;
  };
  const auto f = random_fn(), g = random_fn(), h = random_fn();
  const double a = 1.7, b = -0.4;
  TabulatedFunction combo{atoms, std::vector<double>(m)};
  for (std::size_t k = 0; k < m; ++k) combo.values[k] = a * f.values[k] + b * g.values[k];
  EXPECT_DOUBLE_EQ(l2_inner(f, g, nu), l2_inner(g, f, nu));
  EXPECT_NEAR(l2_inner(combo, h, nu), a * l2_inner(f, h, nu) + b * l2_inner(g, h, nu), 1e-12);
}

TEST(L2Norm, ZeroExactlyWhenVanishingOnAtoms) {
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 1.0}, {1, 1});
  // Nonzero between atoms but zero on them.
  const auto z = build_marked_process(MarkedSample({0.2, 0.7}, {1.0, -1.0}));
  EXPECT_EQ(l2_norm_squared(z, nu), 0.0);
  const auto w = build_marked_process(MarkedSample({0.2}, {1.0}));
  EXPECT_GT(l2_norm_squared(w, nu), 0.0);
}

TEST(L2Norm, MatchesBruteForceDoubleSum) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 50;
    const std::size_t atoms = 1 + (trial * 37) % 100;
    const auto inst = random_instance(rng, n, atoms);
    const double quad = l2_norm_squared(build_marked_process(inst.sample), inst.nu);
    const double brute = brute_force_norm_squared(inst.sample, inst.nu);
    EXPECT_NEAR(quad, brute, 1e-10 * std::max(1.0, std::abs(brute))) << "trial " << trial;
  }
}

TEST(QuadratureMeasure, FromDensityTrapezoid) {
  const auto nu = QuadratureMeasure::from_density([](double x) { return 2.0 * x; }, 0.0, 1.0,
                                                  101);
  EXPECT_EQ(nu.kind(), Kind::kDensityOnGrid);
  EXPECT_EQ(nu.size(), 101u);
  EXPECT_NEAR(nu.total_mass(), 1.0, 1e-12);
}

TEST(QuadratureMeasure, RejectsBadWeights) {
  EXPECT_THROW(QuadratureMeasure(Kind::kDiscreteAtoms, {0.0, 1.0}, {1.0, -1.0}),
               InvalidArgument);
  EXPECT_THROW(QuadratureMeasure(Kind::kDiscreteAtoms, {0.0, 1.0}, {0.0, 0.0}),
               InvalidArgument);
  EXPECT_THROW(QuadratureMeasure(Kind::kDiscreteAtoms, {1.0, 0.0}, {1.0, 1.0}),
               InvalidArgument);
}

TEST(LyapunovDiagnostic, ClosedForms) {
  for (std::size_t n : {10u, 100u, 10000u}) {
    const double m = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> anchors(n), marks(n, m);
    for (std::size_t i = 0; i < n; ++i) anchors[i] = static_cast<double>(i);
    EXPECT_NEAR(lyapunov_diagnostic(MarkedSample(anchors, marks), 1.0),
                1.0 / std::sqrt(static_cast<double>(n)), 1e-12);
  }
  EXPECT_EQ(lyapunov_diagnostic(MarkedSample({1, 2, 3}, {0, 0, 0}), 1.0), 0.0);
}

TEST(LyapunovDiagnostic, SignMarksAtTenThousand) {
  const std::size_t n = 10000;
  std::vector<double> anchors(n), marks(n);
  for (std::size_t i = 0; i < n; ++i) {
    anchors[i] = std::sin(static_cast<double>(i));
    marks[i] = (i % 3 == 0 ? -1.0 : 1.0) / 100.0;
  }
  EXPECT_NEAR(lyapunov_diagnostic(MarkedSample(anchors, marks), 1.0), 0.01, 1e-12);
}

TEST(VarianceProcessDiagnostic, UniformVariancesGiveEmpiricalCdf) {
  const std::vector<double> anchors{0.3, -1.0, 2.0, 0.3};
  const std::vector<double> vars(4, 0.25);
  const auto v = variance_process_diagnostic(anchors, vars);
  EXPECT_DOUBLE_EQ(v(-2.0), 0.0);
  EXPECT_DOUBLE_EQ(v(-1.0), 0.25);
  EXPECT_DOUBLE_EQ(v(0.3), 0.75);
  EXPECT_DOUBLE_EQ(v(5.0), 1.0);
}

TEST(VarianceProcessDiagnostic, SinglePair) {
  const std::vector<double> anchors{0.0};
  const std::vector<double> vars{0.8};
  const auto v = variance_process_diagnostic(anchors, vars);
  EXPECT_EQ(v(-1e-9), 0.0);
  EXPECT_EQ(v(0.0), 0.8);
}

TEST(VarianceProcessDiagnostic, RejectsNegativeVariance) {
  const std::vector<double> anchors{0.0, 1.0};
  const std::vector<double> vars{0.8, -0.1};
  EXPECT_THROW(variance_process_diagnostic(anchors, vars), InvalidArgument);
}

TEST(SupDistance, AgainstReference) {
  const auto z = build_marked_process(MarkedSample({0.0, 1.0}, {0.5, 0.5}));
  const std::vector<double> grid{-1.0, 0.0, 0.5, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(sup_distance(z, [](double) { return 0.5; }, grid), 0.5);
}

TEST(DefaultEvalGrid, MergesAnchorsAndAtoms) {
  const MarkedSample s({2.0, 0.0, 2.0}, {1, 1, 1});
  const QuadratureMeasure nu(Kind::kDiscreteAtoms, {0.0, 1.0}, {1, 1});
  EXPECT_EQ(default_eval_grid(s, nu), (std::vector<double>{0.0, 1.0, 2.0}));
}

}  // namespace
}  // namespace mepgof
