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

#include "mepgof/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "mepgof/csv.hpp"
#include "mepgof/diffusion_gof.hpp"
#include "mepgof/error.hpp"
#include "mepgof/l2core.hpp"
#include "mepgof/limitlaws.hpp"
#include "mepgof/parallel.hpp"
#include "mepgof/stats.hpp"

namespace mepgof {
namespace {

// One replication's outputs.
struct Outcome {
  bool ok = false;
  std::string error;
  double statistic = 0.0;
  double norm = 0.0;           // ||Z||^2 in L2(nu)
  double weighted_norm = 0.0;  // ||Psi^{-1/2} Z||^2 in L2(nu)
};

// The integration measure and Psi at its atoms, as used by the norms.
struct NormGeometry {
  QuadratureMeasure measure;
  std::vector<double> psi;
};

void norms_from_values(std::span<const double> values, const NormGeometry& g, Outcome& out) {
  const auto w = g.measure.weights();
  double plain = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v2 = values[k] * values[k] * w[k];
    plain += v2;
    if (g.psi[k] > 0.0) weighted += v2 / g.psi[k];
  }
  out.norm = plain;
  out.weighted_norm = weighted;
}

// Draws of ||B o Psi||^2 and ||Psi^{-1/2} B o Psi||^2 with B evaluated at
// the Psi-levels of the atoms.
void sample_norm_limits(const NormGeometry& g, std::size_t draws, std::uint64_t root_seed,
                        std::size_t workers, std::vector<double>& plain,
                        std::vector<double>& weighted) {
  plain.assign(draws, 0.0);
  weighted.assign(draws, 0.0);
  const auto w = g.measure.weights();
  parallel_for(draws, workers, [&](std::size_t p) {
    PhiloxStream gen(SeedSpec{root_seed, kNormLimitStreamBase + p});
    double b = 0.0;
    double level = 0.0;
    double sum_plain = 0.0;
    double sum_weighted = 0.0;
    for (std::size_t k = 0; k < g.psi.size(); ++k) {
      const double dv = std::max(0.0, g.psi[k] - level);
      b += std::sqrt(dv) * standard_normal(gen);
      level = std::max(level, g.psi[k]);
      const double v2 = b * b * w[k];
      sum_plain += v2;
      if (g.psi[k] > 0.0) sum_weighted += v2 / g.psi[k];
    }
    plain[p] = sum_plain;
    weighted[p] = sum_weighted;
  });
}

std::size_t effective_workers(const ExperimentSpec& spec) {
  return spec.workers == 0 ? default_workers() : spec.workers;
}

// Runs `replications` outcomes for one (n, rung) cell.
class CellRunner {
 public:
  virtual ~CellRunner() = default;
  virtual Outcome run(std::size_t replication) const = 0;
  virtual const NormGeometry& geometry() const = 0;
};

class DiffusionCell : public CellRunner {
 public:
  DiffusionCell(const ExperimentSpec& spec, std::size_t n, double shift)
      : spec_(spec),
        truth_(make_diffusion_model(spec.model)),
        truth_law_(invariant_law(truth_)),
        hyp_(make_diffusion_hypothesis(with_drift_shift(truth_, shift))),
        scheme_(make_scheme(n, spec.beta, spec.c)) {
    geometry_.measure = hyp_.measure;
    for (double a : hyp_.measure.atoms()) geometry_.psi.push_back(hyp_.psi(a));
  }

  Outcome run(std::size_t r) const override {
    PhiloxStream gen(SeedSpec{spec_.root_seed, r});
    const double x0 = stationary_start(truth_law_, gen);
    EulerOptions options;
    options.substeps = spec_.substeps;
    const DiscreteSample sample = euler_maruyama(truth_, scheme_, x0, gen, options);
    const StepFunctionProcess u = u_process(sample, hyp_.drift);
    Outcome out;
    out.statistic = cvm_statistic(u, hyp_);
    norms_from_values(u.evaluate_sorted(geometry_.measure.atoms()), geometry_, out);
    out.ok = true;
    return out;
  }

  const NormGeometry& geometry() const override { return geometry_; }

 private:
  const ExperimentSpec& spec_;
  DiffusionModel truth_;
  InvariantLaw truth_law_;
  DiffusionHypothesis hyp_;
  SamplingScheme scheme_;
  NormGeometry geometry_;
};

class TimeSeriesCell : public CellRunner {
 public:
  TimeSeriesCell(const ExperimentSpec& spec, const TSHypothesis& hyp, std::size_t n,
                 double delta)
      : spec_(spec), hyp_(hyp), truth_(make_ts_model(spec.model, delta)), n_(n) {
    geometry_.measure = hyp_.measure;
    geometry_.psi = hyp_.psi_at_atoms;
  }

  Outcome run(std::size_t r) const override {
    PhiloxStream gen(SeedSpec{spec_.root_seed, r});
    const std::vector<double> series = simulate_ts(truth_, n_, spec_.burn_in, gen);
    const MarkedSample marks = sign_marks(series, hyp_.location);
    Outcome out;
    AdOptions options;
    options.plugin_weight = spec_.plugin_weight;
    out.statistic = ad_statistic(marks, hyp_, options);
    const StepFunctionProcess z = build_marked_process(marks);
    norms_from_values(z.evaluate_sorted(geometry_.measure.atoms()), geometry_, out);
    out.ok = true;
    return out;
  }

  const NormGeometry& geometry() const override { return geometry_; }

 private:
  const ExperimentSpec& spec_;
  const TSHypothesis& hyp_;
  TimeSeriesModel truth_;
  std::size_t n_;
  NormGeometry geometry_;
};

std::vector<Outcome> run_cell(const CellRunner& cell, const ExperimentSpec& spec) {
  std::vector<Outcome> outcomes(spec.replications);
  parallel_for(spec.replications, effective_workers(spec), [&](std::size_t r) {
    try {
      outcomes[r] = cell.run(r);
    } catch (const std::exception& e) {
      outcomes[r].ok = false;
      outcomes[r].error = e.what();
    }
  });
  std::size_t failures = 0;
  std::size_t first_failure = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (!outcomes[r].ok && failures++ == 0) first_failure = r;
  }
  // Up to 1% of replications may fail.
  if (failures * 100 > spec.replications)
    throw RuntimeError(std::to_string(failures) + " of " + std::to_string(spec.replications) +
                       " replications failed; first at replication " +
                       std::to_string(first_failure) + ": " + outcomes[first_failure].error);
  return outcomes;
}

ReportRow summarize(std::size_t n, double magnitude, const std::vector<Outcome>& outcomes,
                    double critical, std::vector<double>& statistics) {
  ReportRow row;
  row.n = n;
  row.magnitude = magnitude;
  row.replications = outcomes.size();
  statistics.clear();
  std::size_t rejections = 0;
  for (const Outcome& o : outcomes) {
    if (!o.ok) {
      ++row.failures;
      continue;
    }
    statistics.push_back(o.statistic);
    rejections += o.statistic > critical;
  }
  const std::size_t ok = statistics.size();
  row.rejection_rate = ok ? static_cast<double>(rejections) / static_cast<double>(ok) : 0.0;
  row.std_error = binomial_standard_error(row.rejection_rate, ok);
  row.statistic_mean = mean(statistics);
  row.statistic_variance = sample_variance(statistics);
  return row;
}

ExperimentReport run_campaign(const ExperimentSpec& spec) {
  validate(spec);
  const auto started = std::chrono::steady_clock::now();
  const std::size_t workers = effective_workers(spec);
  const bool diffusion = spec.test() == TestKind::kDiffusion;
  const Functional functional = diffusion ? Functional::kCvm : Functional::kAd;

  ExperimentReport report;
  report.spec = spec;
  report.limit_K = spec.limit_K ? spec.limit_K : default_grid(functional);
  const LimitLawSample limit =
      sample_limit_law(functional, report.limit_K, spec.limit_paths, spec.root_seed, workers);
  report.critical_value = critical_value(limit, spec.alpha);

  std::optional<TSHypothesis> ts_hyp;
  if (!diffusion) ts_hyp = make_ts_null_hypothesis(spec.model, spec.psi_floor, spec.root_seed);

  const std::vector<double> rungs =
      spec.kind == StudyKind::kPower ? spec.ladder : std::vector<double>{0.0};
  const bool convergence = spec.kind == StudyKind::kConvergence;
  const std::size_t ks_draws = std::min(spec.ks_limit_draws, limit.draws.size());
  const std::vector<double> ks_limit(limit.draws.begin(),
                                     limit.draws.begin() + static_cast<std::ptrdiff_t>(ks_draws));

  std::vector<double> norm_limit;
  std::vector<double> weighted_limit;
  for (std::size_t n : spec.n_grid) {
    for (double magnitude : rungs) {
      std::unique_ptr<CellRunner> cell;
      if (diffusion)
        cell = std::make_unique<DiffusionCell>(spec, n, magnitude);
      else
        cell = std::make_unique<TimeSeriesCell>(spec, *ts_hyp, n, magnitude);
      const std::vector<Outcome> outcomes = run_cell(*cell, spec);

      std::vector<double> statistics;
      ReportRow row = summarize(n, magnitude, outcomes, report.critical_value, statistics);
      if (convergence && !statistics.empty()) {
        // The geometry depends only on the hypothesis, so the limit draws
        // are shared across n.
        if (norm_limit.empty())
          sample_norm_limits(cell->geometry(), ks_draws, spec.root_seed, workers, norm_limit,
                             weighted_limit);
        std::vector<double> norms;
        std::vector<double> weighted;
        for (const Outcome& o : outcomes) {
          if (!o.ok) continue;
          norms.push_back(o.norm);
          weighted.push_back(o.weighted_norm);
        }
        row.ks_statistic = ks_two_sample(statistics, ks_limit);
        row.ks_norm = ks_two_sample(norms, norm_limit);
        row.ks_weighted_norm = ks_two_sample(weighted, weighted_limit);
      }
      report.rows.push_back(row);
      report.statistics.push_back(std::move(statistics));
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["test"] = std::string(to_string(spec.test()));
  j["model"] = {{"name", spec.model.name},          {"theta", spec.model.theta},
                {"sigma", spec.model.sigma},        {"a", spec.model.a},
                {"rho", spec.model.rho},            {"noise", std::string(to_string(spec.model.noise))}};
  j["n_grid"] = spec.n_grid;
  j["replications"] = spec.replications;
  j["alpha"] = spec.alpha;
  j["root_seed"] = spec.root_seed;
  j["limit_K"] = spec.limit_K;
  j["limit_paths"] = spec.limit_paths;
  j["ks_limit_draws"] = spec.ks_limit_draws;
  j["ladder"] = spec.ladder;
  j["beta"] = spec.beta;
  j["c"] = spec.c;
  j["substeps"] = spec.substeps;
  j["psi_floor"] = spec.psi_floor;
  j["burn_in"] = spec.burn_in;
  j["plugin_weight"] = spec.plugin_weight;
  return j;
}

}  // namespace

std::string_view to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::kSize:
      return "size";
    case StudyKind::kPower:
      return "power";
    case StudyKind::kConvergence:
      return "convergence";
  }
  return "size";
}

std::string_view to_string(TestKind kind) {
  return kind == TestKind::kDiffusion ? "diffusion" : "ts";
}

TestKind ExperimentSpec::test() const {
  return is_diffusion_model(model.name) ? TestKind::kDiffusion : TestKind::kTimeSeries;
}

void validate(const ExperimentSpec& spec) {
  if (!is_diffusion_model(spec.model.name) && !is_ts_model(spec.model.name))
    throw InvalidArgument("model: unknown model '" + spec.model.name + "'");
  if (spec.replications < 1) throw InvalidArgument("replications: must be at least 1");
  if (spec.n_grid.empty()) throw InvalidArgument("n_grid: must not be empty");
  for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
    if (spec.n_grid[k] < 1) throw InvalidArgument("n_grid: sample sizes must be positive");
    if (k > 0 && spec.n_grid[k] <= spec.n_grid[k - 1])
      throw InvalidArgument("n_grid: must be strictly increasing");
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    throw InvalidArgument("alpha: must lie in (0, 1)");
  if (spec.limit_paths < 1) throw InvalidArgument("limit_paths: must be positive");
  if (spec.ks_limit_draws < 1) throw InvalidArgument("ks_limit_draws: must be positive");
  if (spec.kind == StudyKind::kPower && spec.ladder.empty())
    throw InvalidArgument("ladder: power study needs at least one rung");
  if (!(spec.model.sigma > 0.0))
    throw InvalidArgument("sigma: must be positive (Psi would vanish identically)");
  if (spec.test() == TestKind::kDiffusion) {
    if (!(spec.beta > 0.5 && spec.beta < 1.0))
      throw InvalidArgument("beta: must lie in (1/2, 1)");
    if (!(spec.c > 0.0)) throw InvalidArgument("c: must be positive");
    if (spec.substeps < 1) throw InvalidArgument("substeps: must be at least 1");
    make_diffusion_model(spec.model);
  } else {
    if (!(spec.psi_floor > 0.0 && spec.psi_floor < 1.0))
      throw InvalidArgument("psi_floor: must lie in (0, 1)");
    for (double delta : spec.ladder) {
      if (!(std::abs(delta) < 0.5)) throw InvalidArgument("ladder: |delta| must be below 1/2");
    }
    make_ts_model(spec.model);
  }
}

ExperimentReport run_size_study(const ExperimentSpec& spec) {
  if (spec.kind != StudyKind::kSize) throw InvalidArgument("kind: expected a size study");
  return run_campaign(spec);
}

ExperimentReport run_power_study(const ExperimentSpec& spec) {
  if (spec.kind != StudyKind::kPower) throw InvalidArgument("kind: expected a power study");
  return run_campaign(spec);
}

ExperimentReport run_convergence_study(const ExperimentSpec& spec) {
  if (spec.kind != StudyKind::kConvergence)
    throw InvalidArgument("kind: expected a convergence study");
  return run_campaign(spec);
}

ExperimentReport run_study(const ExperimentSpec& spec) { return run_campaign(spec); }

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  CsvWriter csv(out, {"study", "test", "n", "magnitude", "replications", "failures",
                      "rejection_rate", "std_error", "statistic_mean", "statistic_variance",
                      "ks_statistic", "ks_norm", "ks_weighted_norm"});
  const auto optional_cell = [](const std::optional<double>& v) {
    return v ? CsvWriter::Cell(*v) : CsvWriter::Cell("");
  };
  for (const ReportRow& row : report.rows) {
    csv.row({std::string(to_string(report.spec.kind)),
             std::string(to_string(report.spec.test())), row.n, row.magnitude,
             row.replications, row.failures, row.rejection_rate, row.std_error,
             row.statistic_mean, row.statistic_variance, optional_cell(row.ks_statistic),
             optional_cell(row.ks_norm), optional_cell(row.ks_weighted_norm)});
  }
}

std::string spec_to_json(const ExperimentSpec& spec) { return spec_json(spec).dump(2); }

std::string report_sidecar_json(const ExperimentReport& report,
                                const std::string& effective_config_json) {
  nlohmann::ordered_json j;
  j["effective_config"] = nlohmann::ordered_json::parse(effective_config_json);
  j["spec"] = spec_json(report.spec);
  const bool diffusion = report.spec.test() == TestKind::kDiffusion;
  j["limit_law"] = {{"functional", diffusion ? "cvm" : "ad"},
                    {"K", report.limit_K},
                    {"n_paths", report.spec.limit_paths},
                    {"root_seed", report.spec.root_seed},
                    {"stream_base", kLimitLawStreamBase},
                    {"critical_value", report.critical_value}};
  j["seeds"] = {{"root_seed", report.spec.root_seed},
                {"replication_streams", "stream_id = replication index"}};
  j["timings"] = {{"elapsed_seconds", report.elapsed_seconds},
                  {"workers", effective_workers(report.spec)}};
  return j.dump(2);
}

}  // namespace mepgof
