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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mepgof/csv.hpp"
#include "mepgof/diffusion_gof.hpp"
#include "mepgof/error.hpp"
#include "mepgof/harness.hpp"
#include "mepgof/limitlaws.hpp"
#include "mepgof/sde.hpp"
#include "mepgof/ts_gof.hpp"

namespace mepgof::cli {
namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"limits",      "simulate",   "test-diffusion",
                                            "test-ts",     "size-study", "power-study",
                                            "convergence-study"};

// One configuration key: its flag, how to load it from JSON and how to echo it.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const Json&)> load;
  std::function<Json()> dump;
};

std::string flag_name(const std::string& key) {
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return "--" + flag;
}

class ConfigParser {
 public:
  ConfigParser() : app_("Marked empirical process goodness-of-fit tests", "mepgof") {
    app_.set_version_flag("--version", kVersion);
    app_.require_subcommand(0, 1);
    app_.fallthrough();
    for (const auto& name : kCommands) app_.add_subcommand(name, describe(name))->fallthrough();
    app_.add_option("--config", config_path_,
                    "JSON config file (flat object or a run sidecar); flags override it");
    app_.add_flag("--print-effective-config", print_effective_,
                  "Print the merged configuration as JSON and exit");

    RunConfig& c = config_;
    bind("command", c.command, "Command (alternative to the subcommand, for config files)");
    bind("model", c.model.name, "Model: ou, tanh (diffusions); ar1, tanh-ar (time series)");
    bind("theta", c.model.theta, "Mean-reversion rate of ou/tanh");
    bind("sigma", c.model.sigma, "Diffusion coefficient / noise scale");
    bind("a", c.model.a, "tanh amplitude of tanh/tanh-ar");
    bind("rho", c.model.rho, "Autoregressive coefficient of ar1/tanh-ar");
    bind("noise", c.noise, "Time-series noise: normal, t3, cauchy");
    bind("shift", c.shift, "Shift added to the hypothesized drift (test-diffusion)");
    bind("delta", c.delta, "Noise median shift of simulated series, P(e<=0)=1/2-delta");
    bind("n", c.n, "Number of observations / increments");
    bind("K", c.K, "Limit-law grid size (0: 2048 for cvm, 4096 for ad)");
    bind("n_paths", c.n_paths, "Limit-law Monte Carlo paths");
    bind("replications", c.replications, "Replications per study cell");
    bind("alpha", c.alpha, "Test level in (0, 1)");
    bind("beta", c.beta, "Spacing exponent, Delta = c n^-beta, in (1/2, 1)");
    bind("c", c.c, "Spacing constant");
    bind("substeps", c.substeps, "Euler-Maruyama substeps per observation interval");
    bind("psi_floor", c.psi_floor, "Lower Psi level of the AD integration domain");
    bind("burn_in", c.burn_in, "Discarded time-series steps before recording");
    bind("seed", c.seed, "Root seed");
    bind("workers", c.workers, "Worker threads (0: hardware concurrency)");
    bind("functional", c.functional, "Limit functional for `limits`: cvm or ad");
    bind("n_grid", c.n_grid, "Sample sizes of a study, increasing")->delimiter(',');
    bind("ladder", c.ladder, "Alternative magnitudes of a power study")->delimiter(',');
    bind("ks_draws", c.ks_draws, "Limit draws used for KS distances");
    bind("data", c.data, "Input CSV (t,X for diffusions; X for time series)");
    bind("out", c.out, "Output path (stdout when empty, except for studies)");
    bind("generate", c.generate, "limits: write the full golden table");
    bind("verify", c.verify, "limits: regenerate and check a golden table CSV");
    bind("experimental_plugin_weight", c.experimental_plugin_weight,
         "test-ts: weight by the empirical CDF of the anchors (experimental)");
  }

  ParsedConfig parse(const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app_.parse(reversed);

    ParsedConfig parsed;
    if (!config_path_.empty()) load_file(parsed.flag_overrides);
    for (const auto& name : kCommands) {
      if (app_.got_subcommand(name)) {
        if (!config_.command.empty() && config_.command != name &&
            app_.get_option("--command")->count() == 0 && !config_path_.empty())
          parsed.flag_overrides.push_back("command");
        config_.command = name;
      }
    }
    parsed.print_effective_config = print_effective_;
    parsed.config = config_;
    validate(parsed.config);
    return parsed;
  }

  CLI::App& app() { return app_; }

 private:
  static std::string describe(const std::string& name) {
    if (name == "limits") return "Critical values of the limit laws; golden table tools";
    if (name == "simulate") return "Simulate a catalog model to CSV";
    if (name == "test-diffusion") return "Cramer-von Mises type drift test for a diffusion";
    if (name == "test-ts") return "Anderson-Darling type sign test for a time series";
    return "Monte Carlo " + name.substr(0, name.find('-')) + " study";
  }

  template <typename T>
  CLI::Option* bind(const std::string& key, T& member, const std::string& help) {
    CLI::Option* option = nullptr;
    if constexpr (std::is_same_v<T, bool>)
      option = app_.add_flag(flag_name(key), member, help);
    else
      option = app_.add_option(flag_name(key), member, help);
    bindings_.push_back({key, option, [&member](const Json& j) { member = j.get<T>(); },
                         [&member] { return Json(member); }});
    return option;
  }

  void load_file(std::vector<std::string>& overrides) {
    std::ifstream in(config_path_);
    if (!in) throw RuntimeError("cannot open config file '" + config_path_ + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InvalidArgument("config: malformed file '" + config_path_ + "': " + e.what());
    }
    if (j.is_object() && j.contains("effective_config")) j = j["effective_config"];
    if (!j.is_object()) throw InvalidArgument("config: top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      const auto it = std::find_if(bindings_.begin(), bindings_.end(),
                                   [&](const Binding& b) { return b.key == key; });
      if (it == bindings_.end()) throw InvalidArgument("config: unknown key '" + key + "'");
      if (it->option->count() > 0) {
        overrides.push_back(key);
        continue;
      }
      try {
        it->load(value);
      } catch (const Json::exception& e) {
        throw InvalidArgument(key + ": wrong type in config file: " + e.what());
      }
    }
  }

  CLI::App app_;
  RunConfig config_;
  std::string config_path_;
  bool print_effective_ = false;
  std::vector<Binding> bindings_;

  friend std::string mepgof::cli::effective_config_json(const RunConfig&);
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw InvalidArgument(key + ": " + what);
}

std::string got(double v) { return ", got " + format_real(v); }

// Writes to the file at `path`, or to `fallback` when path is empty.
void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw RuntimeError("cannot open '" + path + "' for writing");
  body(file);
  if (!file) throw RuntimeError("failed writing '" + path + "'");
}

Json effective_config(const ParsedConfig& parsed) {
  return Json::parse(effective_config_json(parsed.config));
}

std::string sidecar(const ParsedConfig& parsed) {
  Json j;
  j["effective_config"] = effective_config(parsed);
  j["flag_overrides"] = parsed.flag_overrides;
  return j.dump(2) + "\n";
}

void write_sidecar(const ParsedConfig& parsed, const std::string& text) {
  if (parsed.config.out.empty()) return;
  write_output(parsed.config.out + ".json", std::cout,
               [&](std::ostream& os) { os << text; });
}

std::vector<GoldenRow> limit_rows(const RunConfig& c, Functional f) {
  const std::size_t K = c.K ? c.K : default_grid(f);
  return generate_golden_rows(f, K, c.n_paths, c.seed, c.workers);
}

int run_limits(const ParsedConfig& parsed, std::ostream& out) {
  const RunConfig& c = parsed.config;
  if (!c.verify.empty()) {
    const std::vector<GoldenRow> golden = read_golden_table(c.verify);
    bool all_ok = true;
    std::ostringstream report;
    CsvWriter csv(report, {"functional", "alpha", "K", "n_paths", "root_seed", "golden",
                           "fresh", "relative_difference", "ok"});
    // Regenerate each distinct (functional, K, n_paths, seed) sample once.
    std::vector<GoldenRow> fresh;
    for (const GoldenRow& g : golden) {
      const auto match = [&](const GoldenRow& r) {
        return r.functional == g.functional && r.K == g.K && r.n_paths == g.n_paths &&
               r.root_seed == g.root_seed && r.alpha == g.alpha;
      };
      if (std::none_of(fresh.begin(), fresh.end(), match)) {
        const LimitLawSample sample =
            sample_limit_law(g.functional, g.K, g.n_paths, g.root_seed, c.workers);
        for (const GoldenRow& other : golden) {
          if (other.functional == g.functional && other.K == g.K &&
              other.n_paths == g.n_paths && other.root_seed == g.root_seed)
            fresh.push_back({other.functional, other.alpha, other.K, other.n_paths,
                             other.root_seed, critical_value(sample, other.alpha)});
        }
      }
      const auto it = std::find_if(fresh.begin(), fresh.end(), match);
      const double rel = std::abs(it->critical_value - g.critical_value) / g.critical_value;
      const bool ok = rel <= kGoldenRelativeTolerance;
      all_ok = all_ok && ok;
      csv.row({std::string(to_string(g.functional)), g.alpha, g.K, g.n_paths,
               static_cast<unsigned long long>(g.root_seed), g.critical_value,
               it->critical_value, rel, ok ? "true" : "false"});
    }
    write_output(c.out, out, [&](std::ostream& os) { os << report.str(); });
    write_sidecar(parsed, sidecar(parsed));
    if (!all_ok) throw RuntimeError("golden table verification failed for '" + c.verify + "'");
    return kExitOk;
  }

  std::vector<GoldenRow> rows;
  if (c.generate) {
    for (Functional f : {Functional::kCvm, Functional::kAd}) {
      const auto part = limit_rows(c, f);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  } else {
    const Functional f = parse_functional(c.functional);
    const std::size_t K = c.K ? c.K : default_grid(f);
    rows.push_back({f, c.alpha, K, c.n_paths, c.seed,
                    limit_quantile(f, c.alpha, K, c.n_paths, c.seed, c.workers)});
  }
  write_output(c.out, out, [&](std::ostream& os) { write_golden_table(os, rows); });
  write_sidecar(parsed, sidecar(parsed));
  return kExitOk;
}

DiscreteSample simulate_diffusion(const RunConfig& c) {
  const DiffusionModel model = make_diffusion_model(c.model);
  const InvariantLaw law = invariant_law(model);
  PhiloxStream gen(SeedSpec{c.seed, 0});
  const double x0 = stationary_start(law, gen);
  EulerOptions options;
  options.substeps = c.substeps;
  return euler_maruyama(model, make_scheme(c.n, c.beta, c.c), x0, gen, options);
}

std::vector<double> simulate_series(const RunConfig& c) {
  PhiloxStream gen(SeedSpec{c.seed, 0});
  return simulate_ts(make_ts_model(c.model, c.delta), c.n, c.burn_in, gen);
}

int run_simulate(const ParsedConfig& parsed, std::ostream& out) {
  const RunConfig& c = parsed.config;
  if (is_diffusion_model(c.model.name)) {
    const DiscreteSample sample = simulate_diffusion(c);
    write_output(c.out, out, [&](std::ostream& os) { sample.write_csv(os); });
  } else {
    const std::vector<double> series = simulate_series(c);
    write_output(c.out, out, [&](std::ostream& os) {
      CsvWriter csv(os, {"X"});
      for (double x : series) csv.row({x});
    });
  }
  write_sidecar(parsed, sidecar(parsed));
  return kExitOk;
}

std::string result_json(const TestResult& result, const ParsedConfig& parsed) {
  Json j = Json::parse(to_json(result));
  j["effective_config"] = effective_config(parsed);
  j["flag_overrides"] = parsed.flag_overrides;
  return j.dump(2) + "\n";
}

int run_test_diffusion(const ParsedConfig& parsed, std::ostream& out) {
  const RunConfig& c = parsed.config;
  const DiffusionModel model = make_diffusion_model(c.model);
  DiscreteSample sample = [&] {
    if (c.data.empty()) return simulate_diffusion(c);
    const CsvTable table = CsvTable::read(c.data);
    return make_discrete_sample(table.numeric_column("t"), table.numeric_column("X"));
  }();
  const DiffusionHypothesis hyp = make_diffusion_hypothesis(with_drift_shift(model, c.shift));
  const std::size_t K = c.K ? c.K : default_grid(Functional::kCvm);
  const LimitLawSample limit =
      sample_limit_law(Functional::kCvm, K, c.n_paths, c.seed, c.workers);
  TestResult result = diffusion_test(sample, hyp, c.alpha, limit);
  result.metadata.emplace_back("source", c.data.empty() ? "simulated" : c.data);
  result.metadata.emplace_back("root_seed", std::to_string(c.seed));
  result.metadata.emplace_back("drift_shift", format_real(c.shift));
  write_output(c.out, out, [&](std::ostream& os) { os << result_json(result, parsed); });
  return kExitOk;
}

int run_test_ts(const ParsedConfig& parsed, std::ostream& out) {
  const RunConfig& c = parsed.config;
  std::vector<double> series = [&] {
    if (c.data.empty()) return simulate_series(c);
    return CsvTable::read(c.data).numeric_column("X");
  }();
  if (series.size() < 2) throw InvalidArgument("data: series needs at least two values");
  const TSHypothesis hyp = make_ts_null_hypothesis(c.model, c.psi_floor, c.seed);
  const std::size_t K = c.K ? c.K : default_grid(Functional::kAd);
  const LimitLawSample limit = sample_limit_law(Functional::kAd, K, c.n_paths, c.seed, c.workers);
  AdOptions options;
  options.plugin_weight = c.experimental_plugin_weight;
  TestResult result = ts_test(series, hyp, c.alpha, limit, options);
  const ConditionBDiagnostic diag = condition_b_diagnostic(hyp);
  result.metadata.emplace_back("source", c.data.empty() ? "simulated" : c.data);
  result.metadata.emplace_back("root_seed", std::to_string(c.seed));
  result.metadata.emplace_back("condition_b_value", format_real(diag.value));
  result.metadata.emplace_back("condition_b_warn", diag.warn ? "true" : "false");
  write_output(c.out, out, [&](std::ostream& os) { os << result_json(result, parsed); });
  return kExitOk;
}

int run_study_command(const ParsedConfig& parsed) {
  const RunConfig& c = parsed.config;
  ExperimentSpec spec;
  spec.kind = c.command == "size-study"    ? StudyKind::kSize
              : c.command == "power-study" ? StudyKind::kPower
                                           : StudyKind::kConvergence;
  spec.model = c.model;
  spec.model.noise = parse_noise(c.noise);
  spec.n_grid = c.n_grid;
  spec.replications = c.replications;
  spec.alpha = c.alpha;
  spec.root_seed = c.seed;
  spec.limit_K = c.K;
  spec.limit_paths = c.n_paths;
  spec.ks_limit_draws = c.ks_draws;
  spec.ladder = c.ladder;
  spec.beta = c.beta;
  spec.c = c.c;
  spec.substeps = c.substeps;
  spec.psi_floor = c.psi_floor;
  spec.burn_in = c.burn_in;
  spec.plugin_weight = c.experimental_plugin_weight;
  spec.workers = c.workers;

  const ExperimentReport report = run_study(spec);
  write_output(c.out, std::cout, [&](std::ostream& os) { write_report_csv(os, report); });
  Json j = Json::parse(report_sidecar_json(report, effective_config(parsed).dump()));
  j["flag_overrides"] = parsed.flag_overrides;
  write_sidecar(parsed, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

std::string effective_config_json(const RunConfig& config) {
  // Reuse the binding table for a complete, ordered echo.
  ConfigParser parser;
  RunConfig& target = parser.config_;
  target = config;
  Json j = Json::object();
  for (const Binding& b : parser.bindings_) j[b.key] = b.dump();
  return j.dump();
}

void validate(RunConfig& c) {
  if (c.command.empty()) throw InvalidArgument("command: no command given");
  require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(),
          "command", "unknown command '" + c.command + "'");
  const bool diffusion = is_diffusion_model(c.model.name);
  require(diffusion || is_ts_model(c.model.name), "model",
          "unknown model '" + c.model.name + "' (expected ou, tanh, ar1 or tanh-ar)");
  require(c.model.theta > 0.0 && std::isfinite(c.model.theta), "theta",
          "must be positive" + got(c.model.theta));
  require(c.model.sigma > 0.0 && std::isfinite(c.model.sigma), "sigma",
          "must be positive" + got(c.model.sigma));
  require(std::isfinite(c.model.a), "a", "must be finite");
  require(std::abs(c.model.rho) < 1.0, "rho", "must lie in (-1, 1)" + got(c.model.rho));
  try {
    c.model.noise = parse_noise(c.noise);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("noise: ") + e.what());
  }
  require(std::abs(c.delta) < 0.5, "delta", "must lie in (-1/2, 1/2)" + got(c.delta));
  require(std::isfinite(c.shift), "shift", "must be finite");
  require(c.n >= 1, "n", "must be at least 1");
  require(c.K == 0 || c.K >= 2, "K", "must be 0 (default) or at least 2");
  require(c.n_paths >= 1, "n_paths", "must be at least 1");
  require(c.replications >= 1, "replications", "must be at least 1");
  require(c.alpha > 0.0 && c.alpha < 1.0, "alpha", "must lie in (0, 1)" + got(c.alpha));
  require(c.beta > 0.5 && c.beta < 1.0, "beta", "must lie in (1/2, 1)" + got(c.beta));
  require(c.c > 0.0 && std::isfinite(c.c), "c", "must be positive" + got(c.c));
  require(c.substeps >= 1, "substeps", "must be at least 1");
  require(c.psi_floor > 0.0 && c.psi_floor < 1.0, "psi_floor",
          "must lie in (0, 1)" + got(c.psi_floor));
  require(c.ks_draws >= 1, "ks_draws", "must be at least 1");
  require(c.functional == "cvm" || c.functional == "ad", "functional",
          "must be cvm or ad, got '" + c.functional + "'");
  require(!c.n_grid.empty(), "n_grid", "must not be empty");
  for (std::size_t k = 0; k < c.n_grid.size(); ++k) {
    require(c.n_grid[k] >= 1, "n_grid", "sample sizes must be positive");
    require(k == 0 || c.n_grid[k] > c.n_grid[k - 1], "n_grid", "must be strictly increasing");
  }
  if (c.ladder.empty())
    c.ladder = diffusion ? std::vector<double>{0.0, 0.5, 1.0} : std::vector<double>{0.0, 0.05, 0.1};
  if (!diffusion) {
    for (double d : c.ladder) require(std::abs(d) < 0.5, "ladder", "|delta| must be below 1/2");
  }
  if (c.command == "test-diffusion")
    require(diffusion, "model", "test-diffusion needs a diffusion model (ou or tanh)");
  if (c.command == "test-ts")
    require(!diffusion, "model", "test-ts needs a time-series model (ar1 or tanh-ar)");
  if (c.command.ends_with("-study") && c.out.empty()) c.out = c.command + ".csv";
}

ParsedConfig parse_config(const std::vector<std::string>& args) {
  ConfigParser parser;
  try {
    return parser.parse(args);
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }
}

int dispatch(const ParsedConfig& parsed, std::ostream& out, std::ostream& err) {
  try {
    if (parsed.print_effective_config) {
      out << sidecar(parsed);
      return kExitOk;
    }
    const std::string& command = parsed.config.command;
    if (command == "limits") return run_limits(parsed, out);
    if (command == "simulate") return run_simulate(parsed, out);
    if (command == "test-diffusion") return run_test_diffusion(parsed, out);
    if (command == "test-ts") return run_test_ts(parsed, out);
    return run_study_command(parsed);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParsedConfig parsed;
  {
    ConfigParser parser;
    try {
      parsed = parser.parse(args);
    } catch (const CLI::CallForHelp&) {
      out << parser.app().help();
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << "mepgof " << kVersion << '\n';
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  return dispatch(parsed, out, err);
}

}  // namespace mepgof::cli
