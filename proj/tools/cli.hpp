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

// Command-line front end: configuration parsing and command dispatch.

#ifndef MEPGOF_TOOLS_CLI_HPP_
#define MEPGOF_TOOLS_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mepgof/catalog.hpp"
#include "mepgof/random.hpp"

namespace mepgof::cli {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunConfig {
  std::string command;
  ModelSpec model;
  std::string noise = "normal";
  double shift = 0.0;  // added to the hypothesized drift (diffusion tests)
  double delta = 0.0;  // noise median shift of simulated time-series data
  std::size_t n = 10'000;
  std::size_t K = 0;  // 0: functional default
  std::size_t n_paths = 100'000;
  std::size_t replications = 1000;
  double alpha = 0.05;
  double beta = 2.0 / 3.0;
  double c = 1.0;
  std::size_t substeps = 10;
  double psi_floor = 1e-4;
  std::size_t burn_in = 1000;
  std::uint64_t seed = kDefaultRootSeed;
  std::size_t workers = 0;
  std::string functional = "cvm";
  std::vector<std::size_t> n_grid{10'000};
  std::vector<double> ladder;  // empty: test-specific default
  std::size_t ks_draws = 10'000;
  std::string data;
  std::string out;
  bool generate = false;
  std::string verify;
  bool experimental_plugin_weight = false;
};

struct ParsedConfig {
  RunConfig config;
  // Keys present in the config file and also given as flags (flag wins).
  std::vector<std::string> flag_overrides;
  bool print_effective_config = false;
};

// Parses flags and the optional --config file (JSON object; a sidecar with
// an "effective_config" member is accepted as well). Flags override file
// values. The result is validated and defaults are filled in. Throws
// InvalidArgument naming the offending key.
ParsedConfig parse_config(const std::vector<std::string>& args);

// Throws InvalidArgument("<key>: ...") on an out-of-range value.
void validate(RunConfig& config);

// Flat JSON object with every key of the configuration.
std::string effective_config_json(const RunConfig& config);

// Runs the selected command. Returns the exit status: 0 success,
// 1 validation error, 2 runtime error. Test decisions are reported in the
// JSON output only.
int dispatch(const ParsedConfig& parsed, std::ostream& out, std::ostream& err);

// parse_config + dispatch with --help / --version handling.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mepgof::cli

#endif  // MEPGOF_TOOLS_CLI_HPP_
