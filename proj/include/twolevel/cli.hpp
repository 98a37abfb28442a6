// Copyright 2026 The twolevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "twolevel/dynamics.hpp"
#include "twolevel/fitness.hpp"
#include "twolevel/model.hpp"
#include "twolevel/morse.hpp"
#include "twolevel/optimizer.hpp"
#include "twolevel/pulses.hpp"

namespace twolevel::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kNumericError = 3, kNotConverged = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PulseConfig {
  std::string kind = "soliton";  // soliton | square | constant | n_pi | zero | sampled
  double energy = 2.0;
  std::optional<double> area;  // square only; defaults to pi
  int order = 1;
  std::optional<double> t_control;
  std::filesystem::path file;
};

struct FitnessConfig {
  std::string kind = "integrated_upper";  // integrated_upper | terminal_upper
  std::optional<double> t_control;
};

struct OptimizerConfig {
  std::optional<double> energy;
  int max_iters = 2000;
  double tol_grad = 1e-8;
  std::uint64_t seed = 42;
  int init_modes = 4;
  /// Unset: pi for integrated_upper, free for terminal_upper. Null in the
  /// document frees it explicitly.
  std::optional<std::optional<double>> target_area;
  bool require_convergence = false;
  LineSearchPolicy line_search{};
};

struct AuditSection {
  std::optional<double> energy;
  int n_trials = 100;
  std::uint64_t seed = 7;
  double amplitude = 1e-2;
  int modes = 8;
  double tolerance = 1e-9;
};

struct MorseSection {
  std::optional<double> mass;
  double r_min = 0.5;
  double r_max = 12.0;
  std::size_t n_r = 4096;
};

/// Parsed run document. Every section is optional; commands that need one
/// fall back to the defaults above.
struct RunConfig {
  double mu = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double omega = 1.0;
  double t0 = -50.0;
  double t1 = 50.0;
  std::size_t n = 4001;
  std::optional<PulseConfig> pulse;
  IntegratorConfig integrator{.substeps = 4};
  FitnessConfig fitness;
  OptimizerConfig optimizer;
  AuditSection audit;
  MorseSection morse;
  std::optional<std::filesystem::path> out_dir;

  std::string text;                ///< source bytes, hashed for provenance
  std::filesystem::path base_dir;  ///< relative file paths resolve here

  TwoLevelSystem system() const;
  TimeGrid grid() const;
  FitnessSpec fitness_spec() const;
};

/// Throws ConfigError on syntax errors, unknown keys and invalid values.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

Envelope build_envelope(const RunConfig& cfg, const TwoLevelSystem& sys);

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> mass;
  double t_control = 30000.0;
};

/// Runs one subcommand and maps failures to the exit-code contract.
/// Diagnostics go to err, a one-line summary to out.
int run(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace twolevel::cli
