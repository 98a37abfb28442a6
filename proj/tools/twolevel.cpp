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

#include <CLI11.hpp>

#include <iostream>

#include "twolevel/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal pulse control of two-level systems"};
  app.set_version_flag("--version", TWOLEVEL_VERSION);
  app.require_subcommand(1);

  twolevel::cli::CommandOptions opts;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  double mass = 0.0;

  struct Spec {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const Spec specs[] = {
      {"simulate", "propagate a configured pulse and summarize the fitness", true},
      {"fig1", "integrated occupation for the soliton and the matched square pulse", false},
      {"fig2", "constant terminal-control pulse for the Morse transition", false},
      {"optimize", "projected-gradient pulse optimization", true},
      {"audit", "random energy-preserving perturbations of the analytic optimum", true},
      {"morse", "two lowest Morse states, dipole element and carrier frequency", false},
  };
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    auto* cfg = sub->add_option("config", config, "YAML run file");
    if (s.needs_config) cfg->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "overrides optimizer and audit seeds");
    auto* m = sub->add_option("--mass", mass, "Morse reduced mass (atomic units)");
    const std::string name = s.name;
    if (name == "fig2" || name == "morse") m->required();
    if (name == "fig2") sub->add_option("--t-control", opts.t_control, "control time (atomic units)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : twolevel::cli::kConfigError;
  }

  const auto* sub = app.get_subcommands().front();
  if (!config.empty()) opts.config = config;
  if (!out.empty()) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--mass")) opts.mass = mass;
  return twolevel::cli::run(sub->get_name(), opts, std::cout, std::cerr);
}
