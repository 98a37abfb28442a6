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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "twolevel/cli.hpp"
#include "twolevel/errors.hpp"
#include "twolevel/io.hpp"

namespace twolevel::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Output directory plus the manifest of what was written into it.
class Outputs {
 public:
  Outputs(fs::path dir, std::string command, ordered_json provenance)
      : dir_(std::move(dir)), command_(std::move(command)), provenance_(std::move(provenance)) {
    fs::create_directories(dir_);
  }

  fs::path file(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }

  void json(const std::string& name, ordered_json doc) {
    doc["provenance"] = provenance_;
    io::write_json(file(name), doc);
  }

  void finish() const {
    ordered_json m;
    m["command"] = command_;
    m["files"] = files_;
    m["provenance"] = provenance_;
    io::write_json(dir_ / "manifest.json", m);
  }

 private:
  fs::path dir_;
  std::string command_;
  ordered_json provenance_;
  std::vector<std::string> files_;
};

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  ordered_json provenance;
};

// The hash covers the config bytes and every flag that changes results.
Context make_context(const std::string& command, const CommandOptions& opts, bool need_config) {
  Context ctx;
  if (opts.config)
    ctx.cfg = load_config(*opts.config);
  else if (need_config)
    throw ConfigError(command + " requires a config file");

  std::string key = command + "\n" + ctx.cfg.text;
  if (opts.seed) {
    ctx.cfg.optimizer.seed = *opts.seed;
    ctx.cfg.audit.seed = *opts.seed;
    key += "\nseed=" + std::to_string(*opts.seed);
  }
  if (opts.mass) {
    if (!(*opts.mass > 0.0) || !std::isfinite(*opts.mass)) throw ConfigError("--mass must be finite and > 0");
    ctx.cfg.morse.mass = *opts.mass;
    key += "\nmass=" + io::format_double(*opts.mass);
  }
  if (command == "fig2") key += "\nt_control=" + io::format_double(opts.t_control);
  ctx.out_dir = opts.out ? *opts.out : ctx.cfg.out_dir.value_or(fs::path("out"));
  ctx.provenance = io::provenance(key);
  return ctx;
}

MorseModel morse_model(const RunConfig& cfg) {
  if (!cfg.morse.mass) throw ConfigError("the Morse reduced mass is required (--mass or morse.mass)");
  MorseModel m;
  try {
    m = reference_morse_model(*cfg.morse.mass);
    m.r_min = cfg.morse.r_min;
    m.r_max = cfg.morse.r_max;
    m.n_r = cfg.morse.n_r;
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

ordered_json nullable(std::optional<double> x) { return x ? ordered_json(*x) : ordered_json(nullptr); }

EnergyBudget default_budget(const RunConfig& cfg, std::optional<double> energy, const TwoLevelSystem& sys) {
  if (energy) return EnergyBudget(*energy);
  if (cfg.fitness.kind == "terminal_upper") return constant_pulse(sys, *cfg.fitness.t_control).second;
  return EnergyBudget(2.0);
}

int cmd_simulate(const Context& ctx, std::ostream& out) {
  const RunConfig& cfg = ctx.cfg;
  const TwoLevelSystem sys = cfg.system();
  const TimeGrid grid = cfg.grid();
  const Envelope env = build_envelope(cfg, sys);
  const BlochTrajectory traj = propagate(sys, env, grid, ground_state(), cfg.integrator);

  ordered_json summary;
  summary["Q22"] = evaluate(FitnessSpec::integrated_upper(), traj);
  std::optional<double> terminal;
  if (cfg.fitness.t_control) terminal = evaluate(FitnessSpec::terminal_upper(*cfg.fitness.t_control), traj);
  summary["rho22_at_t_control"] = nullable(terminal);
  summary["energy"] = pulse_energy(env, grid);
  summary["area"] = pulse_area(env, sys, grid).theta.back();
  std::optional<double> adiabatic;
  try {
    adiabatic = adiabaticity_ratio(env, sys, grid);
  } catch (const std::invalid_argument&) {
    // zero field: the ratio is undefined
  }
  summary["adiabaticity_ratio"] = nullable(adiabatic);

  Outputs o(ctx.out_dir, "simulate", ctx.provenance);
  io::write_trajectory_csv(o.file("trajectory.csv"), traj);
  io::write_envelope_csv(o.file("envelope.csv"), env, grid);
  o.json("summary.json", summary);
  o.finish();
  out << "Q22 " << io::format_double(summary["Q22"].get<double>()) << '\n';
  return kOk;
}

int cmd_fig1(const Context& ctx, std::ostream& out) {
  const TwoLevelSystem sys(1.0, 0.0, 0.0, 1.0);
  const EnergyBudget budget(2.0);
  const TimeGrid grid(-50.0, 50.0, 4001);
  const IntegratorConfig integ{.substeps = 4};
  const Envelope soliton = soliton_envelope(sys, budget);
  const Envelope square = square_pulse_matching(sys, std::numbers::pi, budget);

  Outputs o(ctx.out_dir, "fig1", ctx.provenance);
  double finals[2];
  const Envelope* pulses[2] = {&soliton, &square};
  const char* names[2] = {"soliton", "square"};
  for (int k = 0; k < 2; ++k) {
    const auto traj = propagate(sys, *pulses[k], grid, ground_state(), integ);
    const auto curve = integrated_occupation_curve(traj);
    finals[k] = curve.back();
    io::write_envelope_csv(o.file(std::string("fig1_") + names[k] + "_envelope.csv"), *pulses[k], grid);
    io::write_curve_csv(o.file(std::string("fig1_") + names[k] + "_occupation.csv"), grid, curve);
  }
  const double ratio = finals[0] / finals[1];
  const bool ok = finals[0] < finals[1] && std::abs(ratio - 8.0 / (std::numbers::pi * std::numbers::pi)) <= 1e-3;
  o.json("fig1.json", {{"q22_soliton", finals[0]}, {"q22_square", finals[1]}, {"ratio", ratio}, {"ordered", ok}});
  o.finish();
  out << "Q22 soliton " << io::format_double(finals[0]) << " square " << io::format_double(finals[1]) << '\n';
  if (!ok) throw NumericError("fig1: soliton/square ratio " + io::format_double(ratio) + " off 8/pi^2");
  return kOk;
}

int cmd_morse(const Context& ctx, std::ostream& out) {
  const MorseModel model = morse_model(ctx.cfg);
  const MorseTransition tr = morse_transition(model);
  Outputs o(ctx.out_dir, "morse", ctx.provenance);
  io::write_wavefunctions_csv(o.file("morse_wavefunctions.csv"), tr.states);
  o.json("morse.json", {{"mass", model.mass},
                        {"bound_states", bound_state_count(model)},
                        {"e0", tr.e0},
                        {"e1", tr.e1},
                        {"mu", tr.mu},
                        {"omega", tr.omega}});
  o.finish();
  out << "mu " << io::format_double(tr.mu) << " omega " << io::format_double(tr.omega) << '\n';
  return kOk;
}

int cmd_fig2(const Context& ctx, double t_control, std::ostream& out) {
  if (!(t_control > 0.0) || !std::isfinite(t_control)) throw ConfigError("t_control must be finite and > 0");
  const MorseModel model = morse_model(ctx.cfg);
  const MorseTransition tr = morse_transition(model);
  const TwoLevelSystem sys(tr.mu, 0.0, 0.0, tr.omega);
  const auto [env, budget] = constant_pulse(sys, t_control);
  const TimeGrid grid(0.0, t_control, 3001);
  const auto traj = propagate(sys, env, grid, ground_state(), IntegratorConfig{.substeps = 4});
  const double final_rho22 = traj.states.back().rho22;
  const double amplitude = env.as<ConstantShape>()->amplitude;

  Outputs o(ctx.out_dir, "fig2", ctx.provenance);
  io::write_envelope_csv(o.file("fig2_envelope.csv"), env, grid);
  o.json("fig2.json", {{"mass", model.mass},
                       {"mu", tr.mu},
                       {"omega", tr.omega},
                       {"t_control", t_control},
                       {"amplitude", amplitude},
                       {"E0", budget.e0()},
                       {"rho22_final", final_rho22}});
  o.finish();
  out << "mu " << io::format_double(tr.mu) << " amplitude " << io::format_double(amplitude) << " rho22 "
      << io::format_double(final_rho22) << '\n';
  if (final_rho22 < 1.0 - 1e-6) throw NumericError("fig2: terminal rho22 " + io::format_double(final_rho22));
  return kOk;
}

int cmd_optimize(const Context& ctx, std::ostream& out) {
  const RunConfig& cfg = ctx.cfg;
  const TwoLevelSystem sys = cfg.system();
  const auto& oc = cfg.optimizer;
  const bool integrated = cfg.fitness.kind == "integrated_upper";
  OptimizationProblem prob{.sys = sys,
                           .grid = cfg.grid(),
                           .spec = cfg.fitness_spec(),
                           .budget = default_budget(cfg, oc.energy, sys),
                           .init = std::nullopt,
                           .target_area = oc.target_area.value_or(
                               integrated ? std::optional<double>(std::numbers::pi) : std::nullopt),
                           .max_iters = oc.max_iters,
                           .line_search = oc.line_search,
                           .tol_grad = oc.tol_grad,
                           .seed = oc.seed,
                           .init_modes = oc.init_modes,
                           .integrator = cfg.integrator};
  if (cfg.pulse) prob.init = sample(build_envelope(cfg, sys), prob.grid);
  try {
    prob.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const OptimizationReport report = optimize(prob);

  Outputs o(ctx.out_dir, "optimize", ctx.provenance);
  io::write_envelope_csv(o.file("optimize_envelope.csv"), report.final_envelope, prob.grid);
  ordered_json doc = io::report_json(report);
  doc["seed"] = prob.seed;
  doc["energy"] = prob.budget.e0();
  doc["target_area"] = nullable(prob.target_area);
  o.json("optimize_report.json", doc);
  o.finish();
  out << "fitness " << io::format_double(report.final_fitness) << " iterations " << report.iterations << ' '
      << report.stop_reason << '\n';
  if (!report.converged && oc.require_convergence) return kNotConverged;
  return kOk;
}

int cmd_audit(const Context& ctx, std::ostream& out) {
  const RunConfig& cfg = ctx.cfg;
  const TwoLevelSystem sys = cfg.system();
  const auto& a = cfg.audit;
  const AuditConfig ac{.grid = cfg.grid(),
                       .n_trials = a.n_trials,
                       .seed = a.seed,
                       .amplitude = a.amplitude,
                       .modes = a.modes,
                       .integrator = cfg.integrator,
                       .tolerance = a.tolerance};
  AuditTable table;
  try {
    table = perturbation_audit(sys, default_budget(cfg, a.energy, sys), cfg.fitness_spec(), ac);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Outputs o(ctx.out_dir, "audit", ctx.provenance);
  o.json("audit.json", io::audit_json(table));
  o.finish();
  out << "baseline " << io::format_double(table.baseline) << " worst improvement "
      << io::format_double(table.worst_improvement) << (table.passed ? " passed" : " FAILED") << '\n';
  if (!table.passed) throw NumericError("audit: a perturbation improved on the optimum");
  return kOk;
}

}  // namespace

int run(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (command == "simulate") return cmd_simulate(make_context(command, opts, true), out);
    if (command == "fig1") return cmd_fig1(make_context(command, opts, false), out);
    if (command == "fig2") return cmd_fig2(make_context(command, opts, false), opts.t_control, out);
    if (command == "morse") return cmd_morse(make_context(command, opts, false), out);
    if (command == "optimize") return cmd_optimize(make_context(command, opts, true), out);
    if (command == "audit") return cmd_audit(make_context(command, opts, true), out);
    err << "unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return kNumericError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace twolevel::cli
