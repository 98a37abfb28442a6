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

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "twolevel/cli.hpp"
#include "twolevel/io.hpp"

namespace twolevel::cli {

namespace {

// Map node with a fixed key vocabulary.
class Section {
 public:
  Section(const YAML::Node& node, std::string name, std::set<std::string> allowed)
      : node_(node), name_(std::move(name)) {
    if (!node_.IsMap()) throw ConfigError(name_ + ": expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  YAML::Node node(const std::string& key) const { return node_[key]; }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  template <class T>
  void get(const std::string& key, T& dst) const {
    if (!has(key)) return;
    dst = as<T>(key);
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& dst) const {
    if (!has(key)) return;
    dst = as<T>(key);
  }

  template <class T>
  T as(const std::string& key) const {
    try {
      return node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path(key) + ": wrong type");
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_finite(double x, const std::string& key) { require(std::isfinite(x), key + " must be finite"); }

}  // namespace

TwoLevelSystem RunConfig::system() const { return TwoLevelSystem(mu, gamma1, gamma2, omega); }

TimeGrid RunConfig::grid() const { return TimeGrid(t0, t1, n); }

FitnessSpec RunConfig::fitness_spec() const {
  if (fitness.kind == "integrated_upper") return FitnessSpec::integrated_upper();
  return FitnessSpec::terminal_upper(*fitness.t_control);
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig cfg;
  cfg.text = text;
  cfg.base_dir = base_dir;
  if (root.IsNull()) return cfg;

  const Section top(root, "config",
                    {"system", "grid", "pulse", "integrator", "fitness", "optimizer", "audit", "morse", "output"});

  if (top.has("system")) {
    const Section s(top.node("system"), "system", {"mu", "gamma1", "gamma2", "omega"});
    s.get("mu", cfg.mu);
    s.get("gamma1", cfg.gamma1);
    s.get("gamma2", cfg.gamma2);
    s.get("omega", cfg.omega);
  }
  if (top.has("grid")) {
    const Section s(top.node("grid"), "grid", {"t0", "t1", "n"});
    s.get("t0", cfg.t0);
    s.get("t1", cfg.t1);
    s.get("n", cfg.n);
  }
  if (top.has("pulse")) {
    const Section s(top.node("pulse"), "pulse", {"kind", "energy", "area", "order", "t_control", "file"});
    PulseConfig p;
    s.get("kind", p.kind);
    s.get("energy", p.energy);
    s.get("area", p.area);
    s.get("order", p.order);
    s.get("t_control", p.t_control);
    if (s.has("file")) p.file = s.as<std::string>("file");
    static const std::set<std::string> kinds{"soliton", "square", "constant", "n_pi", "zero", "sampled"};
    require(kinds.count(p.kind) > 0, "pulse.kind: unknown kind '" + p.kind + "'");
    require(p.kind != "constant" || p.t_control.has_value(), "pulse.t_control is required for a constant pulse");
    require(p.kind != "sampled" || !p.file.empty(), "pulse.file is required for a sampled pulse");
    require(p.energy > 0.0, "pulse.energy must be > 0");
    require(p.order >= 1, "pulse.order must be >= 1");
    if (!p.file.empty() && p.file.is_relative()) p.file = base_dir / p.file;
    cfg.pulse = p;
  }
  if (top.has("integrator")) {
    const Section s(top.node("integrator"), "integrator", {"substeps", "dt_max"});
    s.get("substeps", cfg.integrator.substeps);
    s.get("dt_max", cfg.integrator.dt_max);
  }
  if (top.has("fitness")) {
    const Section s(top.node("fitness"), "fitness", {"kind", "t_control"});
    s.get("kind", cfg.fitness.kind);
    s.get("t_control", cfg.fitness.t_control);
    require(cfg.fitness.kind == "integrated_upper" || cfg.fitness.kind == "terminal_upper",
            "fitness.kind: unknown kind '" + cfg.fitness.kind + "'");
    require(cfg.fitness.kind != "terminal_upper" || cfg.fitness.t_control.has_value(),
            "fitness.t_control is required for terminal_upper");
  }
  if (top.has("optimizer")) {
    const Section s(top.node("optimizer"), "optimizer",
                    {"energy", "max_iters", "tol_grad", "seed", "init_modes", "target_area", "require_convergence",
                     "line_search"});
    auto& o = cfg.optimizer;
    s.get("energy", o.energy);
    s.get("max_iters", o.max_iters);
    s.get("tol_grad", o.tol_grad);
    s.get("seed", o.seed);
    s.get("init_modes", o.init_modes);
    s.get("require_convergence", o.require_convergence);
    if (s.has("target_area")) {
      if (s.node("target_area").IsNull())
        o.target_area = std::optional<double>{};
      else
        o.target_area = std::optional<double>{s.as<double>("target_area")};
    }
    if (s.has("line_search")) {
      const Section l(s.node("line_search"), "optimizer.line_search",
                      {"initial_step", "armijo", "backtrack", "growth", "max_step", "max_backtracks"});
      l.get("initial_step", o.line_search.initial_step);
      l.get("armijo", o.line_search.armijo);
      l.get("backtrack", o.line_search.backtrack);
      l.get("growth", o.line_search.growth);
      l.get("max_step", o.line_search.max_step);
      l.get("max_backtracks", o.line_search.max_backtracks);
    }
  }
  if (top.has("audit")) {
    const Section s(top.node("audit"), "audit", {"energy", "n_trials", "seed", "amplitude", "modes", "tolerance"});
    auto& a = cfg.audit;
    s.get("energy", a.energy);
    s.get("n_trials", a.n_trials);
    s.get("seed", a.seed);
    s.get("amplitude", a.amplitude);
    s.get("modes", a.modes);
    s.get("tolerance", a.tolerance);
    require(a.n_trials >= 1, "audit.n_trials must be >= 1");
    require(a.amplitude >= 0.0, "audit.amplitude must be >= 0");
    require(a.modes >= 1, "audit.modes must be >= 1");
  }
  if (top.has("morse")) {
    const Section s(top.node("morse"), "morse", {"mass", "r_min", "r_max", "n_r"});
    s.get("mass", cfg.morse.mass);
    s.get("r_min", cfg.morse.r_min);
    s.get("r_max", cfg.morse.r_max);
    s.get("n_r", cfg.morse.n_r);
  }
  if (top.has("output")) {
    const Section s(top.node("output"), "output", {"dir"});
    if (s.has("dir")) {
      std::filesystem::path d = s.as<std::string>("dir");
      cfg.out_dir = d.is_relative() ? base_dir / d : d;
    }
  }

  for (double x : {cfg.mu, cfg.gamma1, cfg.gamma2, cfg.omega, cfg.t0, cfg.t1}) require_finite(x, "system/grid values");
  // Module invariants, checked before any command runs.
  try {
    (void)cfg.system();
    (void)cfg.grid();
    cfg.integrator.validate();
    if (cfg.fitness.t_control) {
      require_finite(*cfg.fitness.t_control, "fitness.t_control");
      (void)cfg.fitness_spec();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

Envelope build_envelope(const RunConfig& cfg, const TwoLevelSystem& sys) {
  const PulseConfig p = cfg.pulse.value_or(PulseConfig{});
  try {
    const EnergyBudget budget(p.energy);
    if (p.kind == "soliton") return soliton_envelope(sys, budget);
    if (p.kind == "square") return square_pulse_matching(sys, p.area.value_or(std::numbers::pi), budget);
    if (p.kind == "constant") return constant_pulse(sys, *p.t_control).first;
    if (p.kind == "n_pi") return n_pi_soliton(sys, budget, p.order).first;
    if (p.kind == "zero") return Envelope::zero(cfg.grid());
    return io::read_envelope_csv(p.file);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("pulse: ") + e.what());
  }
}

}  // namespace twolevel::cli
