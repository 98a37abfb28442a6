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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twolevel/dynamics.hpp"
#include "twolevel/fitness.hpp"
#include "twolevel/morse.hpp"
#include "twolevel/optimizer.hpp"
#include "twolevel/pulses.hpp"
#include "twolevel/variational.hpp"

using namespace twolevel;
using oracle::pi;

namespace {

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
};

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const TwoLevelSystem unit(1.0, 0.0, 0.0, 1.0);

void rwa_vs_analytic() {
  Clock c;
  const TimeGrid grid(-50.0, 50.0, 4001);
  const auto env = soliton_envelope(unit, EnergyBudget(2.0));
  const auto traj = propagate(unit, env, grid, ground_state(), IntegratorConfig{.substeps = 4});
  const auto theta = pulse_area(env, unit, grid).theta;
  double sup = 0.0, sup_closed = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = std::sin(oracle::sech_area(grid.node(i), 1.0));
    sup = std::max(sup, std::abs(traj.states[i].rho22 - std::pow(std::sin(theta[i]), 2)));
    sup_closed = std::max(sup_closed, std::abs(traj.states[i].rho22 - s * s));
  }
  const double t = c.seconds();
  report(1, "RWA propagation vs sin^2(theta)", sup <= 1e-8 && sup_closed <= 1e-8 && t < 1.0,
         fmt("sup %.2e (closed-form theta %.2e), %.3f s", sup, sup_closed, t));
}

void soliton_normalization() {
  double worst_e = 0.0, worst_l = 0.0;
  for (double mu : {0.5, 1.0, 2.0})
    for (double e0 : {0.5, 2.0, 8.0}) {
      const TwoLevelSystem sys(mu, 0.0, 0.0, 1.0);
      const EnergyBudget b(e0);
      const auto env = soliton_envelope(sys, b);
      const double lambda = 4.0 / std::pow(mu * e0, 2);
      const double tau = std::sqrt(lambda) / mu;
      const TimeGrid grid(-40.0 * tau, 40.0 * tau, 8001);
      const double e = pulse_energy(env, grid);
      worst_e = std::max(worst_e, rel(e, e0));
      worst_l = std::max(worst_l, rel(env.as<SolitonShape>()->lambda, lambda));
      worst_l = std::max(worst_l, rel(lambda_from_energy(sys, EnergyBudget(e)), lambda));
    }
  report(2, "soliton energy and lambda round trip", worst_e <= 1e-6 && worst_l <= 1e-6,
         fmt("energy rel %.2e, lambda rel %.2e", worst_e, worst_l));
}

void fig1_quantitative() {
  Clock c;
  const TimeGrid grid(-50.0, 50.0, 4001);
  const EnergyBudget b(2.0);
  const IntegratorConfig cfg{.substeps = 4};
  const auto q = [&](const Envelope& env) {
    return evaluate(FitnessSpec::integrated_upper(), propagate(unit, env, grid, ground_state(), cfg));
  };
  const double qs = q(soliton_envelope(unit, b));
  const double qq = q(square_pulse_matching(unit, pi, b));
  const double ratio = qs / qq;
  const double t = c.seconds();
  const bool ok = rel(qs, 2.0) <= 1e-4 && rel(qq, pi * pi / 4.0) <= 1e-4 && std::abs(ratio - 8.0 / (pi * pi)) <= 1e-4 &&
                  qs < qq && t < 1.0;
  report(3, "soliton vs matched square loss", ok,
         fmt("Q22 soliton %.8f, square %.8f, ratio %.6f (8/pi^2 %.6f), %.3f s", qs, qq, ratio, 8.0 / (pi * pi), t));
}

void fig2_identity() {
  bool ok = true;
  double worst_id = 0.0, worst_rho = 1.0;
  const double tc = 30000.0;
  for (double mass : {918.0, 1728.539, 3000.0, 12000.0}) {
    const auto tr = morse_transition(reference_morse_model(mass));
    const TwoLevelSystem sys(tr.mu, 0.0, 0.0, tr.omega);
    const auto [env, budget] = constant_pulse(sys, tc);
    const double a = env.as<ConstantShape>()->amplitude;
    worst_id = std::max({worst_id, rel(a * tr.mu * tc, pi / 2.0), rel(budget.e0() * 4.0 * tr.mu * tr.mu * tc, pi * pi)});
    const auto traj = propagate(sys, env, TimeGrid(0.0, tc, 3001), ground_state(), IntegratorConfig{.substeps = 4});
    worst_rho = std::min(worst_rho, traj.states.back().rho22);
  }
  ok = worst_id <= 1e-12 && worst_rho >= 1.0 - 1e-6;
  report(4, "constant terminal pulse identities", ok,
         fmt("identity rel %.2e, min rho22(30000) %.12f over 4 masses", worst_id, worst_rho));
}

void euler_lagrange() {
  Clock c;
  VariationalProblem prob{unit, 1.0, TimeGrid(-50.0, 50.0, 4001)};
  const auto sol = solve_pendulum_bvp(prob);
  const auto t = prob.window.nodes();
  const double tc = oracle::crossing(t, sol.area.theta, pi / 2.0);
  const auto* v = sol.envelope.as<SampledShape>();
  double sup = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sup = std::max(sup, std::abs(v->values[i] - oracle::sech_pulse(t[i], 1.0, tc)));

  const TimeGrid fine(-25.0, 25.0, 5001);  // dt = tau / 100
  AreaProfile exact{fine, {}};
  for (double x : fine.nodes()) exact.theta.push_back(oracle::sech_area(x, 1.0));
  VariationalProblem fp{unit, 1.0, fine};
  double res = 0.0;
  for (double r : el_residual(exact, fp)) res = std::max(res, std::abs(r));

  double bvp_res = 0.0;
  for (double r : el_residual(sol.area, prob)) bvp_res = std::max(bvp_res, std::abs(r));
  double worst_area = 0.0;
  for (int N : {2, 3}) {
    VariationalProblem pn{unit, 1.0, TimeGrid(-50.0, 50.0, 4001), 0.0, N * pi};
    const auto sn = solve_pendulum_bvp(pn);
    worst_area = std::max(worst_area, std::abs(sn.area.theta.back() - N * pi));
    for (double r : el_residual(sn.area, pn)) bvp_res = std::max(bvp_res, std::abs(r));
  }
  const double secs = c.seconds();
  report(5, "Euler-Lagrange closure", sup <= 1e-4 && res <= 1e-5 && bvp_res <= 1e-5 && worst_area <= 1e-8 && secs < 5.0,
         fmt("BVP vs sech %.2e (centre %.2e), soliton residual %.2e, BVP residual %.2e, N pi area err %.2e, %.2f s", sup,
             tc, res, bvp_res, worst_area, secs));
}

// Best-h central difference of dQ/dV_i, divided by the trapezoid weight.
double fd_component(const OptimizationProblem& p, std::vector<double> v, std::size_t i, double w, double adj) {
  double best = std::nan("");
  const double v0 = v[i];
  for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
    v[i] = v0 + h;
    const double qp = fitness_of(p, v);
    v[i] = v0 - h;
    const double qm = fitness_of(p, v);
    const double g = (qp - qm) / (2.0 * h * w);
    if (std::isnan(best) || std::abs(g - adj) < std::abs(best - adj)) best = g;
  }
  return best;
}

void gradient_correctness() {
  const TimeGrid grid(-8.0, 8.0, 64);
  const auto w = grid.trapezoid_weights();
  std::mt19937_64 rng(2024);
  double worst_fd = 0.0;
  const TwoLevelSystem damped(1.3, 0.1, 0.08, 1.0);
  for (const auto& spec : {FitnessSpec::integrated_upper(), FitnessSpec::terminal_upper(2.0), FitnessSpec::terminal_upper(8.0)}) {
    OptimizationProblem p{.sys = damped, .grid = grid, .spec = spec, .budget = EnergyBudget(1.0), .init = std::nullopt,
                          .target_area = std::nullopt};
    const auto v = oracle::smooth_signal(grid.nodes(), rng, 5, 0.3);
    const auto g = functional_gradient(p, v).gradient;
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double fd = fd_component(p, v, i, w[i], g[i]);
      worst_fd = std::max(worst_fd, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-6 * gmax));
    }
  }

  double worst_area = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    OptimizationProblem p{.sys = unit, .grid = grid, .spec = FitnessSpec::integrated_upper(), .budget = EnergyBudget(1.0),
                          .init = std::nullopt, .target_area = std::nullopt, .integrator = {.substeps = 32}};
    const auto v = oracle::smooth_signal(grid.nodes(), rng, 5, 0.4);
    const auto adj = functional_gradient(p, v).gradient;
    const auto area = area_form_gradient(unit, grid, v);
    for (std::size_t i = 0; i < grid.size(); ++i) worst_area = std::max(worst_area, std::abs(adj[i] - area[i]));
  }
  report(6, "adjoint gradient", worst_fd <= 1e-5 && worst_area <= 1e-6,
         fmt("vs central differences rel %.2e, vs area form sup %.2e", worst_fd, worst_area));
}

void global_extremum() {
  Clock c;
  const TimeGrid grid(-50.0, 50.0, 513);
  double worst_q = 0.0, worst_shape = 0.0;
  for (std::uint64_t seed = 42; seed < 47; ++seed) {
    OptimizationProblem p{.sys = unit, .grid = grid, .spec = FitnessSpec::integrated_upper(), .budget = EnergyBudget(2.0),
                          .init = std::nullopt, .target_area = pi};
    p.seed = seed;
    const auto r = optimize(p);
    const auto t = grid.nodes();
    const auto theta = pulse_area(r.final_envelope, unit, grid).theta;
    const double tc = oracle::crossing(t, theta, pi / 2.0);
    const auto& v = r.final_envelope.as<SampledShape>()->values;
    double sup = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) sup = std::max(sup, std::abs(v[i] - oracle::sech_pulse(t[i], 1.0, tc)));
    worst_q = std::max(worst_q, rel(r.final_fitness, 2.0));
    worst_shape = std::max(worst_shape, std::isnan(tc) ? 1.0 : sup);
  }

  const TimeGrid tgrid(0.0, pi, 257);
  double worst_const = 0.0, min_rho = 1.0;
  for (std::uint64_t seed = 42; seed < 47; ++seed) {
    OptimizationProblem p{.sys = unit, .grid = tgrid, .spec = FitnessSpec::terminal_upper(pi),
                          .budget = EnergyBudget(pi / 4.0), .init = std::nullopt, .target_area = std::nullopt};
    p.seed = seed;
    const auto r = optimize(p);
    const auto& v = r.final_envelope.as<SampledShape>()->values;
    const double sign = v[v.size() / 2] < 0.0 ? -1.0 : 1.0;
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(sign * x - 0.5));
    worst_const = std::max(worst_const, sup / 0.5);
    min_rho = std::min(min_rho, r.final_fitness);
  }
  const double secs = c.seconds();
  report(7, "global extremum from random starts",
         worst_q <= 5e-3 && worst_shape <= 2e-2 && worst_const <= 2e-2 && min_rho >= 0.999 && secs < 60.0,
         fmt("Q22 rel %.2e, sech sup %.2e, constant sup rel %.2e, rho22 %.9f, %.1f s", worst_q, worst_shape, worst_const,
             min_rho, secs));
}

void perturbation() {
  const AuditTable loss = perturbation_audit(unit, EnergyBudget(2.0), FitnessSpec::integrated_upper(),
                                             AuditConfig{.grid = TimeGrid(-50.0, 50.0, 2001)});
  const AuditTable term = perturbation_audit(unit, EnergyBudget(pi / 4.0), FitnessSpec::terminal_upper(pi),
                                             AuditConfig{.grid = TimeGrid(0.0, pi, 257)});
  double min_loss = 1e300, max_term = -1e300;
  for (const auto& r : loss.rows) min_loss = std::min(min_loss, r.delta);
  for (const auto& r : term.rows) max_term = std::max(max_term, r.delta);
  const bool ok = loss.passed && term.passed && loss.rows.size() == 100 && term.rows.size() == 100;
  report(8, "perturbation audit", ok,
         fmt("soliton min dQ22 %.2e, constant max d rho22 %.2e", min_loss, max_term));
}

void morse_oracle() {
  double worst_e = 0.0, worst_mu = 0.0, worst_double = 0.0, raw_e = 0.0;
  for (double mass : {918.0, 1728.539}) {
    const MorseModel m = reference_morse_model(mass);
    const oracle::Morse o{m.d0, m.beta, m.r_star, m.mass};
    const auto tr = morse_transition(m);
    const auto raw = fd_eigenstates(m, 2);
    for (int n = 0; n < 2; ++n) {
      worst_e = std::max(worst_e, rel(tr.states.energies[n], o.energy(n)));
      raw_e = std::max(raw_e, rel(raw.energies[n], o.energy(n)));
    }
    const double mu = o.element([&](double r) { return m.mu0 * r * std::exp(-r / m.r0); }, m.r_min, m.r_max, 40000);
    worst_mu = std::max(worst_mu, rel(tr.mu, mu));
    MorseModel fine = m;
    fine.n_r = 2 * m.n_r - 1;
    const auto tf = morse_transition(fine);
    worst_double = std::max({worst_double, rel(tf.mu, tr.mu), rel(tf.omega, tr.omega), rel(tf.e0, tr.e0), rel(tf.e1, tr.e1)});
  }
  report(9, "Morse oracle", worst_e <= 1e-6 && worst_mu <= 1e-6 && worst_double <= 1e-8,
         fmt("energies rel %.2e (unextrapolated %.2e), dipole rel %.2e, grid doubling %.2e", worst_e, raw_e, worst_mu,
             worst_double));
}

void relaxation() {
  const TwoLevelSystem sys(1.0, 0.3, 0.2, 1.0);
  const TimeGrid grid(0.0, 20.0, 2001);
  const auto traj = propagate(sys, Envelope::zero(grid), grid, BlochState{0.0, 1.0, 0.0, 0.0});
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup = std::max(sup, std::abs(traj.states[i].rho22 - std::exp(-0.3 * grid.node(i))));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double min_eig = 1.0;
  int count = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double g1 = 0.5 * u(rng);
    const TwoLevelSystem s(0.5 + u(rng), g1, 0.5 * g1 + 0.5 * u(rng), 1.0);
    const TimeGrid g(-20.0, 20.0, 801);
    Envelope env = Envelope::zero(g);
    switch (trial % 3) {
      case 0: env = soliton_envelope(s, EnergyBudget(0.5 + 4.0 * u(rng))); break;
      case 1: env = square_pulse_matching(s, pi * (0.5 + u(rng)), EnergyBudget(0.5 + 4.0 * u(rng))); break;
      default: env = Envelope::sampled(g, oracle::smooth_signal(g.nodes(), rng, 6, 0.8));
    }
    const double th = pi * u(rng), ph = 2.0 * pi * u(rng), r = u(rng);
    const BlochState init{0.5 * (1.0 + r * std::cos(th)), 0.5 * (1.0 - r * std::cos(th)),
                          0.5 * r * std::sin(th) * std::cos(ph), 0.5 * r * std::sin(th) * std::sin(ph)};
    for (const auto& st : propagate(s, env, g, init, IntegratorConfig{.substeps = 4}).states)
      min_eig = std::min(min_eig, st.min_eigenvalue());
    ++count;
  }
  report(10, "relaxation and positivity", sup <= 1e-8 && min_eig >= -1e-9,
         fmt("free decay sup %.2e, min eigenvalue %.2e over %d trajectories", sup, min_eig, count));
}

}  // namespace

int main() {
  const std::function<void()> gates[] = {rwa_vs_analytic, soliton_normalization, fig1_quantitative, fig2_identity,
                                         euler_lagrange,  gradient_correctness,  global_extremum,   perturbation,
                                         morse_oracle,    relaxation};
  for (const auto& g : gates) {
    try {
      g();
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL (exception) %s\n", e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
