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

#include "twolevel/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "twolevel/bloch_step.hpp"
#include "twolevel/errors.hpp"
#include "twolevel/kernels.hpp"

namespace twolevel {

using detail::Vec4;

namespace {

double dot_w(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  return kernels::weighted_dot(a, b, w);
}

// Objective sign: the optimizer always minimizes sign * Q.
double direction_sign(const FitnessSpec& spec) { return spec.minimize() ? 1.0 : -1.0; }

void check_values(const OptimizationProblem& prob, std::span<const double> values) {
  if (values.size() != prob.grid.size())
    throw std::invalid_argument("envelope samples do not match the optimization grid");
}

std::vector<double> fourier_noise(const TimeGrid& grid, int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> a(static_cast<std::size_t>(modes)), p(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    a[k] = amp(rng);
    p[k] = phase(rng);
  }
  std::vector<double> out(grid.size(), 0.0);
  const double L = grid.length();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = (grid.node(i) - grid.t0()) / L;
    for (int k = 0; k < modes; ++k) out[i] += a[k] * std::cos(std::numbers::pi * (k + 1) * x + p[k]);
  }
  return out;
}

// Dirichlet modes sin(pi (k+1) x): the start vanishes at the window edges,
// where a pulse would otherwise stick.
std::vector<double> sine_noise(const TimeGrid& grid, int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> amp(0.0, 1.0);
  std::vector<double> out(grid.size(), 0.0);
  const double L = grid.length();
  for (int k = 0; k < modes; ++k) {
    const double a = amp(rng);
    for (std::size_t i = 0; i < grid.size(); ++i)
      out[i] += a * std::sin(std::numbers::pi * (k + 1) * (grid.node(i) - grid.t0()) / L);
  }
  return out;
}

}  // namespace

void OptimizationProblem::validate() const {
  spec.check_grid(grid);
  integrator.validate();
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(tol_grad > 0.0)) throw std::invalid_argument("tol_grad must be > 0");
  if (init_modes < 1 || init_modes > 8) throw std::invalid_argument("init_modes must be in [1, 8]");
  const auto& ls = line_search;
  if (!(ls.initial_step > 0.0) || !(ls.armijo > 0.0 && ls.armijo < 1.0) || !(ls.backtrack > 0.0 && ls.backtrack < 1.0) ||
      !(ls.growth >= 1.0) || !(ls.max_step >= ls.initial_step) || ls.max_backtracks < 1)
    throw std::invalid_argument("invalid line-search policy");
  if (target_area && !std::isfinite(*target_area)) throw std::invalid_argument("target_area must be finite");
  if (init) {
    const auto* s = init->as<SampledShape>();
    if (!s || !(s->grid == grid)) throw std::invalid_argument("initial envelope must be sampled on the optimization grid");
  }
}

double fitness_of(const OptimizationProblem& prob, std::span<const double> values) {
  check_values(prob, values);
  const auto env = Envelope::sampled(prob.grid, std::vector<double>(values.begin(), values.end()));
  return evaluate(prob.spec, propagate(prob.sys, env, prob.grid, ground_state(), prob.integrator));
}

FunctionalGradient functional_gradient(const OptimizationProblem& prob, std::span<const double> values) {
  check_values(prob, values);
  const TimeGrid& grid = prob.grid;
  const std::size_t n = grid.size();
  const int m = prob.integrator.steps_per_interval(grid);
  const detail::BlochCoefficients c(prob.sys);
  const auto weights = fitness_weights(prob.spec, grid);

  // Forward sweep, keeping the state at the start of every RK4 step.
  std::vector<Vec4> starts((n - 1) * static_cast<std::size_t>(m));
  Vec4 y = detail::to_vec(ground_state());
  double fitness = weights[0] * y[1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = (grid.node(i + 1) - grid.node(i)) / m;
    for (int k = 0; k < m; ++k) {
      starts[i * m + k] = y;
      const auto f = detail::stage_fractions(k, m);
      y = detail::rk4_step(c, y, detail::lerp_field(values[i], values[i + 1], f[0]),
                           detail::lerp_field(values[i], values[i + 1], f[1]),
                           detail::lerp_field(values[i], values[i + 1], f[2]), h);
      if (!std::isfinite(y[0] + y[1] + y[2] + y[3]))
        throw IntegrationError("non-finite state in adjoint forward sweep", grid.node(i));
    }
    fitness += weights[i + 1] * y[1];
  }

  // Reverse sweep. The fitness is sum_j c_j rho22(t_j), so every node
  // injects c_j into the rho22 costate.
  AdjointTrajectory adjoint{grid, std::vector<std::array<double, 4>>(n)};
  std::vector<double> dq(n, 0.0);
  Vec4 lam{0.0, weights[n - 1], 0.0, 0.0};
  adjoint.costates[n - 1] = lam;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double h = (grid.node(i + 1) - grid.node(i)) / m;
    const double v0 = values[i];
    const double v1 = values[i + 1];
    for (int k = m - 1; k >= 0; --k) {
      const Vec4& ys = starts[i * m + k];
      const auto f = detail::stage_fractions(k, m);
      const double va = detail::lerp_field(v0, v1, f[0]);
      const double vb = detail::lerp_field(v0, v1, f[1]);
      const double vc = detail::lerp_field(v0, v1, f[2]);
      const auto sens = detail::rk4_step_field_derivatives(c, ys, va, vb, vc, h);
      for (int s = 0; s < 3; ++s) {
        const double d = lam[0] * sens[s][0] + lam[1] * sens[s][1] + lam[2] * sens[s][2] + lam[3] * sens[s][3];
        dq[i] += (1.0 - f[s]) * d;
        dq[i + 1] += f[s] * d;
      }
      // lam <- S^T lam, with S the (linear) one-step map.
      Vec4 next{};
      for (int j = 0; j < 4; ++j) {
        Vec4 e{0.0, 0.0, 0.0, 0.0};
        e[j] = 1.0;
        const Vec4 col = detail::rk4_step(c, e, va, vb, vc, h);
        next[j] = lam[0] * col[0] + lam[1] * col[1] + lam[2] * col[2] + lam[3] * col[3];
      }
      lam = next;
    }
    lam[1] += weights[i];
    adjoint.costates[i] = lam;
  }

  const auto w = grid.trapezoid_weights();
  for (std::size_t i = 0; i < n; ++i) dq[i] /= w[i];
  return {fitness, std::move(dq), std::move(adjoint)};
}

std::vector<double> project_tangent(const OptimizationProblem& prob, std::span<const double> values,
                                    std::span<const double> g) {
  check_values(prob, values);
  check_values(prob, g);
  const auto w = prob.grid.trapezoid_weights();
  std::vector<double> out(g.begin(), g.end());
  std::vector<double> v(values.begin(), values.end());
  if (prob.target_area) {
    const std::vector<double> ones(values.size(), 1.0);
    const double L = dot_w(ones, ones, w);
    const double gm = dot_w(out, ones, w) / L;
    const double vm = dot_w(v, ones, w) / L;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] -= gm;
      v[i] -= vm;
    }
  }
  const double vv = dot_w(v, v, w);
  if (vv > 0.0) {
    const double coef = dot_w(out, v, w) / vv;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= coef * v[i];
  }
  return out;
}

std::vector<double> project_to_constraints(const OptimizationProblem& prob, std::span<const double> values) {
  check_values(prob, values);
  const auto w = prob.grid.trapezoid_weights();
  const double e0 = prob.budget.e0();
  std::vector<double> v(values.begin(), values.end());
  if (!prob.target_area) {
    const double vv = dot_w(v, v, w);
    if (!(vv > 0.0)) throw NumericError("cannot project the zero envelope onto the energy sphere");
    const double scale = std::sqrt(e0 / vv);
    for (double& x : v) x *= scale;
    return v;
  }
  const std::vector<double> ones(v.size(), 1.0);
  const double L = dot_w(ones, ones, w);
  const double mean = (*prob.target_area / prob.sys.mu()) / L;
  const double radius2 = e0 - mean * mean * L;
  if (!(radius2 >= 0.0))
    throw NumericError("energy budget is below the Cauchy-Schwarz bound for the requested pulse area");
  const double vm = dot_w(v, ones, w) / L;
  for (double& x : v) x -= vm;
  const double rr = dot_w(v, v, w);
  if (radius2 > 0.0 && !(rr > 0.0)) throw NumericError("cannot project a constant envelope onto the constraint set");
  const double scale = radius2 > 0.0 ? std::sqrt(radius2 / rr) : 0.0;
  for (double& x : v) x = mean + scale * x;
  return v;
}

std::vector<double> gradient(const OptimizationProblem& prob, const Envelope& env) {
  const auto v = sample_values(env, prob.grid);
  const auto fg = functional_gradient(prob, v);
  return project_tangent(prob, v, fg.gradient);
}

std::vector<double> area_form_gradient(const TwoLevelSystem& sys, const TimeGrid& grid,
                                       std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("area_form_gradient: samples do not match grid");
  const std::size_t n = grid.size();
  const double mu = sys.mu();
  const auto theta = cumulative_trapezoid(grid, values);
  const auto w = grid.trapezoid_weights();
  // d/dV_i of sum_j w_j sin^2(mu theta_j): theta_j depends on V_i with
  // weight dt/2 at the interval ends it touches.
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = w[j] * std::sin(2.0 * mu * theta[j]);
  std::vector<double> tail(n + 1, 0.0);  // tail[j] = sum_{k >= j} s[k]
  for (std::size_t j = n; j-- > 0;) tail[j] = tail[j + 1] + s[j];
  const double half = 0.5 * grid.dt();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Intervals [i-1, i] and [i, i+1] each carry V_i with weight dt/2.
    double d = 0.0;
    if (i > 0) d += half * tail[i];
    if (i + 1 < n) d += half * tail[i + 1];
    g[i] = mu * d / w[i];
  }
  return g;
}

namespace {

// sin(pi x) exp(s * noise) scaled to the target area. The energy grows monotonically
// with the contrast s, so bisection on s meets the budget exactly.
std::optional<std::vector<double>> positive_start(const OptimizationProblem& prob, std::span<const double> noise) {
  const auto w = prob.grid.trapezoid_weights();
  const double area = *prob.target_area / prob.sys.mu();
  double sd = 0.0;
  for (double x : noise) sd += x * x;
  sd = std::sqrt(sd / static_cast<double>(noise.size()));
  if (!(sd > 0.0)) return std::nullopt;
  const double peak = *std::max_element(noise.begin(), noise.end());

  const TimeGrid& grid = prob.grid;
  std::vector<double> taper(noise.size());
  for (std::size_t i = 0; i < taper.size(); ++i)
    taper[i] = std::sin(std::numbers::pi * (grid.node(i) - grid.t0()) / grid.length());

  std::vector<double> v(noise.size());
  auto shaped = [&](double s) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = taper[i] * std::exp(s * (noise[i] - peak) / sd);
    const double scale = area / dot_w(v, std::vector<double>(v.size(), 1.0), w);
    for (double& x : v) x *= scale;
    return dot_w(v, v, w);
  };
  const double e0 = prob.budget.e0();
  if (shaped(0.0) > e0) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  while (shaped(hi) < e0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return std::nullopt;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-14 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (shaped(mid) < e0 ? lo : hi) = mid;
  }
  shaped(0.5 * (lo + hi));

  // Position is a flat direction of the loss; start with the half-area
  // point at the window midpoint so no pulse is born against an edge.
  const auto theta = cumulative_trapezoid(grid, v);
  const auto half = std::lower_bound(theta.begin(), theta.end(), 0.5 * theta.back());
  const auto shift = static_cast<std::ptrdiff_t>(v.size() / 2) - (half - theta.begin());
  std::vector<double> centred(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto j = static_cast<std::ptrdiff_t>(i) - shift;
    if (j >= 0 && j < static_cast<std::ptrdiff_t>(v.size())) centred[i] = v[static_cast<std::size_t>(j)];
  }
  return project_to_constraints(prob, centred);
}

}  // namespace

Envelope random_initial_envelope(const OptimizationProblem& prob) {
  std::mt19937_64 rng(prob.seed);
  if (prob.init_kind == InitKind::Positive && prob.target_area && *prob.target_area != 0.0) {
    auto v = positive_start(prob, sine_noise(prob.grid, prob.init_modes, rng));
    if (v) {
      if (*prob.target_area < 0.0)
        for (double& x : *v) x = -x;
      return Envelope::sampled(prob.grid, std::move(*v));
    }
  }
  return Envelope::sampled(prob.grid, project_to_constraints(prob, fourier_noise(prob.grid, prob.init_modes, rng)));
}

namespace {

// Smallest fitness change that evaluation rounding can be trusted to show.
// Accepted steps in a row whose gain is below the resolution.
constexpr int kFlatSteps = 20;

double resolution(double q) { return 100.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(q), 1e-300); }

// A stalled line search has hit rounding rather than a bad direction when no
// trial promised a first-order gain above the resolution, or when the trials
// that did follow dq = -a |g|^2 + k a^2 with a stable k > 0 and the best gain
// |g|^4 / 4k of that model is itself below the resolution.
bool below_resolution(const std::vector<std::pair<double, double>>& rejected, double gg, double q) {
  const double res = resolution(q);
  std::vector<double> k;
  for (auto it = rejected.rbegin(); it != rejected.rend() && k.size() < 2; ++it) {
    const auto [a, dq] = *it;
    if (a * gg > 10.0 * res) k.push_back((dq + a * gg) / (a * a));
  }
  if (k.empty()) return true;
  if (k.size() < 2 || !(k[0] > 0.0) || !(k[1] > 0.0)) return false;
  const double ratio = k[0] / k[1];
  if (ratio < 2.0 / 3.0 || ratio > 1.5) return false;
  return gg * gg / (4.0 * k[0]) <= res;
}

}  // namespace

OptimizationReport optimize(const OptimizationProblem& prob) {
  prob.validate();
  const double sign = direction_sign(prob.spec);
  const auto w = prob.grid.trapezoid_weights();
  const auto& ls = prob.line_search;

  std::vector<double> v = prob.init ? project_to_constraints(prob, sample_values(*prob.init, prob.grid))
                                    : sample_values(random_initial_envelope(prob), prob.grid);

  auto fg = functional_gradient(prob, v);
  double q = fitness_of(prob, v);
  auto g = project_tangent(prob, v, fg.gradient);
  double gnorm = std::sqrt(dot_w(g, g, w));

  OptimizationReport report{Envelope::sampled(prob.grid, v), q, {q}, {gnorm}, false, 0, "max_iters", 0.0};
  double step = ls.initial_step;
  std::vector<double> trial(v.size());
  int flat_steps = 0;
  while (true) {
    if (gnorm <= prob.tol_grad) {
      report.converged = true;
      report.stop_reason = "tol_grad";
      break;
    }
    if (flat_steps >= kFlatSteps) {
      report.converged = true;
      report.stop_reason = "fitness_resolution";
      break;
    }
    if (report.iterations >= prob.max_iters) break;

    bool accepted = false;
    double q_trial = q;
    std::vector<std::pair<double, double>> rejected;
    for (int b = 0; b < ls.max_backtracks; ++b) {
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] - sign * step * g[i];
      trial = project_to_constraints(prob, trial);
      q_trial = fitness_of(prob, trial);
      if (sign * q_trial <= sign * q - ls.armijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      rejected.emplace_back(step, sign * (q_trial - q));
      step *= ls.backtrack;
    }
    if (!accepted) {
      if (below_resolution(rejected, gnorm * gnorm, q)) {
        report.converged = true;
        report.stop_reason = "fitness_resolution";
      } else {
        report.stop_reason = "line_search_stalled";
      }
      break;
    }
    flat_steps = sign * (q - q_trial) <= resolution(q) ? flat_steps + 1 : 0;
    std::vector<double> s_k(v.size()), y_k(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s_k[i] = trial[i] - v[i];
    v = trial;
    fg = functional_gradient(prob, v);
    q = q_trial;
    auto g_new = project_tangent(prob, v, fg.gradient);
    for (std::size_t i = 0; i < v.size(); ++i) y_k[i] = sign * (g_new[i] - g[i]);
    g = std::move(g_new);
    gnorm = std::sqrt(dot_w(g, g, w));
    ++report.iterations;
    report.fitness_history.push_back(q);
    report.grad_norm_history.push_back(gnorm);
    const double sy = dot_w(s_k, y_k, w);
    if (ls.barzilai_borwein && sy > 0.0)
      step = std::clamp(dot_w(s_k, s_k, w) / sy, 1e-12, ls.max_step);
    else
      step = std::min(step * ls.growth, ls.max_step);
  }

  report.energy_multiplier = dot_w(fg.gradient, v, w) / (2.0 * prob.budget.e0());
  report.final_fitness = q;
  report.final_envelope = Envelope::sampled(prob.grid, std::move(v));
  return report;
}

AuditTable perturbation_audit(const TwoLevelSystem& sys, EnergyBudget budget, const FitnessSpec& spec,
                              const AuditConfig& config) {
  if (config.n_trials < 1) throw std::invalid_argument("audit needs at least one trial");
  if (!(config.amplitude >= 0.0)) throw std::invalid_argument("audit amplitude must be >= 0");
  if (config.modes < 1) throw std::invalid_argument("audit modes must be >= 1");
  const TimeGrid& grid = config.grid;
  spec.check_grid(grid);

  std::vector<double> optimum;
  if (spec.minimize()) {
    optimum = sample_values(soliton_envelope(sys, budget), grid);
  } else {
    if (spec.terminal()->t_control != grid.t1())
      throw std::invalid_argument("terminal audit grid must end at t_control");
    optimum.assign(grid.size(), std::sqrt(budget.e0() / grid.length()));
  }
  const auto w = grid.trapezoid_weights();
  const double energy_scale = budget.e0();
  const double fit = std::sqrt(energy_scale / dot_w(optimum, optimum, w));
  for (double& x : optimum) x *= fit;
  const double norm = std::sqrt(energy_scale);

  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<double>> fields;
  fields.reserve(static_cast<std::size_t>(config.n_trials) + 1);
  fields.push_back(optimum);
  for (int t = 0; t < config.n_trials; ++t) {
    auto d = fourier_noise(grid, config.modes, rng);
    if (config.amplitude == 0.0) {
      fields.push_back(optimum);
      continue;
    }
    const double dn = std::sqrt(dot_w(d, d, w));
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = optimum[i] + config.amplitude * norm / dn * d[i];
    const double scale = std::sqrt(energy_scale / dot_w(p, p, w));
    for (double& x : p) x *= scale;
    fields.push_back(std::move(p));
  }

  const auto trajs = kernels::propagate_batch(sys, grid, config.integrator, fields, ground_state());
  AuditTable table{evaluate(spec, trajs[0]), {}, 0.0, true, false};
  const double sign = direction_sign(spec);
  for (int t = 0; t < config.n_trials; ++t) {
    const auto& field = fields[static_cast<std::size_t>(t) + 1];
    const double q = evaluate(spec, trajs[static_cast<std::size_t>(t) + 1]);
    const double delta = q - table.baseline;
    const double peak = *std::max_element(field.begin(), field.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    const bool signed_env = std::any_of(field.begin(), field.end(), [&](double x) { return x * peak < 0.0; });
    const double improvement = -sign * delta;
    table.worst_improvement = std::max(table.worst_improvement, improvement);
    if (improvement > config.tolerance) {
      table.passed = false;
      if (signed_env) table.signed_winner = true;
    }
    table.rows.push_back({t, q, delta, signed_env});
  }
  return table;
}

}  // namespace twolevel
