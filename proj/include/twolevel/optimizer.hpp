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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twolevel/dynamics.hpp"
#include "twolevel/fitness.hpp"
#include "twolevel/model.hpp"
#include "twolevel/pulses.hpp"

namespace twolevel {

/// Armijo backtracking. The first trial step of each iteration is the
/// Barzilai-Borwein step <s,s>/<s,y> from the previous accepted move when
/// enabled and defined, otherwise the last step times `growth`.
struct LineSearchPolicy {
  bool barzilai_borwein = true;
  double initial_step = 1.0;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double growth = 2.0;
  double max_step = 1e8;
  int max_backtracks = 60;
};

/// Random starts. Signed: random-phase cosine modes projected onto the
/// constraint set. Positive: sin(pi x) exp(s * noise) over sine modes, with the contrast
/// s fitted so the start meets area and energy exactly; used only when
/// target_area is set and nonzero. Signed starts of the loss problem often
/// settle in the three-soliton local minimum (+pi, +pi, -pi lobes).
enum class InitKind { Positive, Signed };

/// Direct optimal control of a sampled envelope on the energy sphere
/// integral V^2 dt = E0. With target_area set, the pulse area theta(t1) is
/// also held fixed; for the loss functional this is the boundary condition
/// theta(+inf) = pi, without which the fixed-energy problem on a finite
/// window has no minimizer (a pulse squeezed against t1 drives Q22 to 0).
struct OptimizationProblem {
  TwoLevelSystem sys;
  TimeGrid grid;
  FitnessSpec spec;
  EnergyBudget budget;
  std::optional<Envelope> init;
  std::optional<double> target_area;
  int max_iters = 2000;
  LineSearchPolicy line_search{};
  double tol_grad = 1e-8;
  std::uint64_t seed = 42;
  int init_modes = 4;
  InitKind init_kind = InitKind::Positive;
  IntegratorConfig integrator{.substeps = 4};

  void validate() const;
};

/// Costates conjugate to (rho11, rho22, re12, im12) at the grid nodes: the
/// discrete Lagrange multiplier density of the dynamics constraint.
struct AdjointTrajectory {
  TimeGrid grid;
  std::vector<std::array<double, 4>> costates;
};

struct FunctionalGradient {
  double fitness;
  std::vector<double> gradient;  ///< dQ/dV_i divided by the trapezoid weight
  AdjointTrajectory adjoint;
};

/// Exact gradient of the discretized fitness (RK4 with linear field
/// interpolation, the same scheme as propagate) by reverse-mode adjoint
/// integration. Values are samples on prob.grid.
FunctionalGradient functional_gradient(const OptimizationProblem& prob, std::span<const double> values);

/// Fitness gradient projected onto the constraint tangent space:
/// g - <g,V>/<V,V> V for the energy sphere, and additionally orthogonal to
/// the constant function when the area is fixed.
std::vector<double> gradient(const OptimizationProblem& prob, const Envelope& env);

std::vector<double> project_tangent(const OptimizationProblem& prob, std::span<const double> values,
                                    std::span<const double> g);

/// Nearest point on the constraint set (energy sphere, intersected with the
/// area hyperplane when target_area is set). Throws NumericError when the
/// set is empty (E0 below the Cauchy-Schwarz bound area^2 / (mu^2 T)).
std::vector<double> project_to_constraints(const OptimizationProblem& prob, std::span<const double> values);

/// Q22 gradient with gamma = 0 from rho22 = sin^2(theta): the exact gradient
/// of sum_j w_j sin^2(theta_j) with trapezoid areas, divided by the weights.
/// Interior entries equal mu * trapz_{t_i}^{t1} sin(2 theta).
std::vector<double> area_form_gradient(const TwoLevelSystem& sys, const TimeGrid& grid,
                                       std::span<const double> values);

/// Smooth random start from up to init_modes cosine modes with random phases
/// and normal amplitudes; see InitKind.
Envelope random_initial_envelope(const OptimizationProblem& prob);

/// Fitness of a sampled envelope under the problem's integrator.
double fitness_of(const OptimizationProblem& prob, std::span<const double> values);

struct OptimizationReport {
  Envelope final_envelope;
  double final_fitness;
  std::vector<double> fitness_history;
  std::vector<double> grad_norm_history;
  bool converged;
  int iterations;
  std::string stop_reason;
  /// <g, V> / (2 E0) at the final iterate: the energy-constraint multiplier.
  double energy_multiplier;
};

/// Projected-gradient iteration with Armijo backtracking. Stops with
/// converged = true at tol_grad ("tol_grad") or when fitness rounding hides
/// any further gain ("fitness_resolution": the line search stalls below the
/// resolution, or 20 accepted steps in a row gain less than it). Never throws
/// for non-convergence; see `converged` and `stop_reason`.
OptimizationReport optimize(const OptimizationProblem& prob);

struct AuditConfig {
  TimeGrid grid;
  int n_trials = 100;
  std::uint64_t seed = 7;
  double amplitude = 1e-2;  ///< perturbation norm relative to the optimum's norm
  int modes = 8;
  IntegratorConfig integrator{.substeps = 4};
  double tolerance = 1e-9;
};

struct AuditRow {
  int trial;
  double fitness;
  double delta;          ///< fitness minus the optimum's fitness
  bool signed_envelope;  ///< the perturbed pulse changes sign
};

struct AuditTable {
  double baseline;
  std::vector<AuditRow> rows;
  double worst_improvement;  ///< largest improvement over the optimum (<= 0 when none)
  bool passed;
  bool signed_winner;
};

/// Energy-preserving random perturbations of the analytic optimum for the
/// fitness: the sampled soliton for IntegratedUpper, the constant pulse for
/// TerminalUpper (config.grid must end at t_control). Trials run in batches
/// through the lane kernels.
AuditTable perturbation_audit(const TwoLevelSystem& sys, EnergyBudget budget, const FitnessSpec& spec,
                              const AuditConfig& config);

}  // namespace twolevel
