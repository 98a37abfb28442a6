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

#include <numbers>
#include <vector>

#include "twolevel/model.hpp"
#include "twolevel/pulses.hpp"

namespace twolevel {

/// Euler-Lagrange problem for the loss Lagrangian sin^2(theta) + lambda
/// thetadot^2 / mu^2 on a finite window standing in for the real line.
struct VariationalProblem {
  TwoLevelSystem sys;
  double lambda;
  TimeGrid window;
  double theta_left = 0.0;
  double theta_right = std::numbers::pi;

  /// Rejects lambda <= 0, and boundary areas that are not multiples of pi
  /// with theta_right >= theta_left.
  void validate() const;
  /// Number of pi transitions between the boundary areas.
  int transitions() const;
};

/// 2 lambda thetaddot - mu^2 sin(2 theta) at interior nodes 1..n-2. The
/// second derivative uses the five-point stencil where both neighbours
/// exist and the three-point stencil at nodes 1 and n-2.
std::vector<double> el_residual(const AreaProfile& theta, const VariationalProblem& prob);

struct PendulumSolution {
  AreaProfile area;
  Envelope envelope;     ///< thetadot / mu, sampled on the window grid
  double initial_slope;  ///< thetadot at the left edge found by shooting
  int bisections;
};

/// Shooting on the initial slope with bisection. The solution connecting
/// two multiples of pi is symmetric about the window midpoint, so the shot
/// targets theta(mid) = (theta_left + theta_right) / 2, which keeps the root
/// well separated from rounding noise. The second half is the mirror image
/// of the first, so theta(t1) = theta_right holds by construction.
/// N > 1 transitions are assembled from the single transition on N equal
/// sub-windows, each needing at least 20 soliton widths.
/// Throws NumericError when the window is too narrow or the midpoint shot misses by more than 1e-9.
PendulumSolution solve_pendulum_bvp(const VariationalProblem& prob, int substeps = 4);

struct DeltaKickSolution {
  AreaProfile area;
  Envelope envelope;
};

/// Terminal-control case: the delta source only acts at t_control, so away
/// from it thetaddot = 0 and theta is linear with theta(0) = 0,
/// theta(t_control) = pi/2. The envelope is the constant slope / mu.
DeltaKickSolution solve_delta_case(const TwoLevelSystem& sys, double t_control, std::size_t n = 1001);

double lambda_from_energy(const TwoLevelSystem& sys, EnergyBudget budget);

}  // namespace twolevel
