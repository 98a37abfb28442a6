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

#include "twolevel/fitness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twolevel {

FitnessSpec FitnessSpec::terminal_upper(double t_control) {
  if (!std::isfinite(t_control)) throw std::invalid_argument("t_control must be finite");
  return FitnessSpec(TerminalUpper{t_control});
}

void FitnessSpec::check_grid(const TimeGrid& grid) const {
  if (const auto* t = terminal(); t && !grid.contains(t->t_control))
    throw std::invalid_argument("t_control=" + std::to_string(t->t_control) + " lies outside [" +
                                std::to_string(grid.t0()) + ", " + std::to_string(grid.t1()) + "]");
}

namespace {

struct Bracket {
  std::size_t i;
  double f;
};

Bracket locate(const TimeGrid& grid, double t) {
  std::size_t i = static_cast<std::size_t>((t - grid.t0()) / grid.dt());
  if (i >= grid.size() - 1) i = grid.size() - 2;
  return {i, (t - grid.node(i)) / grid.dt()};
}

}  // namespace

double evaluate_rho22(const FitnessSpec& spec, const TimeGrid& grid, std::span<const double> rho22) {
  if (rho22.size() != grid.size()) throw std::invalid_argument("evaluate: occupation series does not match grid");
  spec.check_grid(grid);
  if (const auto* t = spec.terminal()) {
    const auto [i, f] = locate(grid, t->t_control);
    return (1.0 - f) * rho22[i] + f * rho22[i + 1];
  }
  return trapezoid(grid, rho22);
}

double evaluate(const FitnessSpec& spec, const BlochTrajectory& traj) {
  const auto r = traj.rho22();
  return evaluate_rho22(spec, traj.grid, r);
}

std::vector<double> fitness_weights(const FitnessSpec& spec, const TimeGrid& grid) {
  spec.check_grid(grid);
  if (const auto* t = spec.terminal()) {
    std::vector<double> c(grid.size(), 0.0);
    const auto [i, f] = locate(grid, t->t_control);
    c[i] += 1.0 - f;
    c[i + 1] += f;
    return c;
  }
  return grid.trapezoid_weights();
}

std::vector<double> integrated_occupation_curve(const BlochTrajectory& traj) {
  const auto r = traj.rho22();
  return cumulative_trapezoid(traj.grid, r);
}

}  // namespace twolevel
