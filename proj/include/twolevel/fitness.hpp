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

#include <span>
#include <variant>
#include <vector>

#include "twolevel/model.hpp"

namespace twolevel {

/// Q22: time integral of the upper-level occupation (minimized; proportional
/// to propagation losses).
struct IntegratedUpper {};

/// rho22 at a single control time (maximized).
struct TerminalUpper {
  double t_control = 0.0;
};

class FitnessSpec {
 public:
  using Kind = std::variant<IntegratedUpper, TerminalUpper>;

  static FitnessSpec integrated_upper() { return FitnessSpec(IntegratedUpper{}); }
  static FitnessSpec terminal_upper(double t_control);

  const Kind& kind() const noexcept { return kind_; }
  bool minimize() const noexcept { return std::holds_alternative<IntegratedUpper>(kind_); }
  const TerminalUpper* terminal() const noexcept { return std::get_if<TerminalUpper>(&kind_); }

  /// Throws std::invalid_argument when the control time lies outside grid.
  void check_grid(const TimeGrid& grid) const;

 private:
  explicit FitnessSpec(Kind k) : kind_(k) {}
  Kind kind_;
};

double evaluate(const FitnessSpec& spec, const BlochTrajectory& traj);

/// Same functional, applied to an upper-level occupation series on grid.
double evaluate_rho22(const FitnessSpec& spec, const TimeGrid& grid, std::span<const double> rho22);

/// Weights c_i with fitness = sum_i c_i rho22_i (the functional is linear in
/// the occupations).
std::vector<double> fitness_weights(const FitnessSpec& spec, const TimeGrid& grid);

/// Running integral of rho22 from grid.t0; the last element is Q22.
std::vector<double> integrated_occupation_curve(const BlochTrajectory& traj);

}  // namespace twolevel
