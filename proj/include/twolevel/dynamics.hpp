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

#include <limits>
#include <vector>

#include "twolevel/model.hpp"
#include "twolevel/pulses.hpp"

namespace twolevel {

/// Fixed-step RK4. Each grid interval is split into
/// max(substeps, ceil(dt / dt_max)) equal steps; steps are further split at
/// envelope discontinuities so the forcing is smooth inside every step.
struct IntegratorConfig {
  double dt_max = std::numeric_limits<double>::infinity();
  int substeps = 1;

  void validate() const;
  int steps_per_interval(const TimeGrid& grid) const;
};

/// Integrates the RWA Liouville equations and records the state at every
/// grid node. Both populations are integrated; the trace is never imposed.
/// Throws IntegrationError on a non-finite state.
BlochTrajectory propagate(const TwoLevelSystem& sys, const Envelope& env, const TimeGrid& grid,
                          const BlochState& init, const IntegratorConfig& cfg = {});

/// sin^2(theta) at each node: the exact upper-level occupation when
/// gamma1 = gamma2 = 0 and the system starts in the ground state.
std::vector<double> analytic_rho22(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid);

/// max |dV/dt * omega| / |V|^3 over nodes where |V| exceeds 1e-3 of its peak,
/// derivative by central differences (one-sided at the ends).
double adiabaticity_ratio(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid);

}  // namespace twolevel
