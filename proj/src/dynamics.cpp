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

#include "twolevel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twolevel/bloch_step.hpp"
#include "twolevel/errors.hpp"

namespace twolevel {

using detail::Vec4;

void IntegratorConfig::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("integrator dt_max must be > 0");
  if (substeps < 1) throw std::invalid_argument("integrator substeps must be >= 1");
}

int IntegratorConfig::steps_per_interval(const TimeGrid& grid) const {
  validate();
  int m = substeps;
  if (std::isfinite(dt_max)) {
    const double needed = std::ceil(grid.dt() / dt_max);
    if (needed > 1e7) throw std::invalid_argument("integrator dt_max is too small for this grid");
    m = std::max(m, static_cast<int>(needed));
  }
  return m;
}

namespace {

bool finite(const Vec4& y) {
  return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]) && std::isfinite(y[3]);
}

// Advances over [a, b] where the envelope is smooth (no breakpoints inside).
Vec4 smooth_step(const detail::BlochCoefficients& c, const Envelope& env, const Vec4& y, double a, double b) {
  const double va = env.limit(a, Side::Right);
  const double vb = env(0.5 * (a + b));
  const double vc = env.limit(b, Side::Left);
  return detail::rk4_step(c, y, va, vb, vc, b - a);
}

}  // namespace

BlochTrajectory propagate(const TwoLevelSystem& sys, const Envelope& env, const TimeGrid& grid,
                          const BlochState& init, const IntegratorConfig& cfg) {
  const int m = cfg.steps_per_interval(grid);
  const detail::BlochCoefficients c(sys);
  BlochTrajectory traj{grid, {}};
  traj.states.reserve(grid.size());
  traj.states.push_back(init);
  Vec4 y = detail::to_vec(init);
  if (!finite(y)) throw IntegrationError("non-finite initial state", grid.t0());

  const auto* sampled = env.as<SampledShape>();
  const bool on_grid = sampled && sampled->grid == grid;

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double left = grid.node(i);
    const double right = grid.node(i + 1);
    const double h = (right - left) / m;
    for (int k = 0; k < m; ++k) {
      if (on_grid) {
        const auto f = detail::stage_fractions(k, m);
        const double v0 = sampled->values[i];
        const double v1 = sampled->values[i + 1];
        y = detail::rk4_step(c, y, detail::lerp_field(v0, v1, f[0]), detail::lerp_field(v0, v1, f[1]),
                             detail::lerp_field(v0, v1, f[2]), h);
      } else {
        const double a = left + k * h;
        const double b = k + 1 == m ? right : left + (k + 1) * h;
        double start = a;
        for (double bp : env.breakpoints(a, b)) {
          y = smooth_step(c, env, y, start, bp);
          start = bp;
        }
        y = smooth_step(c, env, y, start, b);
      }
      if (!finite(y)) throw IntegrationError("non-finite Bloch state", left + (k + 1) * h);
    }
    traj.states.push_back(detail::to_state(y));
  }
  return traj;
}

std::vector<double> analytic_rho22(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid) {
  auto area = pulse_area(env, sys, grid);
  for (double& th : area.theta) {
    const double s = std::sin(th);
    th = s * s;
  }
  return area.theta;
}

double adiabaticity_ratio(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid) {
  const auto v = sample_values(env, grid);
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) throw std::invalid_argument("adiabaticity_ratio: envelope is identically zero");
  const double threshold = 1e-3 * peak;
  const double dt = grid.dt();
  const std::size_t n = v.size();
  double ratio = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(v[i]) <= threshold) continue;
    double dv;
    if (i == 0)
      dv = (v[1] - v[0]) / dt;
    else if (i + 1 == n)
      dv = (v[n - 1] - v[n - 2]) / dt;
    else
      dv = (v[i + 1] - v[i - 1]) / (2.0 * dt);
    const double a = std::abs(v[i]);
    ratio = std::max(ratio, std::abs(dv * sys.omega()) / (a * a * a));
  }
  return ratio;
}

}  // namespace twolevel
