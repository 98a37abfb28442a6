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

#include "twolevel/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twolevel {

TwoLevelSystem::TwoLevelSystem(double mu, double gamma1, double gamma2, double omega)
    : mu_(mu), gamma1_(gamma1), gamma2_(gamma2), omega_(omega) {
  if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("mu must be finite and > 0");
  if (!(std::isfinite(gamma1) && gamma1 >= 0.0)) throw std::invalid_argument("gamma1 must be finite and >= 0");
  if (!(std::isfinite(gamma2) && gamma2 >= 0.0)) throw std::invalid_argument("gamma2 must be finite and >= 0");
  if (!(std::isfinite(omega) && omega > 0.0)) throw std::invalid_argument("omega must be finite and > 0");
}

TimeGrid::TimeGrid(double t0, double t1, std::size_t n) : t0_(t0), t1_(t1), n_(n), dt_(0.0) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw std::invalid_argument("grid bounds must be finite");
  if (!(t1 > t0)) throw std::invalid_argument("grid requires t1 > t0");
  if (n < 2) throw std::invalid_argument("grid requires at least 2 nodes, got " + std::to_string(n));
  dt_ = (t1 - t0) / static_cast<double>(n - 1);
  if (!(dt_ > 0.0)) throw std::invalid_argument("grid spacing underflows");
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

std::vector<double> TimeGrid::trapezoid_weights() const {
  std::vector<double> w(n_, dt_);
  w.front() = 0.5 * dt_;
  w.back() = 0.5 * dt_;
  return w;
}

TimeGrid make_grid(double t0, double t1, std::size_t n) { return TimeGrid(t0, t1, n); }

double BlochState::min_eigenvalue() const noexcept {
  const double mean = 0.5 * (rho11 + rho22);
  const double half_gap = 0.5 * (rho11 - rho22);
  return mean - std::sqrt(half_gap * half_gap + re12 * re12 + im12 * im12);
}

BlochState ground_state() noexcept { return BlochState{1.0, 0.0, 0.0, 0.0}; }

std::vector<double> BlochTrajectory::rho22() const {
  std::vector<double> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i].rho22;
  return out;
}

double trapezoid(const TimeGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("trapezoid: sample count does not match grid");
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) interior += values[i];
  return grid.dt() * (interior + 0.5 * (values.front() + values.back()));
}

std::vector<double> cumulative_trapezoid(const TimeGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("cumulative_trapezoid: sample count does not match grid");
  std::vector<double> out(values.size(), 0.0);
  const double half = 0.5 * grid.dt();
  for (std::size_t i = 1; i < values.size(); ++i) out[i] = out[i - 1] + half * (values[i - 1] + values[i]);
  return out;
}

}  // namespace twolevel
