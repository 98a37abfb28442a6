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

#include "twolevel/variational.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "twolevel/errors.hpp"

namespace twolevel {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_multiple_of_pi(double x) {
  const double k = std::round(x / kPi);
  return std::abs(x - k * kPi) <= 1e-12 * std::max(1.0, std::abs(x));
}

// First integral of 2 lambda thetaddot = mu^2 sin(2 theta) for a solution
// leaving theta_left with slope s: thetadot = sqrt(mu^2 sin^2(theta) / lambda + s^2).
// Integrating this form keeps the tiny conserved energy lambda s^2 exact;
// the second-order form drifts by more than it near the separatrix.
struct Pendulum {
  double k2;  // mu^2 / lambda
  double s2;

  double rate(double theta) const {
    const double x = std::sin(theta);
    return std::sqrt(k2 * x * x + s2);
  }

  double step(double theta, double h) const {
    const double k1 = rate(theta);
    const double k2_ = rate(theta + 0.5 * h * k1);
    const double k3 = rate(theta + 0.5 * h * k2_);
    const double k4 = rate(theta + h * k3);
    return theta + h / 6.0 * (k1 + 2.0 * k2_ + 2.0 * k3 + k4);
  }
};

}  // namespace

void VariationalProblem::validate() const {
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw std::invalid_argument("variational lambda must be > 0");
  if (!std::isfinite(theta_left) || !std::isfinite(theta_right))
    throw std::invalid_argument("boundary areas must be finite");
  if (!is_multiple_of_pi(theta_left) || !is_multiple_of_pi(theta_right - theta_left))
    throw std::invalid_argument("boundary areas must be multiples of pi");
  if (theta_right < theta_left - 1e-12) throw std::invalid_argument("theta_right must not be below theta_left");
}

int VariationalProblem::transitions() const {
  return static_cast<int>(std::lround((theta_right - theta_left) / kPi));
}

std::vector<double> el_residual(const AreaProfile& theta, const VariationalProblem& prob) {
  if (!(theta.grid == prob.window)) throw std::invalid_argument("el_residual: profile grid differs from the problem window");
  const auto& th = theta.theta;
  const std::size_t n = th.size();
  if (n < 3) return {};
  const double dt2 = theta.grid.dt() * theta.grid.dt();
  const double mu2 = prob.sys.mu() * prob.sys.mu();
  std::vector<double> out(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double second;
    if (i >= 2 && i + 2 < n)
      second = (-th[i + 2] + 16.0 * th[i + 1] - 30.0 * th[i] + 16.0 * th[i - 1] - th[i - 2]) / (12.0 * dt2);
    else
      second = (th[i + 1] - 2.0 * th[i] + th[i - 1]) / dt2;
    out[i - 1] = 2.0 * prob.lambda * second - mu2 * std::sin(2.0 * th[i]);
  }
  return out;
}

PendulumSolution solve_pendulum_bvp(const VariationalProblem& prob, int substeps) {
  prob.validate();
  if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  const TimeGrid& grid = prob.window;
  const double mu = prob.sys.mu();
  const double root_lambda = std::sqrt(prob.lambda);
  const int transitions = prob.transitions();

  if (transitions == 0) {
    AreaProfile flat{grid, std::vector<double>(grid.size(), prob.theta_left)};
    return {flat, Envelope::zero(grid), 0.0, 0};
  }
  const std::size_t N = static_cast<std::size_t>(transitions);
  if (grid.length() < 20.0 * N * root_lambda / mu)
    throw NumericError("pendulum window must span at least 20 soliton widths per transition");

  // theta -> theta + pi is a symmetry, so the N-transition solution is N
  // copies of the single transition on equal sub-windows. Each copy is shot
  // separately; one long shot through the unstable points theta = k pi
  // amplifies rounding in the slope beyond recovery.
  const double k2 = mu * mu / prob.lambda;
  const std::size_t intervals = grid.size() - 1;
  std::size_t m = static_cast<std::size_t>(substeps);
  while ((intervals * m) % (2 * N) != 0) m += static_cast<std::size_t>(substeps);
  const std::size_t total_steps = intervals * m;
  const std::size_t segment = total_steps / N;
  const std::size_t half = segment / 2;
  const double h = grid.dt() / static_cast<double>(m);
  const double target = prob.theta_left + 0.5 * kPi;

  auto theta_mid = [&](double slope) {
    const Pendulum p{k2, slope * slope};
    double theta = prob.theta_left;
    for (std::size_t s = 0; s < half; ++s) theta = p.step(theta, h);
    return theta;
  };

  double lo = 0.0;
  double hi = 2.0 * mu / root_lambda;
  if (!(theta_mid(hi) > target)) throw NumericError("shooting bracket has no sign change; window too narrow");

  int bisections = 0;
  while (bisections < 4000) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f = theta_mid(mid) - target;
    ++bisections;
    if (f == 0.0) {
      lo = hi = mid;
      break;
    }
    (f < 0.0 ? lo : hi) = mid;
  }
  const double slope = 0.5 * (lo + hi);
  const Pendulum pendulum{k2, slope * slope};

  // The solution is symmetric about the segment midpoint; the second half
  // is the mirror image theta(t) = 2 theta_left + pi - theta(2 t_mid - t).
  std::vector<double> piece(segment + 1);
  piece[0] = prob.theta_left;
  for (std::size_t s = 0; s < half; ++s) piece[s + 1] = pendulum.step(piece[s], h);
  const double miss = std::abs(piece[half] - target);
  if (!(miss <= 1e-9)) throw NumericError("pendulum shot misses the midpoint area by " + std::to_string(miss));
  for (std::size_t r = half + 1; r <= segment; ++r) piece[r] = 2.0 * prob.theta_left + kPi - piece[segment - r];

  AreaProfile area{grid, std::vector<double>(grid.size())};
  std::vector<double> envelope(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = i * m;
    std::size_t k = j / segment;
    std::size_t r = j % segment;
    if (k == N) {
      k = N - 1;
      r = segment;
    }
    area.theta[i] = piece[r] + static_cast<double>(k) * kPi;
    envelope[i] = pendulum.rate(piece[r]) / mu;
  }
  return {std::move(area), Envelope::sampled(grid, std::move(envelope)), slope, bisections};
}

DeltaKickSolution solve_delta_case(const TwoLevelSystem& sys, double t_control, std::size_t n) {
  if (!(std::isfinite(t_control) && t_control > 0.0)) throw std::invalid_argument("t_control must be > 0");
  const TimeGrid grid(0.0, t_control, n);
  const double theta_end = 0.5 * kPi;
  const double slope = theta_end / t_control;
  AreaProfile area{grid, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) area.theta[i] = slope * grid.node(i);
  area.theta.back() = theta_end;
  return {std::move(area), Envelope::constant(slope / sys.mu(), 0.0, t_control)};
}

double lambda_from_energy(const TwoLevelSystem& sys, EnergyBudget budget) {
  const double me = sys.mu() * budget.e0();
  return 4.0 / (me * me);
}

}  // namespace twolevel
