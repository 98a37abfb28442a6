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

#include <cstddef>
#include <span>
#include <vector>

namespace twolevel {

/// Resonantly driven two-level system in atomic units (hbar = 1).
/// omega is the carrier frequency, equal to the level splitting.
class TwoLevelSystem {
 public:
  TwoLevelSystem(double mu, double gamma1, double gamma2, double omega);

  double mu() const noexcept { return mu_; }
  double gamma1() const noexcept { return gamma1_; }
  double gamma2() const noexcept { return gamma2_; }
  double omega() const noexcept { return omega_; }

  /// Dephasing at least half the relaxation rate keeps the density matrix
  /// positive; other pairs are accepted but not guaranteed physical.
  bool positivity_preserving() const noexcept { return gamma2_ >= 0.5 * gamma1_; }

 private:
  double mu_;
  double gamma1_;
  double gamma2_;
  double omega_;
};

/// Uniform time grid with n nodes on [t0, t1].
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t n);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  std::size_t size() const noexcept { return n_; }
  double dt() const noexcept { return dt_; }
  double length() const noexcept { return t1_ - t0_; }

  /// Node i; the last node is returned as t1 exactly.
  double node(std::size_t i) const noexcept {
    return i + 1 == n_ ? t1_ : t0_ + static_cast<double>(i) * dt_;
  }
  std::vector<double> nodes() const;

  /// Trapezoid quadrature weights (dt/2 at both ends, dt elsewhere).
  std::vector<double> trapezoid_weights() const;

  bool contains(double t) const noexcept { return t >= t0_ && t <= t1_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t0_;
  double t1_;
  std::size_t n_;
  double dt_;
};

TimeGrid make_grid(double t0, double t1, std::size_t n);

/// Density matrix in the rotating frame, stored as the two populations and
/// the complex coherence rho12 (rho21 is its conjugate).
struct BlochState {
  double rho11 = 1.0;
  double rho22 = 0.0;
  double re12 = 0.0;
  double im12 = 0.0;

  double trace() const noexcept { return rho11 + rho22; }
  double purity() const noexcept {
    return rho11 * rho11 + rho22 * rho22 + 2.0 * (re12 * re12 + im12 * im12);
  }
  double min_eigenvalue() const noexcept;

  friend bool operator==(const BlochState&, const BlochState&) = default;
};

BlochState ground_state() noexcept;

struct BlochTrajectory {
  TimeGrid grid;
  std::vector<BlochState> states;

  std::vector<double> rho22() const;
};

/// Composite trapezoid rule for samples on a uniform grid.
double trapezoid(const TimeGrid& grid, std::span<const double> values);

/// Running trapezoid integral; element 0 is zero.
std::vector<double> cumulative_trapezoid(const TimeGrid& grid, std::span<const double> values);

}  // namespace twolevel
