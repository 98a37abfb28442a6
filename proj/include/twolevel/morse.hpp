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
#include <functional>
#include <vector>

namespace twolevel {

/// Morse oscillator V(r) = d0 (exp(-beta (r - r_star)) - 1)^2 - d0 with the
/// dipole function mu0 r exp(-r / r0), on a Dirichlet radial grid
/// [r_min, r_max] with n_r nodes. Atomic units throughout.
struct MorseModel {
  double d0;
  double beta;
  double r_star;
  double mu0;
  double r0;
  double mass;
  double r_min = 0.5;
  double r_max = 12.0;
  std::size_t n_r = 4096;

  void validate() const;
  double potential(double r) const;
  double dipole(double r) const;
  double grid_step() const { return (r_max - r_min) / static_cast<double>(n_r - 1); }
};

/// The two-level reference parameters (D0 = 0.1994, beta = 1.189,
/// r* = 1.821, mu0 = 3.088, r0 = 0.6). The reduced mass has no default.
MorseModel reference_morse_model(double mass);

/// floor(s - 1/2) + 1 with s = sqrt(2 mass d0) / beta.
int bound_state_count(const MorseModel& model);

/// E_n = -d0 + w0 (n + 1/2) - (w0 (n + 1/2))^2 / (4 d0), w0 = beta sqrt(2 d0 / mass).
double analytic_morse_energy(const MorseModel& model, int n);

struct MorseStates {
  std::vector<double> r;                  ///< radial nodes, boundaries included
  std::vector<double> energies;           ///< ascending
  std::vector<std::vector<double>> psi;   ///< psi[k][i], zero at both boundaries
};

/// Lowest k eigenpairs of the three-point finite-difference Hamiltonian on
/// the model grid. Wavefunctions are normalized with the trapezoid rule and
/// signed so the leftmost antinode is positive.
MorseStates fd_eigenstates(const MorseModel& model, int k);

/// Richardson-extrapolated eigenpairs from the model grid and its halved
/// spacing, reported on the model grid. A second extrapolation one level
/// finer must agree to 1e-8 relative in every energy, otherwise
/// NumericError ("grid too coarse").
MorseStates eigenstates(const MorseModel& model, int k);

/// <psi0 | op | psi1> by the trapezoid rule.
double transition_element(const MorseStates& states, const std::function<double(double)>& op);

/// |<psi0 | mu(r) | psi1>| from the extrapolated eigenstates.
double dipole_element(const MorseModel& model);

/// E1 - E0.
double carrier_frequency(const MorseModel& model);

struct MorseTransition {
  double mu;
  double omega;
  double e0;
  double e1;
  MorseStates states;
};

/// One eigen-solve for the full (mu, omega) pair.
MorseTransition morse_transition(const MorseModel& model);

}  // namespace twolevel
