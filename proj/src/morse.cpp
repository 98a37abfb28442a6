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

#include "twolevel/morse.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "twolevel/errors.hpp"

namespace twolevel {

void MorseModel::validate() const {
  if (!(d0 > 0.0)) throw std::invalid_argument("Morse d0 must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("Morse beta must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("Morse mass must be finite and > 0");
  if (!(r0 > 0.0)) throw std::invalid_argument("Morse dipole length r0 must be > 0");
  if (!std::isfinite(r_star) || !std::isfinite(mu0)) throw std::invalid_argument("Morse parameters must be finite");
  if (!(r_max > r_min)) throw std::invalid_argument("Morse grid requires r_max > r_min");
  if (n_r < 64) throw std::invalid_argument("Morse grid requires n_r >= 64");
}

double MorseModel::potential(double r) const {
  const double x = std::exp(-beta * (r - r_star)) - 1.0;
  return d0 * x * x - d0;
}

double MorseModel::dipole(double r) const { return mu0 * r * std::exp(-r / r0); }

MorseModel reference_morse_model(double mass) {
  MorseModel m{0.1994, 1.189, 1.821, 3.088, 0.6, mass};
  m.validate();
  return m;
}

int bound_state_count(const MorseModel& model) {
  const double s = std::sqrt(2.0 * model.mass * model.d0) / model.beta;
  if (s <= 0.5) return 0;
  return static_cast<int>(std::floor(s - 0.5)) + 1;
}

double analytic_morse_energy(const MorseModel& model, int n) {
  const double w0 = model.beta * std::sqrt(2.0 * model.d0 / model.mass);
  const double x = w0 * (n + 0.5);
  return -model.d0 + x - x * x / (4.0 * model.d0);
}

namespace {

void fix_sign(std::vector<double>& psi) {
  double peak = 0.0;
  for (double x : psi) peak = std::max(peak, std::abs(x));
  const double floor = 1e-3 * peak;
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
    const double a = std::abs(psi[i]);
    if (a > floor && a >= std::abs(psi[i - 1]) && a >= std::abs(psi[i + 1])) {
      if (psi[i] < 0.0)
        for (double& x : psi) x = -x;
      return;
    }
  }
}

void normalize(std::vector<double>& psi, double h) {
  double s = 0.0;
  for (double x : psi) s += x * x;  // boundary values are zero
  const double scale = 1.0 / std::sqrt(s * h);
  for (double& x : psi) x *= scale;
}

void check_count(const MorseModel& model, int k) {
  model.validate();
  if (k < 1) throw std::invalid_argument("need at least one eigenstate");
  const int count = bound_state_count(model);
  if (k > count)
    throw std::invalid_argument("requested " + std::to_string(k) + " states but the well binds " + std::to_string(count));
}

MorseModel refined(const MorseModel& model) {
  MorseModel m = model;
  m.n_r = 2 * model.n_r - 1;
  return m;
}

MorseStates extrapolate(const MorseStates& coarse, const MorseStates& fine, double h) {
  MorseStates out;
  out.r = coarse.r;
  const std::size_t k = coarse.energies.size();
  for (std::size_t j = 0; j < k; ++j) {
    out.energies.push_back((4.0 * fine.energies[j] - coarse.energies[j]) / 3.0);
    std::vector<double> psi(coarse.r.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = (4.0 * fine.psi[j][2 * i] - coarse.psi[j][i]) / 3.0;
    normalize(psi, h);
    out.psi.push_back(std::move(psi));
  }
  return out;
}

}  // namespace

MorseStates fd_eigenstates(const MorseModel& model, int k) {
  check_count(model, k);
  const std::size_t n = model.n_r;
  const std::size_t interior = n - 2;
  const double h = model.grid_step();
  const double kinetic = 1.0 / (2.0 * model.mass * h * h);

  MorseStates out;
  out.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.r[i] = i + 1 == n ? model.r_max : model.r_min + h * static_cast<double>(i);

  std::vector<double> diag(interior), off(interior - 1, -kinetic);
  for (std::size_t i = 0; i < interior; ++i) diag[i] = 2.0 * kinetic + model.potential(out.r[i + 1]);

  std::vector<double> w(interior), z(interior * static_cast<std::size_t>(k));
  std::vector<lapack_int> ifail(interior);
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info =
      LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(interior), diag.data(), off.data(), 0.0, 0.0, 1,
                     k, abstol, &found, w.data(), z.data(), static_cast<lapack_int>(interior), ifail.data());
  if (info != 0 || found != k) throw NumericError("tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");

  for (int j = 0; j < k; ++j) {
    std::vector<double> psi(n, 0.0);
    for (std::size_t i = 0; i < interior; ++i) psi[i + 1] = z[static_cast<std::size_t>(j) * interior + i];
    normalize(psi, h);
    fix_sign(psi);
    out.energies.push_back(w[j]);
    out.psi.push_back(std::move(psi));
  }
  return out;
}

MorseStates eigenstates(const MorseModel& model, int k) {
  check_count(model, k);
  const MorseModel m1 = refined(model);
  const MorseModel m2 = refined(m1);
  const MorseStates s0 = fd_eigenstates(model, k);
  const MorseStates s1 = fd_eigenstates(m1, k);
  const MorseStates s2 = fd_eigenstates(m2, k);
  MorseStates coarse = extrapolate(s0, s1, model.grid_step());
  const MorseStates finer = extrapolate(s1, s2, m1.grid_step());
  for (int j = 0; j < k; ++j) {
    const double change = std::abs(finer.energies[j] - coarse.energies[j]);
    if (change > 1e-8 * std::abs(finer.energies[j]))
      throw NumericError("Morse grid too coarse: level " + std::to_string(j) + " moves by " + std::to_string(change) +
                         " under grid doubling");
  }
  return coarse;
}

double transition_element(const MorseStates& states, const std::function<double(double)>& op) {
  if (states.psi.size() < 2) throw std::invalid_argument("transition_element needs two states");
  const auto& r = states.r;
  const double h = r[1] - r[0];
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) s += states.psi[0][i] * op(r[i]) * states.psi[1][i];
  return s * h;
}

MorseTransition morse_transition(const MorseModel& model) {
  MorseStates states = eigenstates(model, 2);
  const double mu = std::abs(transition_element(states, [&model](double r) { return model.dipole(r); }));
  const double e0 = states.energies[0];
  const double e1 = states.energies[1];
  return {mu, e1 - e0, e0, e1, std::move(states)};
}

double dipole_element(const MorseModel& model) { return morse_transition(model).mu; }

double carrier_frequency(const MorseModel& model) { return morse_transition(model).omega; }

}  // namespace twolevel
