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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "twolevel/errors.hpp"
#include "twolevel/morse.hpp"

using namespace twolevel;

namespace {
oracle::Morse closed_form(const MorseModel& m) { return {m.d0, m.beta, m.r_star, m.mass}; }
}  // namespace

TEST_CASE("model validation and reference parameters") {
  const auto m = reference_morse_model(1000.0);
  CHECK(m.d0 == 0.1994);
  CHECK(m.r_star == 1.821);
  CHECK(m.potential(m.r_star) == doctest::Approx(-m.d0));
  CHECK(m.dipole(1.0) == doctest::Approx(3.088 * std::exp(-1.0 / 0.6)));
  auto bad = m;
  bad.mass = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.n_r = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.r_max = bad.r_min;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("closed-form levels and bound-state count") {
  const auto m = reference_morse_model(1728.539);
  const auto o = closed_form(m);
  for (int n = 0; n < 5; ++n) CHECK(analytic_morse_energy(m, n) == doctest::Approx(o.energy(n)).epsilon(1e-14));
  const int count = bound_state_count(m);
  CHECK(count == static_cast<int>(std::floor(o.s() - 0.5)) + 1);
  // the last bound level lies below the dissociation limit, the next would not
  CHECK(o.energy(count - 1) < 0.0);
  CHECK(o.w0() * (count + 0.5) > 2.0 * m.d0 - 1e-12);
}

TEST_CASE("raw finite-difference levels converge at second order") {
  const auto m0 = reference_morse_model(1728.539);
  const auto o = closed_form(m0);
  double prev[2] = {0, 0};
  for (std::size_t n : {1024u, 2047u, 4093u}) {
    auto m = m0;
    m.n_r = n;
    const auto s = fd_eigenstates(m, 2);
    for (int k = 0; k < 2; ++k) {
      const double err = s.energies[k] - o.energy(k);
      CHECK(err < 0.0);  // the three-point kinetic term underestimates curvature
      if (prev[k] != 0.0) CHECK(prev[k] / err == doctest::Approx(4.0).epsilon(0.02));
      prev[k] = err;
    }
  }
}

TEST_CASE("extrapolated levels match the closed form") {
  for (double mass : {918.0, 3000.0}) {
    const auto m = reference_morse_model(mass);
    const auto o = closed_form(m);
    const auto s = eigenstates(m, 3);
    for (int k = 0; k < 3; ++k) CHECK(s.energies[k] == doctest::Approx(o.energy(k)).epsilon(1e-9));
    CHECK(carrier_frequency(m) == doctest::Approx(o.energy(1) - o.energy(0)).epsilon(1e-8));
  }
}

TEST_CASE("wavefunctions are orthonormal, signed and vanish at the walls") {
  const auto m = reference_morse_model(1728.539);
  const auto s = eigenstates(m, 2);
  const double h = m.grid_step();
  for (int a = 0; a < 2; ++a) {
    CHECK(s.psi[a].front() == 0.0);
    CHECK(s.psi[a].back() == 0.0);
    for (int b = 0; b < 2; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < s.r.size(); ++i) d += h * s.psi[a][i] * s.psi[b][i];
      CHECK(d == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-6).scale(1.0));
    }
  }
  // the ground state is positive; the first excited state starts positive
  for (double x : s.psi[0]) CHECK(x >= -1e-12);
  std::size_t first = 0;
  while (std::abs(s.psi[1][first]) < 1e-3) ++first;
  CHECK(s.psi[1][first] > 0.0);
  // with the sign rule, <0|r|1> of a Morse pair is negative
  CHECK(transition_element(s, [](double r) { return r; }) < 0.0);
}

TEST_CASE("dipole element against the closed-form wavefunctions") {
  const auto m = reference_morse_model(1728.539);
  const auto o = closed_form(m);
  const auto op = [&](double r) { return m.mu0 * r * std::exp(-r / m.r0); };
  const double ref = o.element(op, m.r_min, m.r_max, 20000);
  const auto t = morse_transition(m);
  CHECK(t.mu == doctest::Approx(ref).epsilon(1e-7));
  CHECK(dipole_element(m) == doctest::Approx(t.mu).epsilon(1e-14));
  CHECK(t.omega == doctest::Approx(t.e1 - t.e0).epsilon(1e-14));
}

TEST_CASE("too many states or too coarse a grid") {
  auto m = reference_morse_model(200.0);
  CHECK_THROWS_AS(eigenstates(m, bound_state_count(m) + 1), std::invalid_argument);
  m = reference_morse_model(12000.0);
  m.n_r = 64;
  CHECK_THROWS_AS(eigenstates(m, 2), NumericError);
}
