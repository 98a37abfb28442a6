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
#include "twolevel/variational.hpp"

using namespace twolevel;
using oracle::pi;

namespace {
const TwoLevelSystem unit(1.0, 0.0, 0.0, 1.0);
}

TEST_CASE("problem validation") {
  const TimeGrid w(-10.0, 10.0, 101);
  CHECK_THROWS_AS((VariationalProblem{unit, 0.0, w}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((VariationalProblem{unit, 1.0, w, 0.0, 2.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((VariationalProblem{unit, 1.0, w, pi, 0.0}.validate()), std::invalid_argument);
  CHECK(VariationalProblem{unit, 1.0, w, 0.0, 3.0 * pi}.transitions() == 3);
  CHECK(VariationalProblem{unit, 1.0, w, pi, 2.0 * pi}.transitions() == 1);
}

TEST_CASE("residual vanishes on the sech area to stencil accuracy") {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const double tau = std::sqrt(lambda);
    auto resid = [&](std::size_t n) {
      const TimeGrid g(-20.0 * tau, 20.0 * tau, n);
      AreaProfile a{g, {}};
      for (double t : g.nodes()) a.theta.push_back(oracle::sech_area(t, tau));
      double m = 0.0;
      for (double r : el_residual(a, VariationalProblem{unit, lambda, g})) m = std::max(m, std::abs(r));
      return m;
    };
    CHECK(resid(2001) < 1e-4);
    CHECK(resid(2001) / resid(4001) > 3.5);  // the three-point end nodes dominate
  }
}

TEST_CASE("residual detects a wrong profile") {
  const TimeGrid g(-10.0, 10.0, 1001);
  AreaProfile a{g, {}};
  for (double t : g.nodes()) a.theta.push_back(oracle::sech_area(t, 2.0));  // width for lambda 4
  double m = 0.0;
  for (double r : el_residual(a, VariationalProblem{unit, 1.0, g})) m = std::max(m, std::abs(r));
  CHECK(m > 0.1);
}

TEST_CASE("single transition recovers the soliton") {
  for (double mu : {0.7, 1.0, 2.0}) {
    const TwoLevelSystem sys(mu, 0.0, 0.0, 1.0);
    const double lambda = 0.8;
    const double tau = std::sqrt(lambda) / mu;
    VariationalProblem p{sys, lambda, TimeGrid(-30.0 * tau, 30.0 * tau, 3001)};
    const auto sol = solve_pendulum_bvp(p);
    const auto& th = sol.area.theta;
    CHECK(th.front() == 0.0);
    CHECK(th.back() == doctest::Approx(pi).epsilon(1e-12));
    for (std::size_t i = 1; i < th.size(); ++i) CHECK(th[i] >= th[i - 1]);
    const auto t = p.window.nodes();
    CHECK(oracle::crossing(t, th, pi / 2) == doctest::Approx(0.0).epsilon(1e-9));
    const auto* v = sol.envelope.as<SampledShape>();
    REQUIRE(v);
    for (std::size_t i = 0; i < t.size(); i += 50)
      CHECK(v->values[i] == doctest::Approx(oracle::sech_pulse(t[i], tau) / mu).epsilon(1e-6));
    // energy of the optimum is 2 / (mu sqrt(lambda))
    CHECK(pulse_energy(sol.envelope, p.window) == doctest::Approx(2.0 / (mu * std::sqrt(lambda))).epsilon(1e-6));
  }
}

TEST_CASE("multiple transitions stack equal solitons") {
  VariationalProblem p{unit, 1.0, TimeGrid(-60.0, 60.0, 6001), 0.0, 3.0 * pi};
  const auto sol = solve_pendulum_bvp(p);
  const auto t = p.window.nodes();
  CHECK(sol.area.theta.back() == doctest::Approx(3.0 * pi).epsilon(1e-12));
  // crossings of pi/2, 3pi/2, 5pi/2 sit at the sub-window centres
  for (int k = 0; k < 3; ++k)
    CHECK(oracle::crossing(t, sol.area.theta, (k + 0.5) * pi) == doctest::Approx(-40.0 + 40.0 * k).epsilon(1e-6));
}

TEST_CASE("a window that cannot hold the transition is rejected") {
  VariationalProblem p{unit, 1.0, TimeGrid(-5.0, 5.0, 501)};
  CHECK_THROWS_AS(solve_pendulum_bvp(p), NumericError);
}

TEST_CASE("delta source gives a linear area") {
  const TwoLevelSystem sys(2.0, 0.0, 0.0, 1.0);
  const auto d = solve_delta_case(sys, 5.0, 51);
  CHECK(d.area.theta.front() == 0.0);
  CHECK(d.area.theta.back() == doctest::Approx(pi / 2));
  CHECK(d.area.theta[20] == doctest::Approx(pi / 2 * 20.0 / 50.0));
  CHECK(d.envelope(2.5) == doctest::Approx(pi / (2.0 * 2.0 * 5.0)));
  CHECK_THROWS_AS(solve_delta_case(sys, 0.0), std::invalid_argument);
}

TEST_CASE("lambda from energy") {
  CHECK(lambda_from_energy(TwoLevelSystem(2.0, 0, 0, 1), EnergyBudget(0.5)) == doctest::Approx(4.0));
  CHECK(lambda_from_energy(unit, EnergyBudget(2.0)) == doctest::Approx(1.0));
}
