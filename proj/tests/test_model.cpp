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
#include <random>

#include "twolevel/model.hpp"

using namespace twolevel;

TEST_CASE("system rejects non-physical parameters") {
  CHECK_THROWS_AS(TwoLevelSystem(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoLevelSystem(1.0, -0.1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoLevelSystem(1.0, 0.0, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoLevelSystem(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoLevelSystem(NAN, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK(TwoLevelSystem(1.0, 0.2, 0.1, 1.0).positivity_preserving());
  CHECK_FALSE(TwoLevelSystem(1.0, 0.2, 0.09, 1.0).positivity_preserving());
}

TEST_CASE("grid nodes and spacing") {
  const TimeGrid g(-2.0, 3.0, 11);
  CHECK(g.dt() == doctest::Approx(0.5));
  CHECK(g.node(0) == -2.0);
  CHECK(g.node(10) == 3.0);
  CHECK(g.nodes().size() == 11);
  CHECK(g.contains(3.0));
  CHECK_FALSE(g.contains(3.0000001));
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, INFINITY, 5), std::invalid_argument);
}

TEST_CASE("trapezoid weights integrate linear functions exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = a + 0.1 + std::abs(u(rng));
    const TimeGrid g(a, b, 2 + trial * 7);
    const double p = u(rng), q = u(rng);
    std::vector<double> f;
    for (double t : g.nodes()) f.push_back(p * t + q);
    const double exact = 0.5 * p * (b * b - a * a) + q * (b - a);
    CHECK(trapezoid(g, f) == doctest::Approx(exact).epsilon(1e-12));
    const auto c = cumulative_trapezoid(g, f);
    CHECK(c.front() == 0.0);
    CHECK(c.back() == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("trapezoid converges at second order on a smooth integrand") {
  auto err = [](std::size_t n) {
    const TimeGrid g(0.0, 3.0, n);
    std::vector<double> f;
    for (double t : g.nodes()) f.push_back(std::exp(-t) * std::cos(2.0 * t));
    // integral of exp(-t) cos(2t) on [0, T]
    const double T = 3.0;
    const double exact = (1.0 + std::exp(-T) * (2.0 * std::sin(2.0 * T) - std::cos(2.0 * T))) / 5.0;
    return std::abs(trapezoid(g, f) - exact);
  };
  const double ratio = err(101) / err(201);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("density matrix invariants") {
  const auto g = ground_state();
  CHECK(g.trace() == 1.0);
  CHECK(g.purity() == 1.0);
  CHECK(g.min_eigenvalue() == doctest::Approx(0.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    // Mixed state on the Bloch ball: radius r, eigenvalues (1 +- r) / 2.
    const double r = u(rng), th = std::acos(2.0 * u(rng) - 1.0), ph = 2.0 * M_PI * u(rng);
    const double z = r * std::cos(th);
    BlochState s{0.5 * (1.0 - z), 0.5 * (1.0 + z), 0.5 * r * std::sin(th) * std::cos(ph),
                 0.5 * r * std::sin(th) * std::sin(ph)};
    CHECK(s.min_eigenvalue() == doctest::Approx(0.5 * (1.0 - r)).epsilon(1e-12));
    CHECK(s.purity() == doctest::Approx(0.5 * (1.0 + r * r)).epsilon(1e-12));
  }
}
