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

#include <utility>
#include <variant>
#include <vector>

#include "twolevel/model.hpp"

namespace twolevel {

/// Sech-family pulse V(t) = order / (sqrt(lambda) cosh(t mu / sqrt(lambda))),
/// peaked at t = 0, with total area order * pi.
struct SolitonShape {
  int order = 1;
  double lambda = 1.0;
  double mu = 1.0;

  double width() const;  ///< tau = sqrt(lambda) / mu
  double peak() const;
};

/// Rectangular pulse with amplitude on [start, stop] and zero elsewhere.
struct SquareShape {
  double amplitude = 0.0;
  double start = 0.0;
  double stop = 1.0;
};

/// Constant-amplitude control on [start, stop]. Evaluates like SquareShape;
/// kept distinct because it is the terminal-control optimum rather than a
/// comparison pulse.
struct ConstantShape {
  double amplitude = 0.0;
  double start = 0.0;
  double stop = 1.0;
};

/// Samples on a uniform grid, linearly interpolated, zero outside the grid.
struct SampledShape {
  TimeGrid grid;
  std::vector<double> values;
};

/// Which one-sided limit to take at a jump of a piecewise envelope.
enum class Side { Left, Right };

class Envelope {
 public:
  using Shape = std::variant<SolitonShape, SquareShape, ConstantShape, SampledShape>;

  static Envelope soliton(int order, double lambda, double mu);
  static Envelope square(double amplitude, double start, double stop);
  static Envelope constant(double amplitude, double start, double stop);
  static Envelope sampled(TimeGrid grid, std::vector<double> values);
  static Envelope zero(const TimeGrid& grid);

  const Shape& shape() const noexcept { return shape_; }
  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&shape_);
  }
  bool is_sampled() const noexcept { return as<SampledShape>() != nullptr; }

  double operator()(double t) const;
  /// One-sided limit; equals operator() wherever the envelope is continuous.
  double limit(double t, Side side) const;

  /// Points in (a, b) where the envelope or its derivative jumps.
  std::vector<double> breakpoints(double a, double b) const;

  /// Exact integral of the envelope over [a, b].
  double integral(double a, double b) const;

 private:
  explicit Envelope(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Fixed pulse energy, the integral of V(t)^2.
class EnergyBudget {
 public:
  explicit EnergyBudget(double e0);
  double e0() const noexcept { return e0_; }

 private:
  double e0_;
};

struct AreaProfile {
  TimeGrid grid;
  std::vector<double> theta;
};

/// Minimal-loss pulse for the energy budget: lambda = 4 / (mu E0)^2.
Envelope soliton_envelope(const TwoLevelSystem& sys, EnergyBudget budget);

/// Constant pi/2 pulse on [0, t_control] and its energy pi^2 / (4 mu^2 t_control).
std::pair<Envelope, EnergyBudget> constant_pulse(const TwoLevelSystem& sys, double t_control);

/// Square pulse centered at t = 0 with the given total area and energy.
Envelope square_pulse_matching(const TwoLevelSystem& sys, double area, EnergyBudget budget);

/// Member of the sech family with total area order * pi. The width is that of
/// the order-1 soliton for `base` and the amplitude is scaled by `order`, so
/// the reported energy is order^2 * base.e0().
std::pair<Envelope, EnergyBudget> n_pi_soliton(const TwoLevelSystem& sys, EnergyBudget base, int order);

/// theta(t) = mu * integral of V from grid.t0 to each node.
///
/// Analytic shapes are integrated in closed form; sampled shapes are
/// integrated exactly as piecewise-linear functions, which is the trapezoid
/// rule whenever the envelope lives on the query grid. Either way this is the
/// area the integrator sees.
AreaProfile pulse_area(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid);

/// Integral of V^2 over the grid window. Piecewise-constant shapes are exact;
/// smooth and sampled shapes use the trapezoid rule on the grid nodes.
double pulse_energy(const Envelope& env, const TimeGrid& grid);

Envelope sample(const Envelope& env, const TimeGrid& grid);

/// Values of the envelope at the grid nodes.
std::vector<double> sample_values(const Envelope& env, const TimeGrid& grid);

/// Symmetric window [-12 tau, 12 tau] that truncates a soliton at 1.2e-5 of
/// its peak.
TimeGrid soliton_window(const Envelope& soliton, std::size_t n);

}  // namespace twolevel
