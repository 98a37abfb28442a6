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

#include "twolevel/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twolevel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

double interpolate(const SampledShape& s, double t) {
  const TimeGrid& g = s.grid;
  if (t < g.t0() || t > g.t1()) return 0.0;
  const double x = (t - g.t0()) / g.dt();
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= g.size() - 1) i = g.size() - 2;
  const double f = (t - g.node(i)) / g.dt();
  return (1.0 - f) * s.values[i] + f * s.values[i + 1];
}

// Integral of the interpolant from grid.t0 to t, with `cum` the running
// trapezoid over the sample nodes.
double sampled_antiderivative(const SampledShape& s, const std::vector<double>& cum, double t) {
  const TimeGrid& g = s.grid;
  if (t <= g.t0()) return 0.0;
  if (t >= g.t1()) return cum.back();
  std::size_t i = static_cast<std::size_t>((t - g.t0()) / g.dt());
  if (i >= g.size() - 1) i = g.size() - 2;
  const double h = t - g.node(i);
  const double slope = (s.values[i + 1] - s.values[i]) / g.dt();
  return cum[i] + h * (s.values[i] + 0.5 * slope * h);
}

double soliton_antiderivative(const SolitonShape& s, double t) {
  // peak * tau * gd(t / tau), offset so it vanishes at -infinity.
  const double tau = s.width();
  return s.peak() * tau * (std::atan(std::sinh(t / tau)) + 0.5 * std::numbers::pi);
}

}  // namespace

double SolitonShape::width() const { return std::sqrt(lambda) / mu; }
double SolitonShape::peak() const { return static_cast<double>(order) / std::sqrt(lambda); }

Envelope Envelope::soliton(int order, double lambda, double mu) {
  if (order < 1) throw std::invalid_argument("soliton order must be >= 1");
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw std::invalid_argument("soliton lambda must be > 0");
  if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("soliton mu must be > 0");
  return Envelope(SolitonShape{order, lambda, mu});
}

Envelope Envelope::square(double amplitude, double start, double stop) {
  if (!std::isfinite(amplitude) || !std::isfinite(start) || !std::isfinite(stop))
    throw std::invalid_argument("square pulse parameters must be finite");
  if (!(stop > start)) throw std::invalid_argument("square pulse requires stop > start");
  return Envelope(SquareShape{amplitude, start, stop});
}

Envelope Envelope::constant(double amplitude, double start, double stop) {
  if (!std::isfinite(amplitude) || !std::isfinite(start) || !std::isfinite(stop))
    throw std::invalid_argument("constant pulse parameters must be finite");
  if (!(stop > start)) throw std::invalid_argument("constant pulse requires stop > start");
  return Envelope(ConstantShape{amplitude, start, stop});
}

Envelope Envelope::sampled(TimeGrid grid, std::vector<double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("sampled envelope has " + std::to_string(values.size()) + " values for a " +
                                std::to_string(grid.size()) + "-node grid");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("sampled envelope contains non-finite values");
  return Envelope(SampledShape{grid, std::move(values)});
}

Envelope Envelope::zero(const TimeGrid& grid) { return sampled(grid, std::vector<double>(grid.size(), 0.0)); }

double Envelope::operator()(double t) const {
  return std::visit(overloaded{
                        [t](const SolitonShape& s) { return s.peak() / std::cosh(t / s.width()); },
                        [t](const SquareShape& s) { return (t >= s.start && t <= s.stop) ? s.amplitude : 0.0; },
                        [t](const ConstantShape& s) { return (t >= s.start && t <= s.stop) ? s.amplitude : 0.0; },
                        [t](const SampledShape& s) { return interpolate(s, t); },
                    },
                    shape_);
}

double Envelope::limit(double t, Side side) const {
  auto box = [t, side](double amplitude, double start, double stop) {
    const bool inside = side == Side::Right ? (t >= start && t < stop) : (t > start && t <= stop);
    return inside ? amplitude : 0.0;
  };
  return std::visit(overloaded{
                        [this, t](const SolitonShape&) { return (*this)(t); },
                        [&](const SquareShape& s) { return box(s.amplitude, s.start, s.stop); },
                        [&](const ConstantShape& s) { return box(s.amplitude, s.start, s.stop); },
                        [&](const SampledShape& s) {
                          if (t == s.grid.t0()) return side == Side::Right ? s.values.front() : 0.0;
                          if (t == s.grid.t1()) return side == Side::Left ? s.values.back() : 0.0;
                          return interpolate(s, t);
                        },
                    },
                    shape_);
}

std::vector<double> Envelope::breakpoints(double a, double b) const {
  std::vector<double> out;
  auto add = [&](double t) {
    if (t > a && t < b) out.push_back(t);
  };
  std::visit(overloaded{
                 [](const SolitonShape&) {},
                 [&](const SquareShape& s) {
                   add(s.start);
                   add(s.stop);
                 },
                 [&](const ConstantShape& s) {
                   add(s.start);
                   add(s.stop);
                 },
                 [&](const SampledShape& s) {
                   const TimeGrid& g = s.grid;
                   if (b <= g.t0() || a >= g.t1()) return;
                   const double lo = std::max(0.0, std::floor((a - g.t0()) / g.dt()));
                   std::size_t i = static_cast<std::size_t>(lo);
                   for (; i < g.size(); ++i) {
                     const double t = g.node(i);
                     if (t >= b) break;
                     add(t);
                   }
                 },
             },
             shape_);
  return out;
}

double Envelope::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  return std::visit(overloaded{
                        [&](const SolitonShape& s) { return soliton_antiderivative(s, b) - soliton_antiderivative(s, a); },
                        [&](const SquareShape& s) { return s.amplitude * overlap(a, b, s.start, s.stop); },
                        [&](const ConstantShape& s) { return s.amplitude * overlap(a, b, s.start, s.stop); },
                        [&](const SampledShape& s) {
                          const auto cum = cumulative_trapezoid(s.grid, s.values);
                          return sampled_antiderivative(s, cum, b) - sampled_antiderivative(s, cum, a);
                        },
                    },
                    shape_);
}

EnergyBudget::EnergyBudget(double e0) : e0_(e0) {
  if (!(std::isfinite(e0) && e0 > 0.0)) throw std::invalid_argument("energy budget must be finite and > 0");
}

Envelope soliton_envelope(const TwoLevelSystem& sys, EnergyBudget budget) {
  const double me = sys.mu() * budget.e0();
  return Envelope::soliton(1, 4.0 / (me * me), sys.mu());
}

std::pair<Envelope, EnergyBudget> constant_pulse(const TwoLevelSystem& sys, double t_control) {
  if (!(std::isfinite(t_control) && t_control > 0.0)) throw std::invalid_argument("t_control must be > 0");
  const double pi = std::numbers::pi;
  const double mu = sys.mu();
  return {Envelope::constant(pi / (2.0 * mu * t_control), 0.0, t_control),
          EnergyBudget(pi * pi / (4.0 * mu * mu * t_control))};
}

Envelope square_pulse_matching(const TwoLevelSystem& sys, double area, EnergyBudget budget) {
  if (!(std::isfinite(area) && area > 0.0)) throw std::invalid_argument("square pulse area must be > 0");
  const double mu = sys.mu();
  const double amplitude = mu * budget.e0() / area;
  const double duration = area * area / (mu * mu * budget.e0());
  return Envelope::square(amplitude, -0.5 * duration, 0.5 * duration);
}

std::pair<Envelope, EnergyBudget> n_pi_soliton(const TwoLevelSystem& sys, EnergyBudget base, int order) {
  if (order < 1) throw std::invalid_argument("soliton order must be >= 1");
  const double me = sys.mu() * base.e0();
  const double n = static_cast<double>(order);
  return {Envelope::soliton(order, 4.0 / (me * me), sys.mu()), EnergyBudget(n * n * base.e0())};
}

AreaProfile pulse_area(const Envelope& env, const TwoLevelSystem& sys, const TimeGrid& grid) {
  AreaProfile out{grid, std::vector<double>(grid.size(), 0.0)};
  const double mu = sys.mu();
  if (const auto* s = env.as<SampledShape>()) {
    if (s->grid == grid) {
      auto cum = cumulative_trapezoid(grid, s->values);
      for (std::size_t i = 0; i < cum.size(); ++i) out.theta[i] = mu * cum[i];
      return out;
    }
    const auto cum = cumulative_trapezoid(s->grid, s->values);
    const double base = sampled_antiderivative(*s, cum, grid.t0());
    for (std::size_t i = 1; i < grid.size(); ++i)
      out.theta[i] = mu * (sampled_antiderivative(*s, cum, grid.node(i)) - base);
    return out;
  }
  for (std::size_t i = 1; i < grid.size(); ++i) out.theta[i] = mu * env.integral(grid.t0(), grid.node(i));
  return out;
}

std::vector<double> sample_values(const Envelope& env, const TimeGrid& grid) {
  if (const auto* s = env.as<SampledShape>(); s && s->grid == grid) return s->values;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = env(grid.node(i));
  return out;
}

double pulse_energy(const Envelope& env, const TimeGrid& grid) {
  auto box = [&grid](double amplitude, double start, double stop) {
    return amplitude * amplitude * overlap(grid.t0(), grid.t1(), start, stop);
  };
  if (const auto* s = env.as<SquareShape>()) return box(s->amplitude, s->start, s->stop);
  if (const auto* s = env.as<ConstantShape>()) return box(s->amplitude, s->start, s->stop);
  auto v = sample_values(env, grid);
  for (double& x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("pulse_energy: non-finite envelope sample");
    x *= x;
  }
  return trapezoid(grid, v);
}

Envelope sample(const Envelope& env, const TimeGrid& grid) { return Envelope::sampled(grid, sample_values(env, grid)); }

TimeGrid soliton_window(const Envelope& soliton, std::size_t n) {
  const auto* s = soliton.as<SolitonShape>();
  if (!s) throw std::invalid_argument("soliton_window requires a soliton envelope");
  const double half = 12.0 * s->width();
  return TimeGrid(-half, half, n);
}

}  // namespace twolevel
