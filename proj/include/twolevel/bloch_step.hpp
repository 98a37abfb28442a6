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

// Classical RK4 for the rotating-frame Bloch equations, shared by the
// trajectory integrator, the adjoint gradient and the lane kernels.
//
// Real form of the RWA Liouville equations (im12 = Im rho12~):
//   d rho11/dt = -2 mu V im12 + g1 rho22
//   d rho22/dt = +2 mu V im12 - g1 rho22
//   d re12/dt  = -g2 re12
//   d im12/dt  = -mu V (rho22 - rho11) - g2 im12
// With g1 = g2 = 0 and a ground-state start this gives rho22 = sin^2(theta),
// im12 = sin(2 theta) / 2, theta = mu * integral of V.

#include <array>

#include "twolevel/model.hpp"

namespace twolevel::detail {

using Vec4 = std::array<double, 4>;

struct BlochCoefficients {
  double mu;
  double g1;
  double g2;

  explicit BlochCoefficients(const TwoLevelSystem& sys) : mu(sys.mu()), g1(sys.gamma1()), g2(sys.gamma2()) {}
};

inline Vec4 to_vec(const BlochState& s) { return {s.rho11, s.rho22, s.re12, s.im12}; }
inline BlochState to_state(const Vec4& y) { return {y[0], y[1], y[2], y[3]}; }

/// M(v) y, the right-hand side at field value v.
inline Vec4 rhs(const BlochCoefficients& c, double v, const Vec4& y) {
  const double rabi = c.mu * v;
  return {-2.0 * rabi * y[3] + c.g1 * y[1],
          2.0 * rabi * y[3] - c.g1 * y[1],
          -c.g2 * y[2],
          -rabi * (y[1] - y[0]) - c.g2 * y[3]};
}

/// Coupling part of the right-hand side per unit field, dM/dv y.
inline Vec4 rhs_coupling(const BlochCoefficients& c, const Vec4& y) {
  return {-2.0 * c.mu * y[3], 2.0 * c.mu * y[3], 0.0, -c.mu * (y[1] - y[0])};
}

inline Vec4 axpy(const Vec4& y, double a, const Vec4& k) {
  return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
}

/// One RK4 step of length h with the field at the start (va), midpoint (vb)
/// and end (vc) of the step.
inline Vec4 rk4_step(const BlochCoefficients& c, const Vec4& y, double va, double vb, double vc, double h) {
  const Vec4 k1 = rhs(c, va, y);
  const Vec4 k2 = rhs(c, vb, axpy(y, 0.5 * h, k1));
  const Vec4 k3 = rhs(c, vb, axpy(y, 0.5 * h, k2));
  const Vec4 k4 = rhs(c, vc, axpy(y, h, k3));
  const double w = h / 6.0;
  Vec4 out;
  for (int j = 0; j < 4; ++j) out[j] = y[j] + w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  return out;
}

/// Sensitivities of one rk4_step output with respect to va, vb and vc.
inline std::array<Vec4, 3> rk4_step_field_derivatives(const BlochCoefficients& c, const Vec4& y, double va,
                                                      double vb, double vc, double h) {
  const Vec4 k1 = rhs(c, va, y);
  const Vec4 y2 = axpy(y, 0.5 * h, k1);
  const Vec4 k2 = rhs(c, vb, y2);
  const Vec4 y3 = axpy(y, 0.5 * h, k2);
  const Vec4 k3 = rhs(c, vb, y3);
  const Vec4 y4 = axpy(y, h, k3);
  const Vec4 zero{0.0, 0.0, 0.0, 0.0};
  const double w = h / 6.0;

  auto combine = [w](const Vec4& d1, const Vec4& d2, const Vec4& d3, const Vec4& d4) {
    Vec4 out;
    for (int j = 0; j < 4; ++j) out[j] = w * (d1[j] + 2.0 * d2[j] + 2.0 * d3[j] + d4[j]);
    return out;
  };

  // va enters through k1 only.
  const Vec4 a1 = rhs_coupling(c, y);
  const Vec4 a2 = rhs(c, vb, axpy(zero, 0.5 * h, a1));
  const Vec4 a3 = rhs(c, vb, axpy(zero, 0.5 * h, a2));
  const Vec4 a4 = rhs(c, vc, axpy(zero, h, a3));

  // vb enters k2 and k3 directly.
  const Vec4 b2 = rhs_coupling(c, y2);
  const Vec4 b3 = axpy(rhs_coupling(c, y3), 1.0, rhs(c, vb, axpy(zero, 0.5 * h, b2)));
  const Vec4 b4 = rhs(c, vc, axpy(zero, h, b3));

  // vc enters k4 only.
  const Vec4 c4 = rhs_coupling(c, y4);

  return {combine(a1, a2, a3, a4), combine(zero, b2, b3, b4), combine(zero, zero, zero, c4)};
}

/// Field fractions of the three RK4 stages of substep k out of m inside a
/// grid interval, for linear interpolation between the interval's nodes.
inline std::array<double, 3> stage_fractions(int k, int m) {
  const double md = static_cast<double>(m);
  return {static_cast<double>(k) / md, (static_cast<double>(k) + 0.5) / md, static_cast<double>(k + 1) / md};
}

inline double lerp_field(double left, double right, double f) { return (1.0 - f) * left + f * right; }

}  // namespace twolevel::detail
