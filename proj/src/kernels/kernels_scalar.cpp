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

#include "twolevel/bloch_step.hpp"
#include "twolevel/kernels.hpp"

namespace twolevel::kernels::scalar {

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out) {
  const detail::BlochCoefficients c(sys);
  const std::size_t n = grid.size();
  for (std::size_t lane = 0; lane < kLanes; ++lane) {
    const auto v = fields[lane];
    auto dst = out[lane];
    detail::Vec4 y = detail::to_vec(init);
    dst[0] = init;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = (grid.node(i + 1) - grid.node(i)) / steps;
      for (int k = 0; k < steps; ++k) {
        const auto f = detail::stage_fractions(k, steps);
        y = detail::rk4_step(c, y, detail::lerp_field(v[i], v[i + 1], f[0]), detail::lerp_field(v[i], v[i + 1], f[1]),
                             detail::lerp_field(v[i], v[i + 1], f[2]), h);
      }
      dst[i + 1] = detail::to_state(y);
    }
  }
}

}  // namespace twolevel::kernels::scalar
