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

// Data-parallel kernels with a scalar reference and an AVX2 variant chosen
// at runtime. The scalar path is authoritative; the AVX2 path must agree
// with it (the lane integrator bit for bit, reductions to rounding).
//
// TWOLEVEL_SIMD=scalar in the environment forces the scalar path.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "twolevel/dynamics.hpp"
#include "twolevel/model.hpp"

namespace twolevel::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
/// Best available ISA, unless overridden or disabled through TWOLEVEL_SIMD.
Isa active_isa() noexcept;
void set_isa_override(std::optional<Isa> isa) noexcept;

inline constexpr std::size_t kLanes = 4;

/// sum_i w_i a_i b_i
double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w,
                    Isa isa = active_isa());

/// Integrates four envelopes sampled on `grid` in lockstep, one per lane,
/// with `steps` RK4 steps per grid interval (linear field interpolation at
/// the stages, as in propagate). out[l] receives grid.size() states.
void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out, Isa isa = active_isa());

/// Batched propagate for any number of envelopes on `grid`; pads the last
/// group of lanes internally. Throws IntegrationError on non-finite states.
std::vector<BlochTrajectory> propagate_batch(const TwoLevelSystem& sys, const TimeGrid& grid,
                                             const IntegratorConfig& cfg,
                                             std::span<const std::vector<double>> fields, const BlochState& init,
                                             Isa isa = active_isa());

namespace scalar {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out);
}  // namespace scalar

namespace avx2 {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out);
}  // namespace avx2

}  // namespace twolevel::kernels
