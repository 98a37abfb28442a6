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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "twolevel/errors.hpp"
#include "twolevel/kernels.hpp"

namespace twolevel::kernels {

namespace {

// -1: no override; otherwise the Isa value.
std::atomic<int> g_override{-1};

bool env_forces_scalar() {
  const char* v = std::getenv("TWOLEVEL_SIMD");
  return v && (std::strcmp(v, "scalar") == 0 || std::strcmp(v, "off") == 0 || std::strcmp(v, "0") == 0);
}

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  static const Isa detected = (!env_forces_scalar() && isa_available(Isa::Avx2)) ? Isa::Avx2 : Isa::Scalar;
  return detected;
}

void set_isa_override(std::optional<Isa> isa) noexcept {
  if (isa && !isa_available(*isa)) isa = Isa::Scalar;
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w, Isa isa) {
  if (a.size() != b.size() || a.size() != w.size()) throw std::invalid_argument("weighted_dot: length mismatch");
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return avx2::weighted_dot(a.data(), b.data(), w.data(), a.size());
  return scalar::weighted_dot(a.data(), b.data(), w.data(), a.size());
}

void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out, Isa isa) {
  if (steps < 1) throw std::invalid_argument("propagate_lanes: steps must be >= 1");
  for (std::size_t l = 0; l < kLanes; ++l)
    if (fields[l].size() != grid.size() || out[l].size() != grid.size())
      throw std::invalid_argument("propagate_lanes: lane length does not match grid");
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2))
    avx2::propagate_lanes(sys, grid, steps, fields, init, out);
  else
    scalar::propagate_lanes(sys, grid, steps, fields, init, out);
}

std::vector<BlochTrajectory> propagate_batch(const TwoLevelSystem& sys, const TimeGrid& grid,
                                             const IntegratorConfig& cfg,
                                             std::span<const std::vector<double>> fields, const BlochState& init,
                                             Isa isa) {
  const int steps = cfg.steps_per_interval(grid);
  const std::size_t n = grid.size();
  std::vector<BlochTrajectory> result;
  result.reserve(fields.size());
  for (const auto& f : fields) {
    if (f.size() != n) throw std::invalid_argument("propagate_batch: field length does not match grid");
    result.push_back(BlochTrajectory{grid, std::vector<BlochState>(n)});
  }
  const std::vector<double> idle(n, 0.0);
  std::vector<BlochState> scratch(n);
  for (std::size_t base = 0; base < fields.size(); base += kLanes) {
    std::array<std::span<const double>, kLanes> in;
    std::array<std::span<BlochState>, kLanes> out;
    for (std::size_t l = 0; l < kLanes; ++l) {
      const std::size_t j = base + l;
      const bool live = j < fields.size();
      in[l] = live ? std::span<const double>(fields[j]) : std::span<const double>(idle);
      out[l] = live ? std::span<BlochState>(result[j].states) : std::span<BlochState>(scratch);
    }
    propagate_lanes(sys, grid, steps, in, init, out, isa);
  }
  for (const auto& traj : result)
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = traj.states[i];
      if (!std::isfinite(s.rho11) || !std::isfinite(s.rho22) || !std::isfinite(s.re12) || !std::isfinite(s.im12))
        throw IntegrationError("non-finite Bloch state in batched propagation", grid.node(i));
    }
  return result;
}

}  // namespace twolevel::kernels
