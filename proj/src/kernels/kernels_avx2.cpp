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

// Compiled with -mavx2 (no FMA): every lane performs exactly the scalar
// reference's operation sequence.

#include <immintrin.h>

#include <vector>

#include "twolevel/bloch_step.hpp"
#include "twolevel/kernels.hpp"

namespace twolevel::kernels::avx2 {

namespace {

struct Lanes4 {
  __m256d r11, r22, re, im;
};

struct Coeffs {
  __m256d mu, g1, neg_g2, two, neg_two;
};

inline Lanes4 rhs(const Coeffs& c, __m256d v, const Lanes4& y) {
  const __m256d rabi = _mm256_mul_pd(c.mu, v);
  const __m256d g1r22 = _mm256_mul_pd(c.g1, y.r22);
  const __m256d d11 = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(c.neg_two, rabi), y.im), g1r22);
  const __m256d d22 = _mm256_sub_pd(_mm256_mul_pd(_mm256_mul_pd(c.two, rabi), y.im), g1r22);
  const __m256d dre = _mm256_mul_pd(c.neg_g2, y.re);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d neg_rabi = _mm256_xor_pd(rabi, sign);
  const __m256d g2 = _mm256_xor_pd(c.neg_g2, sign);
  const __m256d dim =
      _mm256_sub_pd(_mm256_mul_pd(neg_rabi, _mm256_sub_pd(y.r22, y.r11)), _mm256_mul_pd(g2, y.im));
  return {d11, d22, dre, dim};
}

inline Lanes4 axpy(const Lanes4& y, __m256d a, const Lanes4& k) {
  return {_mm256_add_pd(y.r11, _mm256_mul_pd(a, k.r11)), _mm256_add_pd(y.r22, _mm256_mul_pd(a, k.r22)),
          _mm256_add_pd(y.re, _mm256_mul_pd(a, k.re)), _mm256_add_pd(y.im, _mm256_mul_pd(a, k.im))};
}

inline __m256d combine(__m256d y, __m256d w, __m256d two, __m256d k1, __m256d k2, __m256d k3, __m256d k4) {
  const __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(k1, _mm256_mul_pd(two, k2)), _mm256_mul_pd(two, k3)), k4);
  return _mm256_add_pd(y, _mm256_mul_pd(w, s));
}

inline Lanes4 rk4(const Coeffs& c, const Lanes4& y, __m256d va, __m256d vb, __m256d vc, double h) {
  const __m256d half_h = _mm256_set1_pd(0.5 * h);
  const __m256d full_h = _mm256_set1_pd(h);
  const Lanes4 k1 = rhs(c, va, y);
  const Lanes4 k2 = rhs(c, vb, axpy(y, half_h, k1));
  const Lanes4 k3 = rhs(c, vb, axpy(y, half_h, k2));
  const Lanes4 k4 = rhs(c, vc, axpy(y, full_h, k3));
  const __m256d w = _mm256_set1_pd(h / 6.0);
  return {combine(y.r11, w, c.two, k1.r11, k2.r11, k3.r11, k4.r11),
          combine(y.r22, w, c.two, k1.r22, k2.r22, k3.r22, k4.r22),
          combine(y.re, w, c.two, k1.re, k2.re, k3.re, k4.re),
          combine(y.im, w, c.two, k1.im, k2.im, k3.im, k4.im)};
}

inline __m256d lerp(__m256d left, __m256d right, double f) {
  return _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(1.0 - f), left), _mm256_mul_pd(_mm256_set1_pd(f), right));
}

}  // namespace

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wa, _mm256_loadu_pd(b + i)));
  }
  alignas(32) double part[4];
  _mm256_store_pd(part, acc);
  double sum = (part[0] + part[1]) + (part[2] + part[3]);
  for (; i < n; ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

void propagate_lanes(const TwoLevelSystem& sys, const TimeGrid& grid, int steps,
                     const std::array<std::span<const double>, kLanes>& fields, const BlochState& init,
                     const std::array<std::span<BlochState>, kLanes>& out) {
  const std::size_t n = grid.size();
  std::vector<double> interleaved(4 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < kLanes; ++l) interleaved[4 * i + l] = fields[l][i];

  const Coeffs c{_mm256_set1_pd(sys.mu()), _mm256_set1_pd(sys.gamma1()), _mm256_set1_pd(-sys.gamma2()),
                 _mm256_set1_pd(2.0), _mm256_set1_pd(-2.0)};
  Lanes4 y{_mm256_set1_pd(init.rho11), _mm256_set1_pd(init.rho22), _mm256_set1_pd(init.re12),
           _mm256_set1_pd(init.im12)};
  for (std::size_t l = 0; l < kLanes; ++l) out[l][0] = init;

  alignas(32) double r11[4], r22[4], re[4], im[4];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = (grid.node(i + 1) - grid.node(i)) / steps;
    const __m256d left = _mm256_loadu_pd(&interleaved[4 * i]);
    const __m256d right = _mm256_loadu_pd(&interleaved[4 * (i + 1)]);
    for (int k = 0; k < steps; ++k) {
      const auto f = detail::stage_fractions(k, steps);
      y = rk4(c, y, lerp(left, right, f[0]), lerp(left, right, f[1]), lerp(left, right, f[2]), h);
    }
    _mm256_store_pd(r11, y.r11);
    _mm256_store_pd(r22, y.r22);
    _mm256_store_pd(re, y.re);
    _mm256_store_pd(im, y.im);
    for (std::size_t l = 0; l < kLanes; ++l) out[l][i + 1] = BlochState{r11[l], r22[l], re[l], im[l]};
  }
}

}  // namespace twolevel::kernels::avx2
