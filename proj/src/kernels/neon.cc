// Copyright 2026 The teigo Authors.
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

// NEON kernels for AArch64, where Advanced SIMD is part of the baseline.

#include "kernel_sets.h"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace teigo::kernels {
namespace {

float DotNeon(const float* a, const float* b, size_t n) {
  float32x4_t acc0 = vdupq_n_f32(0.0f);
  float32x4_t acc1 = vdupq_n_f32(0.0f);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
  }
  float sum = vaddvq_f32(vaddq_f32(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyNeon(float alpha, const float* x, float* y, size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void GemvNeon(const float* w, const float* x, const float* bias, float* y,
          size_t rows, size_t cols) {
  for (size_t r = 0; r < rows; ++r) {
    y[r] = DotNeon(w + r * cols, x, cols) + (bias ? bias[r] : 0.0f);
  }
}

void GemvTAccumNeon(const float* w, const float* dy, float* dx, size_t rows,
                size_t cols) {
  for (size_t r = 0; r < rows; ++r) AxpyNeon(dy[r], w + r * cols, dx, cols);
}

void GerAccumNeon(const float* dy, const float* x, float* dw, size_t rows,
              size_t cols) {
  for (size_t r = 0; r < rows; ++r) {
    if (dy[r] != 0.0f) AxpyNeon(dy[r], x, dw + r * cols, cols);
  }
}

void MomentumStepNeon(float* p, float* v, const float* g, float lr, float mu,
                  size_t n) {
  const float32x4_t vmu = vdupq_n_f32(mu);
  const float32x4_t vlr = vdupq_n_f32(lr);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t vel = vfmaq_f32(vld1q_f32(g + i), vmu, vld1q_f32(v + i));
    vst1q_f32(v + i, vel);
    vst1q_f32(p + i, vfmsq_f32(vld1q_f32(p + i), vlr, vel));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] + g[i];
    p[i] -= lr * v[i];
  }
}

float SumSquaresNeon(const float* x, size_t n) { return DotNeon(x, x, n); }

void ScaleNeon(float alpha, float* x, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmulq_n_f32(vld1q_f32(x + i), alpha));
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelSet* NeonKernels() {
  static const KernelSet kSet = {Isa::kNeon, DotNeon, AxpyNeon, GemvNeon,
                                 GemvTAccumNeon, GerAccumNeon, MomentumStepNeon,
                                 SumSquaresNeon, ScaleNeon};
  return &kSet;
}

}  // namespace teigo::kernels

#else

namespace teigo::kernels {
const KernelSet* NeonKernels() { return nullptr; }
}  // namespace teigo::kernels

#endif
