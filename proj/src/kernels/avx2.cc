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

// AVX2 + FMA kernels. This file is compiled with -mavx2 -mfma and must
// only be entered after a runtime CPU check.

#include "kernel_sets.h"

#if defined(TEIGO_HAVE_AVX2)

#include <immintrin.h>

namespace teigo::kernels {
namespace {

inline float HorizontalSum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

float DotAvx2(const float* a, const float* b, size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  __m256 acc2 = _mm256_setzero_ps();
  __m256 acc3 = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 16), _mm256_loadu_ps(b + i + 16), acc2);
    acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 24), _mm256_loadu_ps(b + i + 24), acc3);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float sum = HorizontalSum(_mm256_add_ps(_mm256_add_ps(acc0, acc1),
                                          _mm256_add_ps(acc2, acc3)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyAvx2(float alpha, const float* x, float* y, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i),
                                            _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Four rows per pass so each x chunk is loaded once.
void GemvAvx2(const float* w, const float* x, const float* bias, float* y,
          size_t rows, size_t cols) {
  size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const float* w0 = w + r * cols;
    const float* w1 = w0 + cols;
    const float* w2 = w1 + cols;
    const float* w3 = w2 + cols;
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    __m256 acc2 = _mm256_setzero_ps();
    __m256 acc3 = _mm256_setzero_ps();
    size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      const __m256 vx = _mm256_loadu_ps(x + c);
      acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(w0 + c), vx, acc0);
      acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(w1 + c), vx, acc1);
      acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(w2 + c), vx, acc2);
      acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(w3 + c), vx, acc3);
    }
    float s0 = HorizontalSum(acc0);
    float s1 = HorizontalSum(acc1);
    float s2 = HorizontalSum(acc2);
    float s3 = HorizontalSum(acc3);
    for (; c < cols; ++c) {
      s0 += w0[c] * x[c];
      s1 += w1[c] * x[c];
      s2 += w2[c] * x[c];
      s3 += w3[c] * x[c];
    }
    y[r] = s0 + (bias ? bias[r] : 0.0f);
    y[r + 1] = s1 + (bias ? bias[r + 1] : 0.0f);
    y[r + 2] = s2 + (bias ? bias[r + 2] : 0.0f);
    y[r + 3] = s3 + (bias ? bias[r + 3] : 0.0f);
  }
  for (; r < rows; ++r) {
    y[r] = DotAvx2(w + r * cols, x, cols) + (bias ? bias[r] : 0.0f);
  }
}

void GemvTAccumAvx2(const float* w, const float* dy, float* dx, size_t rows,
                size_t cols) {
  size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const float* w0 = w + r * cols;
    const float* w1 = w0 + cols;
    const float* w2 = w1 + cols;
    const float* w3 = w2 + cols;
    const __m256 d0 = _mm256_set1_ps(dy[r]);
    const __m256 d1 = _mm256_set1_ps(dy[r + 1]);
    const __m256 d2 = _mm256_set1_ps(dy[r + 2]);
    const __m256 d3 = _mm256_set1_ps(dy[r + 3]);
    size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      __m256 acc = _mm256_loadu_ps(dx + c);
      acc = _mm256_fmadd_ps(d0, _mm256_loadu_ps(w0 + c), acc);
      acc = _mm256_fmadd_ps(d1, _mm256_loadu_ps(w1 + c), acc);
      acc = _mm256_fmadd_ps(d2, _mm256_loadu_ps(w2 + c), acc);
      acc = _mm256_fmadd_ps(d3, _mm256_loadu_ps(w3 + c), acc);
      _mm256_storeu_ps(dx + c, acc);
    }
    for (; c < cols; ++c) {
      dx[c] += dy[r] * w0[c] + dy[r + 1] * w1[c] + dy[r + 2] * w2[c] +
               dy[r + 3] * w3[c];
    }
  }
  for (; r < rows; ++r) AxpyAvx2(dy[r], w + r * cols, dx, cols);
}

void GerAccumAvx2(const float* dy, const float* x, float* dw, size_t rows,
              size_t cols) {
  for (size_t r = 0; r < rows; ++r) {
    if (dy[r] != 0.0f) AxpyAvx2(dy[r], x, dw + r * cols, cols);
  }
}

void MomentumStepAvx2(float* p, float* v, const float* g, float lr, float mu,
                  size_t n) {
  const __m256 vmu = _mm256_set1_ps(mu);
  const __m256 vlr = _mm256_set1_ps(lr);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vel = _mm256_fmadd_ps(vmu, _mm256_loadu_ps(v + i),
                                       _mm256_loadu_ps(g + i));
    _mm256_storeu_ps(v + i, vel);
    _mm256_storeu_ps(p + i, _mm256_fnmadd_ps(vlr, vel, _mm256_loadu_ps(p + i)));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] + g[i];
    p[i] -= lr * v[i];
  }
}

float SumSquaresAvx2(const float* x, size_t n) { return DotAvx2(x, x, n); }

void ScaleAvx2(float alpha, float* x, size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelSet* Avx2Kernels() {
  static const KernelSet kSet = {Isa::kAvx2, DotAvx2, AxpyAvx2, GemvAvx2,
                                 GemvTAccumAvx2, GerAccumAvx2, MomentumStepAvx2,
                                 SumSquaresAvx2, ScaleAvx2};
  return &kSet;
}

}  // namespace teigo::kernels

#else

namespace teigo::kernels {
const KernelSet* Avx2Kernels() { return nullptr; }
}  // namespace teigo::kernels

#endif
