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

#ifndef TEIGO_KERNELS_SCALAR_H_
#define TEIGO_KERNELS_SCALAR_H_

#include <cstddef>

// Reference kernels. Plain left-to-right loops; the SIMD sets are tested
// against these.
namespace teigo::kernels::scalar {

template <typename T>
T Dot(const T* a, const T* b, size_t n) {
  T sum = 0;
  for (size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

template <typename T>
void Axpy(T alpha, const T* x, T* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void Gemv(const T* w, const T* x, const T* bias, T* y, size_t rows,
          size_t cols) {
  for (size_t r = 0; r < rows; ++r) {
    y[r] = Dot(w + r * cols, x, cols) + (bias ? bias[r] : T(0));
  }
}

template <typename T>
void GemvTAccum(const T* w, const T* dy, T* dx, size_t rows, size_t cols) {
  for (size_t r = 0; r < rows; ++r) Axpy(dy[r], w + r * cols, dx, cols);
}

template <typename T>
void GerAccum(const T* dy, const T* x, T* dw, size_t rows, size_t cols) {
  for (size_t r = 0; r < rows; ++r) Axpy(dy[r], x, dw + r * cols, cols);
}

template <typename T>
void MomentumStep(T* p, T* v, const T* g, T lr, T mu, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    v[i] = mu * v[i] + g[i];
    p[i] -= lr * v[i];
  }
}

template <typename T>
T SumSquares(const T* x, size_t n) {
  return Dot(x, x, n);
}

template <typename T>
void Scale(T alpha, T* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace teigo::kernels::scalar

#endif  // TEIGO_KERNELS_SCALAR_H_
