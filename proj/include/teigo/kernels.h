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

#ifndef TEIGO_KERNELS_H_
#define TEIGO_KERNELS_H_

#include <cstddef>

#include "teigo/kernels_scalar.h"

// Dense float kernels behind the embedding sums, the scorer MLP and the
// optimizer. Each instruction set provides a full KernelSet; the active
// set is chosen once from the CPU (or TEIGO_SIMD=scalar|avx2|neon) and can
// be switched by tests. All sets compute the same functions; they differ
// only in float summation order.
namespace teigo::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

const char* IsaName(Isa isa);

struct KernelSet {
  Isa isa;
  // sum_i a[i] * b[i]
  float (*dot)(const float* a, const float* b, size_t n);
  // y += alpha * x
  void (*axpy)(float alpha, const float* x, float* y, size_t n);
  // y = W x + bias, W row-major rows x cols; bias may be null
  void (*gemv)(const float* w, const float* x, const float* bias, float* y,
               size_t rows, size_t cols);
  // dx += W^T dy
  void (*gemv_t_accum)(const float* w, const float* dy, float* dx, size_t rows,
                       size_t cols);
  // dW += dy x^T
  void (*ger_accum)(const float* dy, const float* x, float* dw, size_t rows,
                    size_t cols);
  // v = mu * v + g; p -= lr * v
  void (*momentum_step)(float* p, float* v, const float* g, float lr, float mu,
                        size_t n);
  float (*sum_squares)(const float* x, size_t n);
  void (*scale)(float alpha, float* x, size_t n);
};

// True when the set is compiled in and the CPU supports it.
bool Supported(Isa isa);

// Throws Error(kUsage) when unsupported.
const KernelSet& Get(Isa isa);

// Best supported set, honoring TEIGO_SIMD when it names a supported set.
Isa Detect();

const KernelSet& Active();
void SetActive(Isa isa);

// Restores the previous set on destruction. Not thread-safe; meant for
// tests and benchmarks.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(Active().isa) { SetActive(isa); }
  ~ScopedIsa() { SetActive(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

// Overloads used by precision-generic code: float goes through the active
// set, double through the scalar reference.
inline float Dot(const float* a, const float* b, size_t n) {
  return Active().dot(a, b, n);
}
inline double Dot(const double* a, const double* b, size_t n) {
  return scalar::Dot(a, b, n);
}
inline void Axpy(float alpha, const float* x, float* y, size_t n) {
  Active().axpy(alpha, x, y, n);
}
inline void Axpy(double alpha, const double* x, double* y, size_t n) {
  scalar::Axpy(alpha, x, y, n);
}
inline void Gemv(const float* w, const float* x, const float* bias, float* y,
                 size_t rows, size_t cols) {
  Active().gemv(w, x, bias, y, rows, cols);
}
inline void Gemv(const double* w, const double* x, const double* bias,
                 double* y, size_t rows, size_t cols) {
  scalar::Gemv(w, x, bias, y, rows, cols);
}
inline void GemvTAccum(const float* w, const float* dy, float* dx, size_t rows,
                       size_t cols) {
  Active().gemv_t_accum(w, dy, dx, rows, cols);
}
inline void GemvTAccum(const double* w, const double* dy, double* dx,
                       size_t rows, size_t cols) {
  scalar::GemvTAccum(w, dy, dx, rows, cols);
}
inline void GerAccum(const float* dy, const float* x, float* dw, size_t rows,
                     size_t cols) {
  Active().ger_accum(dy, x, dw, rows, cols);
}
inline void GerAccum(const double* dy, const double* x, double* dw,
                     size_t rows, size_t cols) {
  scalar::GerAccum(dy, x, dw, rows, cols);
}
inline void MomentumStep(float* p, float* v, const float* g, float lr, float mu,
                         size_t n) {
  Active().momentum_step(p, v, g, lr, mu, n);
}
inline void MomentumStep(double* p, double* v, const double* g, double lr,
                         double mu, size_t n) {
  scalar::MomentumStep(p, v, g, lr, mu, n);
}
inline float SumSquares(const float* x, size_t n) {
  return Active().sum_squares(x, n);
}
inline double SumSquares(const double* x, size_t n) {
  return scalar::SumSquares(x, n);
}
inline void Scale(float alpha, float* x, size_t n) { Active().scale(alpha, x, n); }
inline void Scale(double alpha, double* x, size_t n) {
  scalar::Scale(alpha, x, n);
}

}  // namespace teigo::kernels

#endif  // TEIGO_KERNELS_H_
