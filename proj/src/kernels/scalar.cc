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

#include "kernel_sets.h"

namespace teigo::kernels {
namespace {

float DotF(const float* a, const float* b, size_t n) { return scalar::Dot(a, b, n); }

void AxpyF(float alpha, const float* x, float* y, size_t n) {
  scalar::Axpy(alpha, x, y, n);
}

void GemvF(const float* w, const float* x, const float* bias, float* y,
           size_t rows, size_t cols) {
  scalar::Gemv(w, x, bias, y, rows, cols);
}

void GemvTAccumF(const float* w, const float* dy, float* dx, size_t rows,
                 size_t cols) {
  scalar::GemvTAccum(w, dy, dx, rows, cols);
}

void GerAccumF(const float* dy, const float* x, float* dw, size_t rows,
               size_t cols) {
  scalar::GerAccum(dy, x, dw, rows, cols);
}

void MomentumStepF(float* p, float* v, const float* g, float lr, float mu,
                   size_t n) {
  scalar::MomentumStep(p, v, g, lr, mu, n);
}

float SumSquaresF(const float* x, size_t n) { return scalar::SumSquares(x, n); }

void ScaleF(float alpha, float* x, size_t n) { scalar::Scale(alpha, x, n); }

}  // namespace

const KernelSet& ScalarKernels() {
  static const KernelSet kSet = {Isa::kScalar, DotF,          AxpyF,
                                 GemvF,        GemvTAccumF,   GerAccumF,
                                 MomentumStepF, SumSquaresF,  ScaleF};
  return kSet;
}

}  // namespace teigo::kernels
