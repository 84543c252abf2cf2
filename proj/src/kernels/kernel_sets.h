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

#ifndef TEIGO_SRC_KERNELS_KERNEL_SETS_H_
#define TEIGO_SRC_KERNELS_KERNEL_SETS_H_

#include "teigo/kernels.h"

namespace teigo::kernels {

const KernelSet& ScalarKernels();

// Null when the set was not compiled for this target.
const KernelSet* Avx2Kernels();
const KernelSet* NeonKernels();

}  // namespace teigo::kernels

#endif  // TEIGO_SRC_KERNELS_KERNEL_SETS_H_
