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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "kernel_sets.h"
#include "teigo/error.h"

namespace teigo::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(TEIGO_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelSet* Lookup(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return &ScalarKernels();
    case Isa::kAvx2: return CpuHasAvx2() ? Avx2Kernels() : nullptr;
    case Isa::kNeon: return NeonKernels();
  }
  return nullptr;
}

std::atomic<const KernelSet*>& ActiveSlot() {
  static std::atomic<const KernelSet*> slot{&Get(Detect())};
  return slot;
}

}  // namespace

const char* IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "?";
}

bool Supported(Isa isa) { return Lookup(isa) != nullptr; }

const KernelSet& Get(Isa isa) {
  const KernelSet* set = Lookup(isa);
  if (!set) {
    throw Error(ErrorKind::kUsage,
                fmt::format("kernel set '{}' is not available on this CPU",
                            IsaName(isa)));
  }
  return *set;
}

Isa Detect() {
  if (const char* env = std::getenv("TEIGO_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == IsaName(isa)) {
        if (Supported(isa)) return isa;
        spdlog::warn("TEIGO_SIMD={} is not supported here; auto-detecting", want);
      }
    }
  }
  if (Supported(Isa::kAvx2)) return Isa::kAvx2;
  if (Supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

const KernelSet& Active() {
  return *ActiveSlot().load(std::memory_order_acquire);
}

void SetActive(Isa isa) {
  ActiveSlot().store(&Get(isa), std::memory_order_release);
}

}  // namespace teigo::kernels
