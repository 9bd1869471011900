// Copyright 2026 The primalkit Authors
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
#include <stdexcept>
#include <string>

#include "primalkit/kernels/vector_kernels.h"

namespace primalkit::kernels {
namespace {

constexpr KernelTable kScalarTable = {&scalar::Axpy, &scalar::Scale,
                                      &scalar::Dot};
#if defined(PRIMALKIT_HAVE_AVX2)
constexpr KernelTable kAvx2Table = {&avx2::Axpy, &avx2::Scale, &avx2::Dot};
#endif
#if defined(PRIMALKIT_HAVE_NEON)
constexpr KernelTable kNeonTable = {&neon::Axpy, &neon::Scale, &neon::Dot};
#endif

Backend DetectBackend() {
  if (const char* env = std::getenv("PRIMALKIT_KERNELS")) {
    const std::string requested(env);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
      if (requested == ToString(b) && IsSupported(b)) return b;
    }
  }
  if (IsSupported(Backend::kAvx2)) return Backend::kAvx2;
  if (IsSupported(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

std::atomic<const KernelTable*>& ActivePointer() {
  static std::atomic<const KernelTable*> active{&Table(DetectBackend())};
  return active;
}

}  // namespace

bool IsSupported(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(PRIMALKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(PRIMALKIT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& Table(Backend backend) {
  if (!IsSupported(backend)) {
    throw std::invalid_argument("kernel backend '" +
                                std::string(ToString(backend)) +
                                "' is not available on this machine");
  }
  switch (backend) {
#if defined(PRIMALKIT_HAVE_AVX2)
    case Backend::kAvx2:
      return kAvx2Table;
#endif
#if defined(PRIMALKIT_HAVE_NEON)
    case Backend::kNeon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

const KernelTable& ActiveTable() {
  return *ActivePointer().load(std::memory_order_relaxed);
}

Backend ActiveBackend() {
  const KernelTable* t = &ActiveTable();
#if defined(PRIMALKIT_HAVE_AVX2)
  if (t == &kAvx2Table) return Backend::kAvx2;
#endif
#if defined(PRIMALKIT_HAVE_NEON)
  if (t == &kNeonTable) return Backend::kNeon;
#endif
  (void)t;
  return Backend::kScalar;
}

void SetBackend(Backend backend) {
  ActivePointer().store(&Table(backend), std::memory_order_relaxed);
}

std::string_view ToString(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "?";
}

}  // namespace primalkit::kernels
