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

// Dense double-precision vector kernels used by the simplex tableau.
//
// Each kernel has a scalar reference implementation and SIMD variants. The
// variant is picked once at startup from the CPU features (AVX2 on x86-64,
// NEON on AArch64) and can be overridden with SetBackend() or the
// PRIMALKIT_KERNELS environment variable ("scalar", "avx2", "neon").
//
// Axpy and Scale are elementwise and use separate multiply and add (no FMA),
// so every backend produces bit-identical results. Dot reassociates the sum
// and agrees with the scalar reference only up to rounding.

#ifndef PRIMALKIT_KERNELS_VECTOR_KERNELS_H_
#define PRIMALKIT_KERNELS_VECTOR_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace primalkit::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

struct KernelTable {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

namespace scalar {
void Axpy(double a, const double* x, double* y, std::size_t n);
void Scale(double a, double* x, std::size_t n);
double Dot(const double* x, const double* y, std::size_t n);
}  // namespace scalar

#if defined(PRIMALKIT_HAVE_AVX2)
namespace avx2 {
void Axpy(double a, const double* x, double* y, std::size_t n);
void Scale(double a, double* x, std::size_t n);
double Dot(const double* x, const double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(PRIMALKIT_HAVE_NEON)
namespace neon {
void Axpy(double a, const double* x, double* y, std::size_t n);
void Scale(double a, double* x, std::size_t n);
double Dot(const double* x, const double* y, std::size_t n);
}  // namespace neon
#endif

bool IsSupported(Backend backend);
Backend ActiveBackend();
// Throws std::invalid_argument if the backend is not available here.
void SetBackend(Backend backend);
std::string_view ToString(Backend backend);
const KernelTable& Table(Backend backend);
const KernelTable& ActiveTable();

inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  ActiveTable().axpy(a, x.data(), y.data(), y.size());
}

inline void Scale(double a, std::span<double> x) {
  ActiveTable().scale(a, x.data(), x.size());
}

inline double Dot(std::span<const double> x, std::span<const double> y) {
  return ActiveTable().dot(x.data(), y.data(), x.size());
}

}  // namespace primalkit::kernels

#endif  // PRIMALKIT_KERNELS_VECTOR_KERNELS_H_
