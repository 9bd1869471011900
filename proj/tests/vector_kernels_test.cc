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

#include <cstring>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "primalkit/kernels/vector_kernels.h"

namespace primalkit::kernels {
namespace {

std::vector<Backend> AvailableBackends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (IsSupported(b)) out.push_back(b);
  }
  return out;
}

std::vector<double> RandomVector(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(VectorKernelsTest, ScalarReferenceValues) {
  std::vector<double> x = {1.0, 2.0, 3.0};
  std::vector<double> y = {10.0, 20.0, 30.0};
  scalar::Axpy(-2.0, x.data(), y.data(), 3);
  EXPECT_EQ(y, (std::vector<double>{8.0, 16.0, 24.0}));
  scalar::Scale(0.5, y.data(), 3);
  EXPECT_EQ(y, (std::vector<double>{4.0, 8.0, 12.0}));
  EXPECT_DOUBLE_EQ(scalar::Dot(x.data(), y.data(), 3), 56.0);
}

TEST(VectorKernelsTest, ElementwiseKernelsAreBitIdenticalAcrossBackends) {
  std::mt19937_64 rng(3);
  const KernelTable& ref = Table(Backend::kScalar);
  for (Backend b : AvailableBackends()) {
    const KernelTable& t = Table(b);
    for (size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 257u}) {
      const std::vector<double> x = RandomVector(rng, n);
      const std::vector<double> y0 = RandomVector(rng, n);
      const double a = std::uniform_real_distribution<double>(-5, 5)(rng);
      std::vector<double> y_ref = y0, y_simd = y0;
      ref.axpy(a, x.data(), y_ref.data(), n);
      t.axpy(a, x.data(), y_simd.data(), n);
      EXPECT_TRUE(BitEqual(y_ref, y_simd)) << ToString(b) << " axpy n=" << n;
      std::vector<double> s_ref = x, s_simd = x;
      ref.scale(a, s_ref.data(), n);
      t.scale(a, s_simd.data(), n);
      EXPECT_TRUE(BitEqual(s_ref, s_simd)) << ToString(b) << " scale n=" << n;
    }
  }
}

TEST(VectorKernelsTest, DotAgreesWithinRounding) {
  std::mt19937_64 rng(5);
  for (Backend b : AvailableBackends()) {
    for (size_t n : {0u, 1u, 5u, 8u, 13u, 100u, 1000u}) {
      const std::vector<double> x = RandomVector(rng, n);
      const std::vector<double> y = RandomVector(rng, n);
      double abs_sum = 0.0;
      for (size_t i = 0; i < n; ++i) abs_sum += std::abs(x[i] * y[i]);
      const double ref = scalar::Dot(x.data(), y.data(), n);
      const double got = Table(b).dot(x.data(), y.data(), n);
      EXPECT_NEAR(got, ref, 1e-14 * (abs_sum + 1.0) * (n + 1)) << ToString(b);
    }
  }
}

TEST(VectorKernelsTest, SetBackendSwitchesDispatch) {
  const Backend original = ActiveBackend();
  SetBackend(Backend::kScalar);
  EXPECT_EQ(ActiveBackend(), Backend::kScalar);
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y(5, 1.0);
  Axpy(2.0, x, y);
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7, 9, 11}));
  SetBackend(original);
  EXPECT_EQ(ActiveBackend(), original);
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (!IsSupported(b)) EXPECT_THROW(SetBackend(b), std::invalid_argument);
  }
}

}  // namespace
}  // namespace primalkit::kernels
