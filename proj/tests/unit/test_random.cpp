// Copyright 2026 The chanalloc Authors
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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "chanalloc/random.hpp"

namespace chanalloc {
namespace {

TEST(Rng, SameSeedSameSequence) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer) {
  Rng a = Rng::for_stream(1, 0, 0);
  Rng b = Rng::for_stream(1, 0, 1);
  Rng c = Rng::for_stream(1, 1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(Rng::for_stream(1, 0, 0)(), x);
}

TEST(Rng, UniformRanges) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_pos();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Rng, BelowIsUniform) {
  Rng rng(11);
  std::vector<int> counts(6, 0);
  const int T = 600000;
  for (int i = 0; i < T; ++i) ++counts[rng.below(6)];
  for (int c : counts) EXPECT_NEAR(c, T / 6.0, 5.0 * std::sqrt(T / 6.0));
}

TEST(Rng, ExponentialMean) {
  Rng rng(5);
  double sum = 0.0;
  const int T = 1000000;
  for (int i = 0; i < T; ++i) sum += rng.exponential();
  EXPECT_NEAR(sum / T, 1.0, 0.005);
}

TEST(Rng, ComplexGaussianComponents) {
  Rng rng(9);
  double re = 0.0, re2 = 0.0, im2 = 0.0, cross = 0.0;
  const int T = 1000000;
  for (int i = 0; i < T; ++i) {
    const auto g = rng.complex_gaussian();
    re += g.real();
    re2 += g.real() * g.real();
    im2 += g.imag() * g.imag();
    cross += g.real() * g.imag();
  }
  EXPECT_NEAR(re / T, 0.0, 0.005);
  EXPECT_NEAR(re2 / T, 0.5, 0.005);
  EXPECT_NEAR(im2 / T, 0.5, 0.005);
  EXPECT_NEAR(cross / T, 0.0, 0.005);
}

TEST(Shuffle, IsPermutation) {
  Rng rng(2);
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  shuffle(std::span<int>(v), rng);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Shuffle, FirstPositionUniform) {
  Rng rng(4);
  std::vector<int> counts(4, 0);
  const int T = 200000;
  for (int t = 0; t < T; ++t) {
    std::vector<int> v = {0, 1, 2, 3};
    shuffle(std::span<int>(v), rng);
    ++counts[v[0]];
  }
  for (int c : counts) EXPECT_NEAR(c, T / 4.0, 5.0 * std::sqrt(T / 4.0));
}

}  // namespace
}  // namespace chanalloc
