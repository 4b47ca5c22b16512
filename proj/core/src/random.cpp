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

#include "chanalloc/random.hpp"

#include <cmath>
#include <numbers>

namespace chanalloc {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t index) {
  std::uint64_t key = mix64(seed);
  key = mix64(key ^ (stream * 0xd1b54a32d192ed03ULL));
  key = mix64(key ^ (index * 0xaef17502108ef2d9ULL));
  return Rng(key);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // 128-bit product; the low half decides rejection.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::exponential() { return -std::log(uniform_pos()); }

std::complex<double> Rng::complex_gaussian() {
  // -ln(U) is Exp(1), which is exactly |g|^2 for CN(0,1).
  const double radius = std::sqrt(-std::log(uniform_pos()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace chanalloc
