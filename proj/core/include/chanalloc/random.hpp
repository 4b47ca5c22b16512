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

#ifndef CHANALLOC_RANDOM_HPP_
#define CHANALLOC_RANDOM_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace chanalloc {

// SplitMix64 finalizer. Used to derive generator states from keys.
std::uint64_t mix64(std::uint64_t x);

// xoshiro256** with SplitMix64 seeding. Satisfies
// UniformRandomBitGenerator. Every Monte Carlo trial gets its own generator
// derived from (seed, stream, index), so results never depend on how trials
// are distributed over workers.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe to pass to log().
  double uniform_pos() {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t n);

  // Unit-rate exponential variate.
  double exponential();

  // Circularly-symmetric complex Gaussian with E|g|^2 = 1 (each component
  // N(0, 1/2)), by Box-Muller.
  std::complex<double> complex_gaussian();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Fisher-Yates shuffle driven by Rng::below. std::shuffle is not used
// because its draw sequence is implementation-defined.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace chanalloc

#endif  // CHANALLOC_RANDOM_HPP_
