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


#ifndef CHANALLOC_MONTECARLO_HPP_
#define CHANALLOC_MONTECARLO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanalloc/analysis.hpp"
#include "chanalloc/channel.hpp"
#include "chanalloc/random.hpp"

namespace chanalloc {

struct TrialOptions {
  bool use_pver2hk = false;
  double eta = 2.0;
};

struct TrialOutcome {
  SchemeKind scheme = SchemeKind::kRbCoded;
  std::uint64_t index = 0;
  std::vector<std::uint8_t> outage;  // per user
  std::vector<int> matched;          // k_m; 0 for CSI-blind schemes
};

// One frame: the scheme allocates on `real` (CSI-driven schemes quantize it)
// and each user is in outage iff the mutual information summed over its
// subchannels falls below R_m. Allocation randomness comes from alloc_rng.
TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       const ChannelRealization& real, Rng& alloc_rng,
                       const TrialOptions& options = {});
// As above, but the allocator sees `csi` instead of the quantized `real`.
TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       const ChannelRealization& real, const CsiMatrix& csi,
                       Rng& alloc_rng, const TrialOptions& options = {});
// Samples the channel from rng, then allocates with the same generator.
TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       Rng& rng, const TrialOptions& options = {});

struct OutageEstimate {
  SchemeKind scheme = SchemeKind::kRbCoded;
  int user = 0;
  double snr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;

  double std_error() const;
  // Below the reporting floor of 1e-6.
  bool censored() const;
};

// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials);

struct EstimateOptions {
  int workers = 1;
  // Share each trial's channel draw among all schemes.
  bool paired = false;
  TrialOptions trial;
  // Distinguishes grid points in the stream keys.
  std::uint64_t point_index = 0;
  // Added to scheme indices in the stream keys, for callers that split one
  // scheme list over several calls.
  std::uint64_t scheme_offset = 0;
};

// Indexed [scheme][user]. Trial t of scheme s draws its channel from stream
// (point, s) (or (point) when paired) and its allocation from a separate
// stream, so counts do not depend on the worker count.
std::vector<std::vector<OutageEstimate>> estimate_outage(
    const SystemConfig& config, std::span<const SchemeSpec> schemes,
    std::uint64_t trials, std::uint64_t seed,
    const EstimateOptions& options = {});

struct ConditionalEstimate {
  int K = 0;
  int k = 0;
  double snr = 0.0;
  double rc = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double std_error() const;
};

// Pr{ sum_i ln(1 + x_i snr) < K rc } where k of the x_i ~ Exp(1) are drawn
// above the outage threshold and K - k below it (inverse-CDF sampling).
ConditionalEstimate conditional_experiment(int K, int k, double snr, double rc,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           int workers = 1);
// Same event with unconditioned x_i.
ConditionalEstimate unconditional_experiment(int K, double snr, double rc,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             int workers = 1);

struct MixtureEstimate {
  double p = 0.0;
  double std_error = 0.0;
};

// sum_k C(K,k) q^k p^(K-k) P(outage | k) from one conditional run per k.
MixtureEstimate binomial_mixture(std::span<const ConditionalEstimate> by_k,
                                 double p_s);

struct SweepRow {
  SchemeKind scheme = SchemeKind::kRbCoded;
  int user = 0;
  double gamma_db = 0.0;
  double p_out = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::string source;
  bool guard_violated = false;
};

struct SweepOptions {
  EstimateOptions estimate;
  bool formulas = true;
  // Overlay options. With enforce_guards false, out-of-regime overlays are
  // kept and flagged instead of dropped.
  FormulaOptions formula;
  bool asymptotes = true;
  // Users to report; empty means all.
  std::vector<int> users;
};

// Monte Carlo estimates per (scheme, user, grid point), then formula
// overlays where the regime guards hold and asymptote rows snr^-d anchored
// at the highest uncensored estimate.
std::vector<SweepRow> sweep(const SystemConfig& config,
                            std::span<const SchemeSpec> schemes,
                            std::span<const double> gamma_db,
                            std::uint64_t trials, std::uint64_t seed,
                            const SweepOptions& options = {});

// SNR (dB) where a curve crosses `target`, by linear interpolation of
// log p against dB. Empty when the curve never brackets the target.
std::optional<double> crossing_db(std::span<const double> gamma_db,
                                  std::span<const double> p, double target);

}  // namespace chanalloc

#endif  // CHANALLOC_MONTECARLO_HPP_
