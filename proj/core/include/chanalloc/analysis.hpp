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

#ifndef CHANALLOC_ANALYSIS_HPP_
#define CHANALLOC_ANALYSIS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chanalloc/channel.hpp"
#include "chanalloc/numerics.hpp"

namespace chanalloc {

enum class SchemeKind { kRbCoded, kChunkCoded, kInterleaved, kLocalized, kTdma };

std::string_view scheme_name(SchemeKind kind);
// Accepts the names produced by scheme_name; throws ConfigError otherwise.
SchemeKind parse_scheme(std::string_view name);

// caps: K_m for the chunk scheme, K~_m overrides for the RB scheme. Empty
// means K~_m from the config.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::kRbCoded;
  std::vector<int> caps;

  std::vector<int> effective_caps(const SystemConfig& config) const;
  // Chunk schemes need N = L and M <= L; caps must lie in [1, K~_m].
  void Validate(const SystemConfig& config) const;
};

struct FormulaOptions {
  bool include_qs_factor = false;  // q_s^(ML - kappa) in the RB formula
  bool enforce_guards = true;      // throw RegimeError instead of flagging
  // RB conditional term at band level: ceil(K~/N_c) bands of which L - kappa
  // are good. When false: K~ subchannels of which floor((L-kappa) K~ / L).
  bool band_granularity = true;
};

struct FormulaResult {
  double p = 0.0;
  bool guard_violated = false;
  bool rounded = false;  // a non-outage count was floored
  int k_sum = 0;         // K^sum used by a chunk branch, 0 if none
  std::string branch;
};

// First-order RB outage at high SNR (guard p_s < 0.5). See
// FormulaOptions::band_granularity for the conditional factor.
FormulaResult rb_outage_high_snr(const SystemConfig& config, int m, double snr,
                                 const FormulaOptions& options = {});
// p_s^L + L cop(K, 1) p_s^(L-1) q_s with K as above, guard q_s < 0.2.
FormulaResult rb_outage_low_snr(const SystemConfig& config, int m, double snr,
                                const FormulaOptions& options = {});

// Chunk scheme with caps K (N = L). User i thresholds its chunks at
// R_i / K_i.
FormulaResult chunk_outage_high_snr(const SystemConfig& config, int m,
                                    std::span<const int> caps, double snr,
                                    const FormulaOptions& options = {});
FormulaResult chunk_outage_low_snr(const SystemConfig& config, int m,
                                   std::span<const int> caps, double snr,
                                   const FormulaOptions& options = {});
// Conditional-outage terms (K, k, snr, rc) summed by the high-SNR formula
// of an RB or chunk scheme; empty for the CSI-blind schemes.
std::vector<SaddleInputs> formula_saddle_terms(const SchemeSpec& scheme,
                                               const SystemConfig& config,
                                               int m, double snr,
                                               const FormulaOptions& options = {});

// Best chunk allocation: K_m^th chunks when r_m <= r_m^th, else K~_m.
FormulaResult chunk_optimal_outage(const SystemConfig& config, int m,
                                   double snr, double r,
                                   const FormulaOptions& options = {});

// Upper bound for allocations that ignore CSI: interleaved (K~_m
// subchannels), localized (K~_m / N_c), TDMA (L).
FormulaResult fixed_allocation_outage(SchemeKind kind,
                                      const SystemConfig& config, int m,
                                      double snr);
double fixed_allocation_count(SchemeKind kind, const SystemConfig& config,
                              int m);

// K_m^th for user m against the K~ of the other users.
int k_threshold(const SystemConfig& config, int m, std::span<const int> caps);
double r_threshold(const SystemConfig& config, int m);

struct DmrPoint {
  std::vector<double> r;
  std::vector<double> d;
};

// d_m = L (1 - N_c r_m / K~_m) for 0 <= r_m <= K~_m / N_c.
DmrPoint dmr_rb(const SystemConfig& config, std::span<const double> r);
// Fixed K profile; branch by K_m against K_m^th.
double dmt_chunk(const SystemConfig& config, int m, std::span<const int> caps,
                 double r);
// Piecewise best achievable chunk DMT, switching at r_m^th.
DmrPoint dmr_chunk(const SystemConfig& config, std::span<const double> r);
// Diversity of user m under the given scheme at multiplexing gain r.
double scheme_dmt(SchemeKind kind, const SystemConfig& config, int m,
                  double r);

enum class CurveSource { kHighSnrFormula, kLowSnrFormula, kMonteCarlo, kNone };
std::string_view curve_source_name(CurveSource source);

struct OutageCurve {
  SchemeKind scheme = SchemeKind::kRbCoded;
  int user = 0;
  std::vector<double> snr;  // linear
  std::vector<double> p;
  std::vector<CurveSource> source;
  std::vector<double> exponent;  // NaN where undefined
};

// Optional Monte Carlo fallback where neither guard holds.
using OutageProvider = std::function<std::optional<double>(double snr)>;

// config fixes the rate law; each grid point re-resolves it at that snr.
OutageCurve oer_curve(const SystemConfig& config, const SchemeSpec& scheme,
                      int m, std::span<const double> snr_grid,
                      const OutageProvider& monte_carlo = {});

// Negative least-squares slope of ln p against ln snr.
double fit_loglog_slope(std::span<const double> snr, std::span<const double> p);

double binomial(int n, int k);

}  // namespace chanalloc

#endif  // CHANALLOC_ANALYSIS_HPP_
