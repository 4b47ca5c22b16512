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
#include <vector>

#include <gtest/gtest.h>

#include "chanalloc/analysis.hpp"
#include "chanalloc/errors.hpp"
#include "chanalloc/montecarlo.hpp"

namespace chanalloc {
namespace {

SystemConfig fig8(double snr) {
  return SystemConfig::FromRates(2, 6, 12, {6.0, 6.0}, snr);
}
SystemConfig fig9(double snr) {
  return SystemConfig::FromMultiplexingGains(2, 6, 12, {0.9, 0.9}, snr);
}
SystemConfig fig10(double snr) {
  return SystemConfig::FromRates(3, 6, 6, {1.0, 1.0, 1.0}, snr);
}
SystemConfig fig11(double snr) {
  return SystemConfig::FromMultiplexingGains(3, 6, 6, {0.6, 0.6, 0.6}, snr);
}

FormulaOptions loose() {
  FormulaOptions o;
  o.enforce_guards = false;
  return o;
}

double mc(const SystemConfig& c, const SchemeSpec& s, std::uint64_t trials,
          std::uint64_t seed = 7) {
  const std::vector<SchemeSpec> schemes = {s};
  return estimate_outage(c, schemes, trials, seed)[0][0].p_hat;
}

TEST(Schemes, NamesRoundTrip) {
  for (SchemeKind k : {SchemeKind::kRbCoded, SchemeKind::kChunkCoded,
                       SchemeKind::kInterleaved, SchemeKind::kLocalized,
                       SchemeKind::kTdma}) {
    EXPECT_EQ(parse_scheme(scheme_name(k)), k);
  }
  EXPECT_THROW(parse_scheme("ofdm"), ConfigError);
}

TEST(Schemes, Validate) {
  const SystemConfig c = fig10(10.0);
  EXPECT_NO_THROW((SchemeSpec{SchemeKind::kChunkCoded, {1, 2, 1}}.Validate(c)));
  EXPECT_THROW((SchemeSpec{SchemeKind::kChunkCoded, {3, 1, 1}}.Validate(c)),
               ConfigError);
  EXPECT_THROW((SchemeSpec{SchemeKind::kChunkCoded, {0, 1, 1}}.Validate(c)),
               ConfigError);
  EXPECT_THROW((SchemeSpec{SchemeKind::kChunkCoded, {1, 1}}.Validate(c)),
               ConfigError);
  EXPECT_THROW((SchemeSpec{SchemeKind::kChunkCoded, {}}.Validate(fig8(10.0))),
               ConfigError);
  EXPECT_THROW((SchemeSpec{SchemeKind::kRbCoded, {1, 2, 3}}.Validate(c)),
               ConfigError);
  EXPECT_EQ((SchemeSpec{SchemeKind::kRbCoded, {}}.effective_caps(c)),
            (std::vector<int>{2, 2, 2}));
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(6, 0), 1.0);
  EXPECT_EQ(binomial(6, 3), 20.0);
  EXPECT_EQ(binomial(12, 5), 792.0);
  EXPECT_EQ(binomial(4, 5), 0.0);
}

TEST(Thresholds, ConfigOverloads) {
  const SystemConfig c = fig10(10.0);
  const std::vector<int> unit = {1, 1, 1};
  EXPECT_EQ(k_threshold(c, 0, unit), 4);
  EXPECT_EQ(k_threshold(c, 0, c.subchannel_demand()), 1);
  // Two users: ceil is exact.
  const SystemConfig two = SystemConfig::FromRates(2, 12, 12, {9.0, 3.0}, 10.0);
  const std::vector<int> caps = {9, 3};
  EXPECT_EQ(k_threshold(two, 0, caps), 12 + 1 - 2 * 3);
}

TEST(Thresholds, RThresholdIsLineIntersection) {
  for (const SystemConfig& c :
       {fig11(10.0), SystemConfig::FromRates(3, 7, 7, {4.0, 2.0, 1.0}, 10.0),
        SystemConfig::FromRates(2, 8, 8, {5.0, 3.0}, 10.0)}) {
    const std::vector<int> kt = c.subchannel_demand();
    for (int m = 0; m < c.num_users(); ++m) {
      const int kth = k_threshold(c, m, kt);
      if (kth < 1) continue;
      const double rth = r_threshold(c, m);
      const int L = c.num_bands();
      const int ksum = c.num_subchannels();
      const double low = L * (1.0 - rth / kth);
      const double high =
          (c.num_users() * (L - ksum + 1.0) + kt[m] - 1.0) * (1.0 - rth / kt[m]);
      EXPECT_NEAR(low, high, 1e-9);
    }
  }
  EXPECT_NEAR(r_threshold(fig11(10.0), 0), 0.5, 1e-12);
}

TEST(Dmr, RbValues) {
  const SystemConfig c = fig9(100.0);
  const std::vector<double> r = {0.9, 0.0};
  const DmrPoint d = dmr_rb(c, r);
  EXPECT_NEAR(d.d[0], 4.2, 1e-12);
  EXPECT_NEAR(d.d[1], 6.0, 1e-12);
  const std::vector<double> top = {3.0, 3.0};
  const DmrPoint e = dmr_rb(c, top);
  EXPECT_NEAR(e.d[0], 0.0, 1e-15);
  EXPECT_NEAR(e.r[0] + e.r[1], c.num_bands(), 1e-12);
  const std::vector<double> bad = {3.5, 0.0};
  EXPECT_THROW(dmr_rb(c, bad), DomainError);
}

TEST(Dmr, ChunkEndpoints) {
  const SystemConfig c = fig11(10.0);
  const std::vector<int> unit = {1, 1, 1};
  EXPECT_EQ(dmt_chunk(c, 0, unit, 0.0), 6.0);
  EXPECT_EQ(dmt_chunk(c, 0, unit, 1.0), 0.0);
  const std::vector<int> two = {2, 2, 2};
  EXPECT_EQ(dmt_chunk(c, 0, two, 2.0), 0.0);
  // K_m = 2 > K_m^th = 1: M (L - K^sum + 1) + K_m - 1 = 4.
  EXPECT_EQ(dmt_chunk(c, 0, two, 0.0), 4.0);
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  const std::vector<double> full = {2.0, 2.0, 2.0};
  for (double d : dmr_chunk(c, zero).d) EXPECT_EQ(d, 6.0);
  for (double d : dmr_chunk(c, full).d) EXPECT_EQ(d, 0.0);
}

TEST(Dmr, ChunkContinuousAtThreshold) {
  const SystemConfig c = fig11(10.0);
  const double rth = r_threshold(c, 0);
  const std::vector<double> below = {rth, 0.0, 0.0};
  const std::vector<double> above = {std::nextafter(rth, 3.0), 0.0, 0.0};
  EXPECT_NEAR(dmr_chunk(c, below).d[0], dmr_chunk(c, above).d[0], 1e-9);
  EXPECT_NEAR(dmr_chunk(c, below).d[0], 3.0, 1e-12);
}

TEST(Dmr, Fig4Shape) {
  const SystemConfig rb = SystemConfig::FromMultiplexingGains(2, 6, 12, {0.9, 0.9}, 10.0);
  const SystemConfig chunk = SystemConfig::FromMultiplexingGains(2, 6, 6, {0.9, 0.9}, 10.0);
  EXPECT_EQ(scheme_dmt(SchemeKind::kRbCoded, rb, 0, 0.0), 6.0);
  EXPECT_EQ(scheme_dmt(SchemeKind::kChunkCoded, chunk, 0, 0.0), 6.0);
  for (double r = 1.5; r < 3.0; r += 0.25) {
    EXPECT_LT(scheme_dmt(SchemeKind::kChunkCoded, chunk, 0, r),
              scheme_dmt(SchemeKind::kRbCoded, rb, 0, r));
  }
  EXPECT_EQ(scheme_dmt(SchemeKind::kLocalized, rb, 0, 0.0), 3.0);
  EXPECT_EQ(scheme_dmt(SchemeKind::kTdma, rb, 0, 3.0), 0.0);
}

TEST(ChunkFormula, UnitCapsCollapseToFullOutage) {
  // K_m = 1: only kappa = L contributes to the first sum.
  const SystemConfig c = fig10(10.0);
  const std::vector<int> caps = {1, 1, 1};
  const std::vector<SaddleInputs> terms =
      formula_saddle_terms({SchemeKind::kChunkCoded, caps}, c, 0, 10.0);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].K, 1);
  EXPECT_EQ(terms[0].k, 0);
  const FormulaResult r = chunk_outage_high_snr(c, 0, caps, 10.0);
  EXPECT_EQ(r.branch, "chunk_low_k");
  EXPECT_NEAR(r.p, std::pow(subchannel_outage_prob(1.0, 10.0).p, 6), 1e-15);
}

TEST(ChunkFormula, IndicatorArithmetic) {
  // M = 3: (M-1) | M K^th iff K^th is even.
  for (int kth = 1; kth <= 8; ++kth) EXPECT_EQ((3 * kth) % 2 == 0, kth % 2 == 0);
  // K^th = 4 (even): the optimum equals the two-branch chunk formula.
  const SystemConfig even = SystemConfig::FromRates(3, 6, 6, {4.0, 1.0, 1.0}, 1.0);
  const std::vector<int> kt_even = even.subchannel_demand();
  ASSERT_EQ(k_threshold(even, 0, kt_even), 4);
  for (double snr : {100.0, 1000.0}) {
    const FormulaResult opt = chunk_optimal_outage(even, 0, snr, 0.0);
    const FormulaResult both = chunk_outage_high_snr(even, 0, kt_even, snr);
    EXPECT_EQ(opt.branch, "chunk_opt_kth");
    EXPECT_EQ(both.branch, "chunk_both");
    EXPECT_NEAR(opt.p, both.p, 1e-12 * both.p);
  }
  // K^th = 3 (odd) with K^sum of the others odd: only the first sum.
  const SystemConfig odd = SystemConfig::FromRates(3, 7, 7, {4.0, 2.0, 1.0}, 1.0);
  ASSERT_EQ(k_threshold(odd, 0, odd.subchannel_demand()), 3);
  const std::vector<int> caps = {3, 2, 1};
  for (double snr : {100.0, 1000.0}) {
    const FormulaResult opt = chunk_optimal_outage(odd, 0, snr, 0.0);
    const FormulaResult low = chunk_outage_high_snr(odd, 0, caps, snr);
    EXPECT_EQ(low.branch, "chunk_low_k");
    EXPECT_NEAR(opt.p, low.p, 1e-12 * low.p);
  }
}

TEST(ChunkFormula, Fig11SelectionConsistency) {
  for (double db = 10.0; db <= 30.0; db += 2.0) {
    const double snr = db_to_linear(db);
    const SystemConfig c = fig11(snr);
    const FormulaResult opt = chunk_optimal_outage(c, 0, snr, 0.6, loose());
    for (int k = 1; k <= 2; ++k) {
      const std::vector<int> caps = {k, 2, 2};
      const FormulaResult f = chunk_outage_high_snr(c, 0, caps, snr, loose());
      EXPECT_LE(opt.p, f.p * (1.0 + 1e-12)) << db << " K=" << k;
    }
  }
}

TEST(ChunkFormula, Fig10AgainstMonteCarlo) {
  const SchemeSpec s{SchemeKind::kChunkCoded, {1, 1, 1}};
  for (double db : {5.0, 6.0, 8.0}) {
    const double snr = db_to_linear(db);
    const SystemConfig c = fig10(snr);
    const double f = chunk_outage_high_snr(c, 0, s.caps, snr).p;
    ASSERT_LE(f, 1e-2);
    const auto trials = static_cast<std::uint64_t>(std::clamp(400.0 / f, 1e5, 4e6));
    const double p = mc(c, s, trials);
    EXPECT_LT(f / p, 2.0) << db;
    EXPECT_GT(f / p, 0.5) << db;
  }
}

TEST(ChunkFormula, Fig11AgainstMonteCarlo) {
  const SchemeSpec s{SchemeKind::kChunkCoded, {2, 2, 2}};
  const double snr = db_to_linear(20.0);
  const SystemConfig c = fig11(snr);
  const FormulaResult f = chunk_outage_high_snr(c, 0, s.caps, snr);
  EXPECT_EQ(f.branch, "chunk_high_k");
  const std::vector<SchemeSpec> schemes = {s};
  const auto est = estimate_outage(c, schemes, 10000000, 11);
  // Pool the three symmetric users.
  double outages = 0.0;
  for (const auto& e : est[0]) outages += static_cast<double>(e.outages);
  const double p = outages / (3.0 * 10000000.0);
  EXPECT_LT(f.p / p, 2.0);
  EXPECT_GT(f.p / p, 0.5);
}

TEST(RbFormula, Fig8AgainstMonteCarlo) {
  const SchemeSpec s{SchemeKind::kRbCoded, {}};
  for (double db : {16.0, 17.0, 18.0}) {
    const double snr = db_to_linear(db);
    const SystemConfig c = fig8(snr);
    const FormulaResult f = rb_outage_high_snr(c, 0, snr);
    EXPECT_FALSE(f.guard_violated);
    const double p = mc(c, s, 1000000);
    EXPECT_LT(f.p / p, 2.0) << db;
    EXPECT_GT(f.p / p, 0.5) << db;
  }
}

TEST(RbFormula, LowSnrAtZeroDb) {
  const SystemConfig c = fig9(1.0);
  // q_s ~ 0.79 here, far outside the low-SNR guard.
  EXPECT_THROW(rb_outage_low_snr(c, 0, 1.0), RegimeError);
  const FormulaResult f = rb_outage_low_snr(c, 0, 1.0, loose());
  EXPECT_TRUE(f.guard_violated);
  const double p = mc(c, {SchemeKind::kRbCoded, {}}, 400000);
  EXPECT_LT(f.p / p, 2.0);
  EXPECT_GT(f.p / p, 0.5);
}

TEST(RbFormula, Limits) {
  const SystemConfig c = fig8(1.0);
  // gamma -> 0: p_s -> 1 and the low-SNR formula tends to 1.
  const double tiny = 1e-6;
  EXPECT_NEAR(rb_outage_low_snr(c, 0, tiny).p, 1.0, 1e-9);
  // A user holding most bands: kappa starts low.
  const SystemConfig big = SystemConfig::FromRates(2, 6, 12, {10.0, 2.0}, 1e3);
  const auto terms = formula_saddle_terms({SchemeKind::kRbCoded, {}}, big, 0, 1e3);
  EXPECT_EQ(terms.size(), 5u);  // ceil(10/2) = 5 bands: kappa = 2..6
  EXPECT_EQ(terms.front().k, 4);
}

TEST(RbFormula, TermStructure) {
  const double snr = db_to_linear(40.0);
  const SystemConfig c = fig8(snr);
  const FormulaResult f = rb_outage_high_snr(c, 0, snr);
  const double p = subchannel_outage_prob(c.normalized_rate(), snr).p;
  const auto terms = formula_saddle_terms({SchemeKind::kRbCoded, {}}, c, 0, snr);
  // kappa runs from L - ceil(K~/N_c) + 1 = 4 to L.
  ASSERT_EQ(terms.size(), 3u);
  std::vector<double> parts;
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const int kappa = 4 + static_cast<int>(i);
    EXPECT_EQ(terms[i].K, 3);
    EXPECT_EQ(terms[i].k, 6 - kappa);
    parts.push_back(binomial(6, kappa) * cond_outage_upper(terms[i]));
    sum += parts.back() * std::pow(p, kappa);
  }
  EXPECT_NEAR(f.p, sum, 1e-12 * sum);
  // With the conditional factors held fixed the lowest power of p_s wins.
  const double small = 1e-4 * p;
  double total = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    total += parts[i] * std::pow(small, 4 + static_cast<int>(i));
  }
  EXPECT_GT(parts[0] * std::pow(small, 4) / total, 0.95);
}

TEST(RbFormula, GuardsAndOptions) {
  const SystemConfig c = fig8(1.0);
  EXPECT_THROW(rb_outage_high_snr(c, 0, 1.0), RegimeError);
  EXPECT_TRUE(rb_outage_high_snr(c, 0, 1.0, loose()).guard_violated);
  const double snr = db_to_linear(20.0);
  FormulaOptions qs;
  qs.include_qs_factor = true;
  EXPECT_LT(rb_outage_high_snr(c, 0, snr, qs).p, rb_outage_high_snr(c, 0, snr).p);
  FormulaOptions literal;
  literal.band_granularity = false;
  EXPECT_GT(rb_outage_high_snr(c, 0, snr, literal).p, rb_outage_high_snr(c, 0, snr).p);
}

TEST(FixedAllocation, Counts) {
  const SystemConfig c = fig8(10.0);
  EXPECT_EQ(fixed_allocation_count(SchemeKind::kInterleaved, c, 0), 6.0);
  EXPECT_EQ(fixed_allocation_count(SchemeKind::kLocalized, c, 0), 3.0);
  EXPECT_EQ(fixed_allocation_count(SchemeKind::kTdma, c, 0), 6.0);
  EXPECT_THROW(fixed_allocation_count(SchemeKind::kRbCoded, c, 0), ConfigError);
}

TEST(Oer, AsymptoteMatchesDmt) {
  const SystemConfig c = fig9(1.0);
  std::vector<double> grid;
  for (double db = 20.0; db <= 80.0; db += 10.0) grid.push_back(db_to_linear(db));
  const OutageCurve curve = oer_curve(c, {SchemeKind::kRbCoded, {}}, 0, grid);
  const double d = scheme_dmt(SchemeKind::kRbCoded, c, 0, 0.9);
  EXPECT_NEAR(d, 4.2, 1e-12);
  EXPECT_LT(std::abs(curve.exponent.back() - d) / d, 0.15);
  for (CurveSource s : curve.source) EXPECT_EQ(s, CurveSource::kHighSnrFormula);
}

TEST(Oer, FlatRateSaturatesAtL) {
  const SystemConfig c = fig8(1.0);
  std::vector<double> grid;
  for (double db = 14.0; db <= 60.0; db += 2.0) grid.push_back(db_to_linear(db));
  const OutageCurve curve = oer_curve(c, {SchemeKind::kRbCoded, {}}, 0, grid);
  EXPECT_LT(std::abs(curve.exponent.back() - 6.0) / 6.0, 0.05);
  EXPECT_LT(curve.exponent[1], curve.exponent.back());
}

TEST(Oer, FallsBackToMonteCarlo) {
  const SystemConfig c = fig8(1.0);
  const std::vector<double> grid = {db_to_linear(8.0), db_to_linear(9.0),
                                    db_to_linear(20.0)};
  int calls = 0;
  const OutageCurve curve = oer_curve(
      c, {SchemeKind::kRbCoded, {}}, 0, grid, [&](double) -> std::optional<double> {
        ++calls;
        return 0.5;
      });
  EXPECT_GE(calls, 1);
  EXPECT_EQ(curve.source.back(), CurveSource::kHighSnrFormula);
  EXPECT_EQ(curve_source_name(curve.source.front()), "monte_carlo");
}

TEST(Oer, OnePointGridIsAnError) {
  const std::vector<double> grid = {100.0};
  EXPECT_THROW(oer_curve(fig8(1.0), {SchemeKind::kRbCoded, {}}, 0, grid), DomainError);
}

TEST(Slope, PowerLaw) {
  const std::vector<double> snr = {10.0, 100.0, 1000.0};
  const std::vector<double> p = {1e-2, 1e-5, 1e-8};
  EXPECT_NEAR(fit_loglog_slope(snr, p), 3.0, 1e-12);
  EXPECT_THROW(fit_loglog_slope(std::span(snr).first(1), std::span(p).first(1)),
               DomainError);
}

}  // namespace
}  // namespace chanalloc
