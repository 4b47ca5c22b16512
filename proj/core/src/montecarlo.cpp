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

#include "chanalloc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "chanalloc/errors.hpp"
#include "chanalloc/graph.hpp"
#include "chanalloc/pver2hk.hpp"

namespace chanalloc {
namespace {

constexpr double kZ95 = 1.959964;
constexpr double kCensorFloor = 1e-6;
constexpr std::uint64_t kAllocStreamBit = 1ull << 40;
constexpr std::uint64_t kConditionalStream = 1ull << 41;

// Runs body(begin, end, worker) over contiguous blocks of [0, n).
template <typename Body>
void parallel_blocks(std::uint64_t n, int workers, Body body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    body(0, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t b = n * w / workers;
    const std::uint64_t e = n * (w + 1) / workers;
    threads.emplace_back([&, b, e, w] {
      try {
        body(b, e, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<int> fixed_order(SchemeKind kind, const SystemConfig& c) {
  const int L = c.num_bands();
  const int nc = c.coherence_size();
  std::vector<int> order;
  order.reserve(c.num_subchannels());
  if (kind == SchemeKind::kInterleaved) {
    for (int j = 0; j < nc; ++j) {
      for (int l = 0; l < L; ++l) order.push_back(l * nc + j);
    }
  } else {
    for (int n = 0; n < c.num_subchannels(); ++n) order.push_back(n);
  }
  return order;
}

void score(const SystemConfig& c, const ChannelRealization& real,
           const Allocation& alloc, TrialOutcome* out) {
  const int nc = c.coherence_size();
  for (int m = 0; m < c.num_users(); ++m) {
    double sum = 0.0;
    for (int n : alloc.sets[m]) {
      sum += mutual_information(real, m, c.band_of(n), c.snr(), nc);
    }
    out->outage[m] = sum < c.target_rate(m) ? 1 : 0;
  }
}

FMatching match(const BipartiteGraph& g, const FProfile& f, Rng& rng,
                const TrialOptions& options) {
  if (options.use_pver2hk) {
    Pver2hkOptions p;
    p.eta = options.eta;
    return pver2hk(g, f, p, rng);
  }
  return max_f_matching(g, f, rng);
}

std::vector<double> chunk_thresholds(const SystemConfig& c,
                                     std::span<const int> caps) {
  std::vector<double> t(c.num_users());
  for (int m = 0; m < c.num_users(); ++m) t[m] = c.target_rate(m) / caps[m];
  return t;
}

TrialOutcome run_impl(const SystemConfig& c, const SchemeSpec& scheme,
                      const ChannelRealization& real, const CsiMatrix* csi,
                      Rng& rng, const TrialOptions& options) {
  const int M = c.num_users();
  TrialOutcome out;
  out.scheme = scheme.kind;
  out.outage.assign(M, 0);
  out.matched.assign(M, 0);
  switch (scheme.kind) {
    case SchemeKind::kRbCoded:
    case SchemeKind::kChunkCoded: {
      const bool chunk = scheme.kind == SchemeKind::kChunkCoded;
      const std::vector<int> caps = scheme.effective_caps(c);
      CsiMatrix q;
      if (csi != nullptr) {
        q = *csi;
      } else if (chunk) {
        q = quantize_csi(real, c.snr(), chunk_thresholds(c, caps));
      } else {
        q = quantize_csi(real, c);
      }
      const BipartiteGraph g = build_rbg(q, c.coherence_size());
      const FMatching fm = match(g, FProfile{caps}, rng, options);
      const Allocation alloc = chunk ? complete_partial_allocation(fm, caps, rng)
                                     : complete_allocation(fm, caps, rng);
      out.matched = alloc.matched;
      score(c, real, alloc, &out);
      break;
    }
    case SchemeKind::kInterleaved:
    case SchemeKind::kLocalized: {
      const std::vector<int> order = fixed_order(scheme.kind, c);
      const std::vector<int> demand = c.subchannel_demand();
      Allocation alloc;
      alloc.sets.resize(M);
      alloc.matched.assign(M, 0);
      std::size_t next = 0;
      for (int m = 0; m < M; ++m) {
        for (int j = 0; j < demand[m]; ++j) alloc.sets[m].push_back(order[next++]);
      }
      score(c, real, alloc, &out);
      break;
    }
    case SchemeKind::kTdma: {
      const std::vector<int> demand = c.subchannel_demand();
      for (int m = 0; m < M; ++m) {
        double sum = 0.0;
        for (int l = 0; l < c.num_bands(); ++l) {
          sum += std::log1p(real.power(m, l) * c.snr());
        }
        const double share = static_cast<double>(demand[m]) / c.num_subchannels();
        out.outage[m] = share * sum < c.target_rate(m) ? 1 : 0;
      }
      break;
    }
  }
  return out;
}

}  // namespace

TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       const ChannelRealization& real, Rng& alloc_rng,
                       const TrialOptions& options) {
  return run_impl(config, scheme, real, nullptr, alloc_rng, options);
}

TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       const ChannelRealization& real, const CsiMatrix& csi,
                       Rng& alloc_rng, const TrialOptions& options) {
  if (csi.num_users() != config.num_users() ||
      csi.num_bands() != config.num_bands()) {
    throw ConfigError("CSI shape does not match the config");
  }
  return run_impl(config, scheme, real, &csi, alloc_rng, options);
}

TrialOutcome run_trial(const SystemConfig& config, const SchemeSpec& scheme,
                       Rng& rng, const TrialOptions& options) {
  const ChannelRealization real = sample_channel(config, rng);
  return run_impl(config, scheme, real, nullptr, rng, options);
}

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = kZ95 * kZ95;
  const double den = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / den;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double OutageEstimate::std_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / trials);
}

bool OutageEstimate::censored() const { return p_hat < kCensorFloor; }

double ConditionalEstimate::std_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / trials);
}

std::vector<std::vector<OutageEstimate>> estimate_outage(
    const SystemConfig& config, std::span<const SchemeSpec> schemes,
    std::uint64_t trials, std::uint64_t seed, const EstimateOptions& options) {
  if (trials == 0) throw ConfigError("trial count must be positive");
  config.Validate();
  for (const SchemeSpec& s : schemes) s.Validate(config);
  const int M = config.num_users();
  const int S = static_cast<int>(schemes.size());
  const int W = std::max(1, options.workers);
  // counts[w][s * M + m]
  std::vector<std::vector<std::uint64_t>> counts(
      W, std::vector<std::uint64_t>(S * M, 0));
  const std::uint64_t point = options.point_index << 16;
  parallel_blocks(trials, W, [&](std::uint64_t b, std::uint64_t e, int w) {
    std::vector<std::uint64_t>& local = counts[w];
    for (std::uint64_t t = b; t < e; ++t) {
      ChannelRealization shared;
      if (options.paired) {
        Rng ch = Rng::for_stream(seed, point, t);
        shared = sample_channel(config, ch);
      }
      for (int s = 0; s < S; ++s) {
        const std::uint64_t key = s + options.scheme_offset;
        ChannelRealization own;
        if (!options.paired) {
          Rng ch = Rng::for_stream(seed, point | (key + 1), t);
          own = sample_channel(config, ch);
        }
        Rng alloc = Rng::for_stream(seed, kAllocStreamBit | point | key, t);
        const TrialOutcome o =
            run_impl(config, schemes[s], options.paired ? shared : own,
                     nullptr, alloc, options.trial);
        for (int m = 0; m < M; ++m) local[s * M + m] += o.outage[m];
      }
    }
  });
  std::vector<std::vector<OutageEstimate>> result(
      S, std::vector<OutageEstimate>(M));
  for (int s = 0; s < S; ++s) {
    for (int m = 0; m < M; ++m) {
      OutageEstimate& est = result[s][m];
      est.scheme = schemes[s].kind;
      est.user = m;
      est.snr = config.snr();
      est.trials = trials;
      for (int w = 0; w < W; ++w) est.outages += counts[w][s * M + m];
      est.p_hat = static_cast<double>(est.outages) / trials;
      std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.outages, trials);
    }
  }
  return result;
}

namespace {

ConditionalEstimate run_conditional(int K, int k, bool conditioned, double snr,
                                    double rc, std::uint64_t trials,
                                    std::uint64_t seed, int workers) {
  if (K < 1 || k < 0 || k > K) throw DomainError("need 0 <= k <= K, K >= 1");
  if (!(snr > 0.0) || !(rc >= 0.0)) throw DomainError("need snr > 0, rc >= 0");
  if (trials == 0) throw ConfigError("trial count must be positive");
  const double tau = std::expm1(rc) / snr;
  const double ps = -std::expm1(-tau);
  const double target = K * rc;
  const std::uint64_t stream =
      kConditionalStream | (conditioned ? (static_cast<std::uint64_t>(K) << 16 |
                                           static_cast<std::uint64_t>(k) << 1)
                                        : 1u);
  const int W = std::max(1, workers);
  std::vector<std::uint64_t> counts(W, 0);
  parallel_blocks(trials, W, [&](std::uint64_t b, std::uint64_t e, int w) {
    std::uint64_t local = 0;
    for (std::uint64_t t = b; t < e; ++t) {
      Rng rng = Rng::for_stream(seed, stream, t);
      double sum = 0.0;
      for (int i = 0; i < K; ++i) {
        double x;
        if (!conditioned) {
          x = rng.exponential();
        } else if (i < k) {
          x = tau + rng.exponential();
        } else {
          x = -std::log1p(-rng.uniform() * ps);
        }
        sum += std::log1p(x * snr);
      }
      if (sum < target) ++local;
    }
    counts[w] = local;
  });
  ConditionalEstimate est;
  est.K = K;
  est.k = conditioned ? k : -1;
  est.snr = snr;
  est.rc = rc;
  est.trials = trials;
  est.outages = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  est.p_hat = static_cast<double>(est.outages) / trials;
  std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.outages, trials);
  return est;
}

}  // namespace

ConditionalEstimate conditional_experiment(int K, int k, double snr, double rc,
                                           std::uint64_t trials,
                                           std::uint64_t seed, int workers) {
  return run_conditional(K, k, true, snr, rc, trials, seed, workers);
}

ConditionalEstimate unconditional_experiment(int K, double snr, double rc,
                                             std::uint64_t trials,
                                             std::uint64_t seed, int workers) {
  return run_conditional(K, 0, false, snr, rc, trials, seed, workers);
}

MixtureEstimate binomial_mixture(std::span<const ConditionalEstimate> by_k,
                                 double p_s) {
  if (by_k.empty()) throw DomainError("mixture needs at least one estimate");
  const int K = by_k.front().K;
  if (static_cast<int>(by_k.size()) != K + 1) {
    throw DomainError("mixture needs one estimate per k = 0..K");
  }
  MixtureEstimate mix;
  double var = 0.0;
  for (const ConditionalEstimate& e : by_k) {
    if (e.K != K) throw DomainError("mixture estimates disagree on K");
    const double w = binomial(K, e.k) * std::pow(1.0 - p_s, e.k) *
                     std::pow(p_s, K - e.k);
    mix.p += w * e.p_hat;
    var += w * w * e.p_hat * (1.0 - e.p_hat) / e.trials;
  }
  mix.std_error = std::sqrt(var);
  return mix;
}

namespace {

double asymptote_dmt(const SystemConfig& c, const SchemeSpec& s, int m) {
  const double r = c.rate_mode() == RateMode::kFixedRate ? 0.0 : c.rate_spec()[m];
  if (s.kind == SchemeKind::kChunkCoded) {
    return dmt_chunk(c, m, s.effective_caps(c), r);
  }
  return scheme_dmt(s.kind, c, m, r);
}

std::optional<FormulaResult> overlay(const SystemConfig& c, const SchemeSpec& s,
                                     int m, bool high,
                                     const FormulaOptions& strict) {
  try {
    switch (s.kind) {
      case SchemeKind::kRbCoded:
        return high ? rb_outage_high_snr(c, m, c.snr(), strict)
                    : rb_outage_low_snr(c, m, c.snr(), strict);
      case SchemeKind::kChunkCoded: {
        const std::vector<int> caps = s.effective_caps(c);
        return high ? chunk_outage_high_snr(c, m, caps, c.snr(), strict)
                    : chunk_outage_low_snr(c, m, caps, c.snr(), strict);
      }
      default:
        if (!high) return std::nullopt;
        return fixed_allocation_outage(s.kind, c, m, c.snr());
    }
  } catch (const RegimeError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<SweepRow> sweep(const SystemConfig& config,
                            std::span<const SchemeSpec> schemes,
                            std::span<const double> gamma_db,
                            std::uint64_t trials, std::uint64_t seed,
                            const SweepOptions& options) {
  if (gamma_db.empty()) throw ConfigError("SNR grid is empty");
  std::vector<int> users = options.users;
  if (users.empty()) {
    users.resize(config.num_users());
    std::iota(users.begin(), users.end(), 0);
  }
  const int S = static_cast<int>(schemes.size());
  std::vector<SweepRow> rows;
  // mc[s][u][i]
  std::vector<std::vector<std::vector<OutageEstimate>>> mc(
      S, std::vector<std::vector<OutageEstimate>>(users.size()));
  for (std::size_t i = 0; i < gamma_db.size(); ++i) {
    const SystemConfig c = config.WithSnr(db_to_linear(gamma_db[i]));
    EstimateOptions eo = options.estimate;
    eo.point_index = i;
    const auto est = estimate_outage(c, schemes, trials, seed, eo);
    for (int s = 0; s < S; ++s) {
      for (std::size_t u = 0; u < users.size(); ++u) {
        const OutageEstimate& e = est[s][users[u]];
        mc[s][u].push_back(e);
        rows.push_back({schemes[s].kind, users[u], gamma_db[i], e.p_hat,
                        e.ci_lo, e.ci_hi,
                        e.censored() ? "monte_carlo_censored" : "monte_carlo",
                        false});
      }
    }
    if (!options.formulas) continue;
    for (int s = 0; s < S; ++s) {
      for (int m : users) {
        for (bool high : {true, false}) {
          if (auto f = overlay(c, schemes[s], m, high, options.formula)) {
            const double p = std::min(f->p, 1.0);
            const bool fixed = schemes[s].kind != SchemeKind::kRbCoded &&
                               schemes[s].kind != SchemeKind::kChunkCoded;
            rows.push_back({schemes[s].kind, m, gamma_db[i], p, p, p,
                            fixed ? "formula_bound"
                                  : (high ? "formula_high_snr"
                                          : "formula_low_snr"),
                            f->guard_violated});
          }
        }
      }
    }
  }
  if (options.asymptotes) {
    for (int s = 0; s < S; ++s) {
      for (std::size_t u = 0; u < users.size(); ++u) {
        const auto& curve = mc[s][u];
        int anchor = -1;
        for (int i = static_cast<int>(curve.size()) - 1; i >= 0; --i) {
          if (!curve[i].censored()) {
            anchor = i;
            break;
          }
        }
        if (anchor < 0) continue;
        const SystemConfig c = config.WithSnr(curve[anchor].snr);
        const double d = asymptote_dmt(c, schemes[s], users[u]);
        for (std::size_t i = 0; i < curve.size(); ++i) {
          const double p = std::min(
              1.0, curve[anchor].p_hat *
                       std::pow(curve[i].snr / curve[anchor].snr, -d));
          rows.push_back({schemes[s].kind, users[u], gamma_db[i], p, p, p,
                          "asymptote", false});
        }
      }
    }
  }
  return rows;
}

std::optional<double> crossing_db(std::span<const double> gamma_db,
                                  std::span<const double> p, double target) {
  if (gamma_db.size() != p.size()) throw DomainError("grid and curve sizes differ");
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i + 1] > 0.0)) continue;
    const bool brackets = (p[i] >= target && p[i + 1] <= target) ||
                          (p[i] <= target && p[i + 1] >= target);
    if (!brackets || p[i] == p[i + 1]) continue;
    const double t = (std::log(target) - std::log(p[i])) /
                     (std::log(p[i + 1]) - std::log(p[i]));
    return gamma_db[i] + t * (gamma_db[i + 1] - gamma_db[i]);
  }
  return std::nullopt;
}

}  // namespace chanalloc
