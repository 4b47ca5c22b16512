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

#include "chanalloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chanalloc/errors.hpp"
#include "chanalloc/graph.hpp"
#include "chanalloc/numerics.hpp"

namespace chanalloc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cop(int K, int k, double snr, double rc) {
  return cond_outage_upper(SaddleInputs{K, k, snr, rc});
}

double factorial(int n) { return std::tgamma(n + 1.0); }

void guard(FormulaResult* r, bool ok, const FormulaOptions& options,
           const char* what) {
  if (ok) return;
  if (options.enforce_guards) throw RegimeError(what);
  r->guard_violated = true;
}

void require_chunk(const SystemConfig& c) {
  if (c.num_subchannels() != c.num_bands()) {
    throw ConfigError("chunk scheme requires N = L");
  }
}

// Threshold of user i when it holds caps[i] chunks.
double chunk_rc(const SystemConfig& c, int i, int cap) {
  return c.target_rate(i) / cap;
}

// sum over kappa of C(L, kappa) cop(K, L - kappa) p^kappa, kappa >= L-K+1.
double chunk_first_sum(const SystemConfig& c, int m, int K, double snr) {
  const int L = c.num_bands();
  const double rc = chunk_rc(c, m, K);
  const double p = subchannel_outage_prob(rc, snr).p;
  double sum = 0.0;
  for (int kappa = std::max(L - K + 1, 0); kappa <= L; ++kappa) {
    sum += binomial(L, kappa) * cop(K, L - kappa, snr, rc) * std::pow(p, kappa);
  }
  return sum;
}

// L! cop(K_m, K_m - 1) prod_i p_i^(L - K^sum + 1) / (M (L-K^sum+1)! (K^sum-1)!).
double chunk_conflict_term(const SystemConfig& c, int m,
                           std::span<const int> caps, double snr) {
  const int L = c.num_bands();
  const int M = c.num_users();
  const int ksum = std::accumulate(caps.begin(), caps.end(), 0);
  const int spare = L - ksum + 1;
  double prod = 1.0;
  for (int i = 0; i < M; ++i) {
    prod *= std::pow(subchannel_outage_prob(chunk_rc(c, i, caps[i]), snr).p,
                     spare);
  }
  const int K = caps[m];
  const double rc = chunk_rc(c, m, K);
  return factorial(L) * cop(K, K - 1, snr, rc) * prod /
         (M * factorial(spare) * factorial(ksum - 1));
}

bool chunk_guard_ok(const SystemConfig& c, std::span<const int> caps,
                    double snr) {
  for (int i = 0; i < c.num_users(); ++i) {
    if (!(subchannel_outage_prob(chunk_rc(c, i, caps[i]), snr).p < 0.5)) {
      return false;
    }
  }
  return true;
}

int others_sum(std::span<const int> caps, int m) {
  return std::accumulate(caps.begin(), caps.end(), 0) - caps[m];
}

}  // namespace

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kRbCoded: return "rb_coded";
    case SchemeKind::kChunkCoded: return "chunk_coded";
    case SchemeKind::kInterleaved: return "interleaved";
    case SchemeKind::kLocalized: return "localized";
    case SchemeKind::kTdma: return "tdma";
  }
  return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
  for (SchemeKind k : {SchemeKind::kRbCoded, SchemeKind::kChunkCoded,
                       SchemeKind::kInterleaved, SchemeKind::kLocalized,
                       SchemeKind::kTdma}) {
    if (scheme_name(k) == name) return k;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::vector<int> SchemeSpec::effective_caps(const SystemConfig& config) const {
  if (!caps.empty()) return caps;
  return config.subchannel_demand();
}

void SchemeSpec::Validate(const SystemConfig& config) const {
  const std::vector<int> demand = config.subchannel_demand();
  if (!caps.empty() && static_cast<int>(caps.size()) != config.num_users()) {
    throw ConfigError("scheme caps must list one value per user");
  }
  if (kind == SchemeKind::kChunkCoded) {
    require_chunk(config);
    if (config.num_users() > config.num_bands()) {
      throw ConfigError("chunk scheme requires M <= L");
    }
    for (int m = 0; m < static_cast<int>(caps.size()); ++m) {
      if (caps[m] < 1 || caps[m] > demand[m]) {
        throw ConfigError("chunk caps must lie in [1, K~_m]");
      }
    }
  } else if (kind == SchemeKind::kRbCoded && !caps.empty() && caps != demand) {
    throw ConfigError("RB scheme caps must equal the subchannel demand");
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

FormulaResult rb_outage_high_snr(const SystemConfig& config, int m, double snr,
                                 const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  const int L = c.num_bands();
  const int Nc = c.coherence_size();
  const int Kt = c.subchannel_demand()[m];
  const double rc = c.normalized_rate();
  const OutageProbability o = subchannel_outage_prob(rc, snr);
  FormulaResult r;
  r.branch = "rb_high";
  guard(&r, o.p < 0.5, options, "high-SNR formula needs p_s < 0.5");
  const int Kb = (Kt + Nc - 1) / Nc;
  const int kappa_min = L - Kb + 1;
  const int ML = c.num_users() * L;
  for (int kappa = std::max(kappa_min, 0); kappa <= L; ++kappa) {
    double cond;
    if (options.band_granularity) {
      if (Kt % Nc != 0) r.rounded = true;
      cond = cop(Kb, L - kappa, snr, rc);
    } else {
      const int num = (L - kappa) * Kt;
      if (num % L != 0) r.rounded = true;
      cond = cop(Kt, num / L, snr, rc);
    }
    double term = binomial(L, kappa) * cond * std::pow(o.p, kappa);
    if (options.include_qs_factor) term *= std::pow(o.q, ML - kappa);
    r.p += term;
  }
  return r;
}

FormulaResult rb_outage_low_snr(const SystemConfig& config, int m, double snr,
                                const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  const int L = c.num_bands();
  const int Kt = c.subchannel_demand()[m];
  const double rc = c.normalized_rate();
  const OutageProbability o = subchannel_outage_prob(rc, snr);
  FormulaResult r;
  r.branch = "rb_low";
  guard(&r, o.q < 0.2, options, "low-SNR formula needs q_s < 0.2");
  const int Nc = c.coherence_size();
  const int K = options.band_granularity ? (Kt + Nc - 1) / Nc : Kt;
  if (options.band_granularity && Kt % Nc != 0) r.rounded = true;
  r.p = std::pow(o.p, L);
  if (o.q > 0.0) {
    r.p += L * cop(K, std::min(1, K), snr, rc) * std::pow(o.p, L - 1) * o.q;
  }
  return r;
}

int k_threshold(const SystemConfig& config, int m, std::span<const int> caps) {
  return ::chanalloc::k_threshold(config.num_users(), config.num_subchannels(),
                     others_sum(caps, m));
}

FormulaResult chunk_outage_high_snr(const SystemConfig& config, int m,
                                    std::span<const int> caps, double snr,
                                    const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  require_chunk(c);
  const int M = c.num_users();
  const int K = caps[m];
  const int kth = k_threshold(c, m, caps);
  FormulaResult r;
  r.k_sum = std::accumulate(caps.begin(), caps.end(), 0);
  guard(&r, chunk_guard_ok(c, caps, snr), options,
        "high-SNR formula needs p_s < 0.5");
  const bool divisible = (M * others_sum(caps, m)) % (M - 1) == 0;
  const bool first = K <= kth;
  const bool second = K > kth || (K == kth && divisible);
  if (first) r.p += chunk_first_sum(c, m, K, snr);
  if (second) r.p += chunk_conflict_term(c, m, caps, snr);
  r.branch = first && second ? "chunk_both" : (first ? "chunk_low_k" : "chunk_high_k");
  return r;
}

FormulaResult chunk_outage_low_snr(const SystemConfig& config, int m,
                                   std::span<const int> caps, double snr,
                                   const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  require_chunk(c);
  const int L = c.num_bands();
  const int K = caps[m];
  const double rc = chunk_rc(c, m, K);
  const OutageProbability o = subchannel_outage_prob(rc, snr);
  FormulaResult r;
  r.branch = "chunk_low_snr";
  guard(&r, o.q < 0.2, options, "low-SNR formula needs q_s < 0.2");
  r.p = std::pow(o.p, L);
  if (o.q > 0.0) {
    r.p += L * cop(K, std::min(1, K), snr, rc) * std::pow(o.p, L - 1) * o.q;
  }
  return r;
}

double r_threshold(const SystemConfig& config, int m) {
  require_chunk(config);
  const std::vector<int> kt = config.subchannel_demand();
  const int M = config.num_users();
  const int L = config.num_bands();
  const int kth = k_threshold(config, m, kt);
  const int ksum = std::accumulate(kt.begin(), kt.end(), 0);
  const double K = kt[m];
  // The K^th line covers the whole range when K^th >= K~_m.
  if (kth >= kt[m]) return K;
  const double a = M * (L - ksum + 1.0);
  const double num = kth * K * (L - K + 1.0 - a);
  const double den = K * (L - kth) + kth * (1.0 - a);
  return num / den;
}

FormulaResult chunk_optimal_outage(const SystemConfig& config, int m,
                                   double snr, double r,
                                   const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  require_chunk(c);
  std::vector<int> caps = c.subchannel_demand();
  const int kth = k_threshold(c, m, caps);
  const bool low = kth >= 1 && (kth >= caps[m] || r <= r_threshold(c, m));
  FormulaResult out;
  if (low) {
    caps[m] = std::min(kth, caps[m]);
    out.k_sum = std::accumulate(caps.begin(), caps.end(), 0);
    guard(&out, chunk_guard_ok(c, caps, snr), options,
          "high-SNR formula needs p_s < 0.5");
    out.p = chunk_first_sum(c, m, caps[m], snr);
    if ((c.num_users() * kth) % (c.num_users() - 1) == 0) {
      out.p += chunk_conflict_term(c, m, caps, snr);
    }
    out.branch = "chunk_opt_kth";
  } else {
    out.k_sum = std::accumulate(caps.begin(), caps.end(), 0);
    guard(&out, chunk_guard_ok(c, caps, snr), options,
          "high-SNR formula needs p_s < 0.5");
    out.p = chunk_conflict_term(c, m, caps, snr);
    out.branch = "chunk_opt_ktilde";
  }
  return out;
}

std::vector<SaddleInputs> formula_saddle_terms(const SchemeSpec& scheme,
                                               const SystemConfig& config,
                                               int m, double snr,
                                               const FormulaOptions& options) {
  const SystemConfig c = config.WithSnr(snr);
  const int L = c.num_bands();
  std::vector<SaddleInputs> terms;
  if (scheme.kind == SchemeKind::kRbCoded) {
    const int Nc = c.coherence_size();
    const int Kt = c.subchannel_demand()[m];
    const int Kb = (Kt + Nc - 1) / Nc;
    for (int kappa = std::max(L - Kb + 1, 0); kappa <= L; ++kappa) {
      if (options.band_granularity) {
        terms.push_back({Kb, L - kappa, snr, c.normalized_rate()});
      } else {
        terms.push_back({Kt, (L - kappa) * Kt / L, snr, c.normalized_rate()});
      }
    }
  } else if (scheme.kind == SchemeKind::kChunkCoded) {
    require_chunk(c);
    const std::vector<int> caps = scheme.effective_caps(c);
    const int K = caps[m];
    const double rc = chunk_rc(c, m, K);
    for (int kappa = std::max(L - K + 1, 0); kappa <= L; ++kappa) {
      terms.push_back({K, L - kappa, snr, rc});
    }
    terms.push_back({K, K - 1, snr, rc});
  }
  return terms;
}

double fixed_allocation_count(SchemeKind kind, const SystemConfig& config,
                              int m) {
  const double kt = config.subchannel_demand()[m];
  switch (kind) {
    case SchemeKind::kInterleaved: return kt;
    case SchemeKind::kLocalized: return kt / config.coherence_size();
    case SchemeKind::kTdma: return config.num_bands();
    default: break;
  }
  throw ConfigError("scheme is not a fixed allocation");
}

FormulaResult fixed_allocation_outage(SchemeKind kind,
                                      const SystemConfig& config, int m,
                                      double snr) {
  const SystemConfig c = config.WithSnr(snr);
  FormulaResult r;
  r.branch = std::string(scheme_name(kind)) + "_bound";
  r.p = interleaved_upper(fixed_allocation_count(kind, c, m), snr,
                          c.normalized_rate());
  return r;
}

DmrPoint dmr_rb(const SystemConfig& config, std::span<const double> r) {
  if (static_cast<int>(r.size()) != config.num_users()) {
    throw DomainError("one multiplexing gain per user expected");
  }
  const std::vector<int> kt = config.subchannel_demand();
  const double L = config.num_bands();
  const double nc = config.coherence_size();
  DmrPoint out;
  out.r.assign(r.begin(), r.end());
  for (int m = 0; m < config.num_users(); ++m) {
    if (!(r[m] >= 0.0 && r[m] <= kt[m] / nc)) {
      throw DomainError("multiplexing gain outside [0, K~_m / N_c]");
    }
    out.d.push_back(L * (1.0 - nc * r[m] / kt[m]));
  }
  return out;
}

double dmt_chunk(const SystemConfig& config, int m, std::span<const int> caps,
                 double r) {
  require_chunk(config);
  const int K = caps[m];
  if (!(r >= 0.0 && r <= K)) throw DomainError("multiplexing gain outside [0, K_m]");
  const int L = config.num_bands();
  const int M = config.num_users();
  const int kth = k_threshold(config, m, caps);
  if (K <= kth) return L * (1.0 - r / K);
  const int ksum = std::accumulate(caps.begin(), caps.end(), 0);
  return (M * (L - ksum + 1.0) + K - 1.0) * (1.0 - r / K);
}

DmrPoint dmr_chunk(const SystemConfig& config, std::span<const double> r) {
  require_chunk(config);
  const std::vector<int> kt = config.subchannel_demand();
  const int L = config.num_bands();
  const int M = config.num_users();
  const int ksum = std::accumulate(kt.begin(), kt.end(), 0);
  DmrPoint out;
  out.r.assign(r.begin(), r.end());
  for (int m = 0; m < M; ++m) {
    if (!(r[m] >= 0.0 && r[m] <= kt[m])) {
      throw DomainError("multiplexing gain outside [0, K~_m]");
    }
    const int kth = k_threshold(config, m, kt);
    if (kth >= 1 && r[m] <= r_threshold(config, m)) {
      out.d.push_back(L * (1.0 - r[m] / std::min(kth, kt[m])));
    } else {
      out.d.push_back((M * (L - ksum + 1.0) + kt[m] - 1.0) *
                      (1.0 - r[m] / kt[m]));
    }
  }
  return out;
}

double scheme_dmt(SchemeKind kind, const SystemConfig& config, int m,
                  double r) {
  const double kt = config.subchannel_demand()[m];
  const double L = config.num_bands();
  const double nc = config.coherence_size();
  double d = 0.0;
  switch (kind) {
    case SchemeKind::kRbCoded:
    case SchemeKind::kTdma:
      d = L * (1.0 - nc * r / kt);
      break;
    case SchemeKind::kInterleaved:
      d = std::min(kt, L) * (1.0 - nc * r / kt);
      break;
    case SchemeKind::kLocalized:
      d = kt / nc - r;
      break;
    case SchemeKind::kChunkCoded: {
      std::vector<double> rv(config.num_users(), 0.0);
      rv[m] = r;
      d = dmr_chunk(config, rv).d[m];
      break;
    }
  }
  return std::max(d, 0.0);
}

std::string_view curve_source_name(CurveSource source) {
  switch (source) {
    case CurveSource::kHighSnrFormula: return "formula_high_snr";
    case CurveSource::kLowSnrFormula: return "formula_low_snr";
    case CurveSource::kMonteCarlo: return "monte_carlo";
    case CurveSource::kNone: return "none";
  }
  return "none";
}

OutageCurve oer_curve(const SystemConfig& config, const SchemeSpec& scheme,
                      int m, std::span<const double> snr_grid,
                      const OutageProvider& monte_carlo) {
  if (snr_grid.size() < 2) throw DomainError("outage exponent needs >= 2 grid points");
  scheme.Validate(config);
  const std::vector<int> caps = scheme.effective_caps(config);
  OutageCurve curve;
  curve.scheme = scheme.kind;
  curve.user = m;
  FormulaOptions strict;
  for (double snr : snr_grid) {
    double p = kNaN;
    CurveSource src = CurveSource::kNone;
    auto attempt = [&](auto&& fn, CurveSource s) {
      if (src != CurveSource::kNone) return;
      try {
        p = fn().p;
        src = s;
      } catch (const RegimeError&) {
      }
    };
    switch (scheme.kind) {
      case SchemeKind::kRbCoded:
        attempt([&] { return rb_outage_high_snr(config, m, snr, strict); },
                CurveSource::kHighSnrFormula);
        attempt([&] { return rb_outage_low_snr(config, m, snr, strict); },
                CurveSource::kLowSnrFormula);
        break;
      case SchemeKind::kChunkCoded:
        attempt([&] { return chunk_outage_high_snr(config, m, caps, snr, strict); },
                CurveSource::kHighSnrFormula);
        attempt([&] { return chunk_outage_low_snr(config, m, caps, snr, strict); },
                CurveSource::kLowSnrFormula);
        break;
      default:
        attempt([&] { return fixed_allocation_outage(scheme.kind, config, m, snr); },
                CurveSource::kHighSnrFormula);
        break;
    }
    if (src == CurveSource::kNone && monte_carlo) {
      if (auto v = monte_carlo(snr)) {
        p = *v;
        src = CurveSource::kMonteCarlo;
      }
    }
    curve.snr.push_back(snr);
    curve.p.push_back(p);
    curve.source.push_back(src);
  }
  const std::size_t n = curve.snr.size();
  auto usable = [&](std::size_t i) {
    return curve.source[i] != CurveSource::kNone && curve.p[i] > 0.0;
  };
  if (std::none_of(curve.source.begin(), curve.source.end(),
                   [](CurveSource s) { return s != CurveSource::kNone; })) {
    throw DomainError("no grid point has a valid formula");
  }
  curve.exponent.assign(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (i > 0 && usable(i - 1)) ? i - 1 : i;
    const std::size_t hi = (i + 1 < n && usable(i + 1)) ? i + 1 : i;
    if (lo == hi || !usable(i)) continue;
    curve.exponent[i] = -(std::log(curve.p[hi]) - std::log(curve.p[lo])) /
                        (std::log(curve.snr[hi]) - std::log(curve.snr[lo]));
  }
  return curve;
}

double fit_loglog_slope(std::span<const double> snr,
                        std::span<const double> p) {
  if (snr.size() != p.size() || snr.size() < 2) {
    throw DomainError("slope fit needs >= 2 paired points");
  }
  const std::size_t n = snr.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(snr[i]);
    my += std::log(p[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(snr[i]) - mx;
    sxy += dx * (std::log(p[i]) - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

}  // namespace chanalloc
