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

#ifndef CHANALLOC_CHANNEL_HPP_
#define CHANALLOC_CHANNEL_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "chanalloc/random.hpp"

namespace chanalloc {

enum class RateMode { kFixedRate, kMultiplexingGain };

// M users sharing N subchannels grouped into L coherence bands of
// N_c = N / L subchannels each. Rates are in nats per frame. In
// multiplexing-gain mode the rate of user m is r_m * ln(1 + snr).
class SystemConfig {
 public:
  SystemConfig() = default;

  static SystemConfig FromRates(int num_users, int num_bands,
                                int num_subchannels, std::vector<double> rates,
                                double snr);
  static SystemConfig FromMultiplexingGains(int num_users, int num_bands,
                                            int num_subchannels,
                                            std::vector<double> gains,
                                            double snr);

  int num_users() const { return num_users_; }
  int num_bands() const { return num_bands_; }
  int num_subchannels() const { return num_subchannels_; }
  int coherence_size() const { return num_subchannels_ / num_bands_; }
  int band_of(int subchannel) const { return subchannel / coherence_size(); }
  double snr() const { return snr_; }
  RateMode rate_mode() const { return mode_; }
  const std::vector<double>& rate_spec() const { return spec_; }

  // Same system at a different SNR; multiplexing-gain rates are re-resolved.
  SystemConfig WithSnr(double snr) const;

  double target_rate(int m) const;
  std::vector<double> target_rates() const;
  // Multiplexing gain of user m (rate / ln(1+snr) in fixed-rate mode).
  double multiplexing_gain(int m) const;

  // R_s = sum(R_m) / N.
  double subchannel_rate() const;
  // R_c = N_c * R_s: the band-level threshold on ln(1 + |g|^2 snr).
  double normalized_rate() const;
  // K~_m = R_m / R_s. Guaranteed integral for a validated config.
  std::vector<int> subchannel_demand() const;

  // Throws ConfigError if the invariants do not hold.
  void Validate() const;

 private:
  SystemConfig(int m, int l, int n, RateMode mode, std::vector<double> spec,
               double snr);

  int num_users_ = 0;
  int num_bands_ = 0;
  int num_subchannels_ = 0;
  RateMode mode_ = RateMode::kFixedRate;
  std::vector<double> spec_;
  double snr_ = 1.0;
};

// R_s = sum(rates) / N; defined for any rates, valid config or not.
double subchannel_rate(std::span<const double> rates, int num_subchannels);

// M x L complex gains; every subchannel in band l sees g(m, l).
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(int num_users, int num_bands);

  int num_users() const { return num_users_; }
  int num_bands() const { return num_bands_; }
  std::complex<double>& gain(int m, int l) { return g_[m * num_bands_ + l]; }
  const std::complex<double>& gain(int m, int l) const {
    return g_[m * num_bands_ + l];
  }
  double power(int m, int l) const { return std::norm(gain(m, l)); }

 private:
  int num_users_ = 0;
  int num_bands_ = 0;
  std::vector<std::complex<double>> g_;
};

// One bit per (user, band): 1 when the band supports the threshold rate.
class CsiMatrix {
 public:
  CsiMatrix() = default;
  CsiMatrix(int num_users, int num_bands, bool value = false);

  int num_users() const { return num_users_; }
  int num_bands() const { return num_bands_; }
  bool at(int m, int l) const { return q_[m * num_bands_ + l] != 0; }
  void set(int m, int l, bool value) {
    q_[m * num_bands_ + l] = value ? 1 : 0;
  }
  int count_ones() const;

  friend bool operator==(const CsiMatrix&, const CsiMatrix&) = default;

 private:
  int num_users_ = 0;
  int num_bands_ = 0;
  std::vector<std::uint8_t> q_;
};

ChannelRealization sample_channel(const SystemConfig& config, Rng& rng);
ChannelRealization sample_channel(int num_users, int num_bands, Rng& rng);

// (1/N_c) ln(1 + |g_ml|^2 snr).
double mutual_information(const ChannelRealization& real, int m, int l,
                          double snr, int coherence_size);
double mutual_information(const ChannelRealization& real, int m, int l,
                          const SystemConfig& config);

struct OutageProbability {
  double p = 0.0;  // p_s
  double q = 1.0;  // q_s = 1 - p_s, computed without cancellation
};

// p_s = 1 - exp(-(e^{R_c} - 1) / snr).
OutageProbability subchannel_outage_prob(double normalized_rate, double snr);

// Band threshold on |g|^2 equivalent to ln(1 + |g|^2 snr) >= R_c.
double power_threshold(double normalized_rate, double snr);

// q(m,l) = 1 iff ln(1 + |g_ml|^2 snr) >= thresholds[m].
CsiMatrix quantize_csi(const ChannelRealization& real, double snr,
                       std::span<const double> band_thresholds);
// Same threshold R_c for every user.
CsiMatrix quantize_csi(const ChannelRealization& real, double snr,
                       double normalized_rate);
CsiMatrix quantize_csi(const ChannelRealization& real,
                       const SystemConfig& config);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace chanalloc

#endif  // CHANALLOC_CHANNEL_HPP_
