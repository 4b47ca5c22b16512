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

#include "chanalloc/channel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "chanalloc/errors.hpp"

namespace chanalloc {

SystemConfig::SystemConfig(int m, int l, int n, RateMode mode,
                           std::vector<double> spec, double snr)
    : num_users_(m),
      num_bands_(l),
      num_subchannels_(n),
      mode_(mode),
      spec_(std::move(spec)),
      snr_(snr) {}

SystemConfig SystemConfig::FromRates(int num_users, int num_bands,
                                     int num_subchannels,
                                     std::vector<double> rates, double snr) {
  SystemConfig c(num_users, num_bands, num_subchannels, RateMode::kFixedRate,
                 std::move(rates), snr);
  c.Validate();
  return c;
}

SystemConfig SystemConfig::FromMultiplexingGains(int num_users, int num_bands,
                                                 int num_subchannels,
                                                 std::vector<double> gains,
                                                 double snr) {
  SystemConfig c(num_users, num_bands, num_subchannels,
                 RateMode::kMultiplexingGain, std::move(gains), snr);
  c.Validate();
  return c;
}

SystemConfig SystemConfig::WithSnr(double snr) const {
  SystemConfig c = *this;
  c.snr_ = snr;
  c.Validate();
  return c;
}

double SystemConfig::target_rate(int m) const {
  if (mode_ == RateMode::kFixedRate) return spec_[m];
  return spec_[m] * std::log1p(snr_);
}

std::vector<double> SystemConfig::target_rates() const {
  std::vector<double> r(num_users_);
  for (int m = 0; m < num_users_; ++m) r[m] = target_rate(m);
  return r;
}

double SystemConfig::multiplexing_gain(int m) const {
  if (mode_ == RateMode::kMultiplexingGain) return spec_[m];
  return spec_[m] / std::log1p(snr_);
}

double subchannel_rate(std::span<const double> rates, int num_subchannels) {
  return std::accumulate(rates.begin(), rates.end(), 0.0) / num_subchannels;
}

double SystemConfig::subchannel_rate() const {
  const std::vector<double> r = target_rates();
  return chanalloc::subchannel_rate(r, num_subchannels_);
}

double SystemConfig::normalized_rate() const {
  return coherence_size() * subchannel_rate();
}

std::vector<int> SystemConfig::subchannel_demand() const {
  // In both modes K~_m = N * spec_m / sum(spec), independent of snr.
  const double total = std::accumulate(spec_.begin(), spec_.end(), 0.0);
  std::vector<int> k(num_users_);
  for (int m = 0; m < num_users_; ++m) {
    k[m] = static_cast<int>(std::lround(num_subchannels_ * spec_[m] / total));
  }
  return k;
}

void SystemConfig::Validate() const {
  if (num_users_ < 2) throw ConfigError("num_users must be at least 2");
  if (num_bands_ < 1) throw ConfigError("num_bands must be positive");
  if (num_subchannels_ < num_users_) {
    throw ConfigError("num_subchannels must be at least num_users");
  }
  if (num_subchannels_ % num_bands_ != 0) {
    throw ConfigError("num_bands must divide num_subchannels");
  }
  if (static_cast<int>(spec_.size()) != num_users_) {
    throw ConfigError("expected " + std::to_string(num_users_) +
                      " per-user rates, got " + std::to_string(spec_.size()));
  }
  if (!(snr_ > 0.0) || !std::isfinite(snr_)) {
    throw ConfigError("snr must be positive and finite");
  }
  double total = 0.0;
  for (double v : spec_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("rates must be non-negative and finite");
    }
    total += v;
  }
  if (!(total > 0.0)) throw ConfigError("at least one rate must be positive");
  int sum = 0;
  for (int m = 0; m < num_users_; ++m) {
    const double exact = num_subchannels_ * spec_[m] / total;
    const double nearest = std::round(exact);
    if (nearest < 1.0 || std::abs(exact - nearest) > 1e-9 * num_subchannels_) {
      throw ConfigError("subchannel demand of user " + std::to_string(m) +
                        " is " + std::to_string(exact) +
                        ", not a positive integer");
    }
    sum += static_cast<int>(nearest);
  }
  if (sum != num_subchannels_) {
    throw ConfigError("subchannel demands do not sum to num_subchannels");
  }
}

ChannelRealization::ChannelRealization(int num_users, int num_bands)
    : num_users_(num_users),
      num_bands_(num_bands),
      g_(static_cast<std::size_t>(num_users) * num_bands) {}

CsiMatrix::CsiMatrix(int num_users, int num_bands, bool value)
    : num_users_(num_users),
      num_bands_(num_bands),
      q_(static_cast<std::size_t>(num_users) * num_bands, value ? 1 : 0) {}

int CsiMatrix::count_ones() const {
  return static_cast<int>(std::accumulate(q_.begin(), q_.end(), 0));
}

ChannelRealization sample_channel(int num_users, int num_bands, Rng& rng) {
  ChannelRealization real(num_users, num_bands);
  for (int m = 0; m < num_users; ++m) {
    for (int l = 0; l < num_bands; ++l) real.gain(m, l) = rng.complex_gaussian();
  }
  return real;
}

ChannelRealization sample_channel(const SystemConfig& config, Rng& rng) {
  return sample_channel(config.num_users(), config.num_bands(), rng);
}

double mutual_information(const ChannelRealization& real, int m, int l,
                          double snr, int coherence_size) {
  return std::log1p(real.power(m, l) * snr) / coherence_size;
}

double mutual_information(const ChannelRealization& real, int m, int l,
                          const SystemConfig& config) {
  return mutual_information(real, m, l, config.snr(), config.coherence_size());
}

OutageProbability subchannel_outage_prob(double normalized_rate, double snr) {
  if (!(snr > 0.0)) throw DomainError("snr must be positive");
  if (!(normalized_rate >= 0.0)) throw DomainError("rate must be >= 0");
  const double x = std::expm1(normalized_rate) / snr;
  return {-std::expm1(-x), std::exp(-x)};
}

double power_threshold(double normalized_rate, double snr) {
  return std::expm1(normalized_rate) / snr;
}

CsiMatrix quantize_csi(const ChannelRealization& real, double snr,
                       std::span<const double> band_thresholds) {
  CsiMatrix q(real.num_users(), real.num_bands());
  for (int m = 0; m < real.num_users(); ++m) {
    for (int l = 0; l < real.num_bands(); ++l) {
      q.set(m, l, std::log1p(real.power(m, l) * snr) >= band_thresholds[m]);
    }
  }
  return q;
}

CsiMatrix quantize_csi(const ChannelRealization& real, double snr,
                       double normalized_rate) {
  std::vector<double> t(real.num_users(), normalized_rate);
  return quantize_csi(real, snr, t);
}

CsiMatrix quantize_csi(const ChannelRealization& real,
                       const SystemConfig& config) {
  return quantize_csi(real, config.snr(), config.normalized_rate());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace chanalloc
