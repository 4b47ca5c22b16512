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


#ifndef CHANALLOC_TOOLS_EXPERIMENT_HPP_
#define CHANALLOC_TOOLS_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chanalloc/analysis.hpp"
#include "chanalloc/channel.hpp"
#include "chanalloc/errors.hpp"
#include "json.hpp"

namespace chanalloc::tools {

// Schema violation. pointer() is the JSON pointer of the offending field.
class FieldError : public ConfigError {
 public:
  FieldError(std::string pointer, const std::string& what)
      : ConfigError(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

struct SystemSpec {
  int num_users = 0;
  int num_bands = 0;
  int num_subchannels = 0;
  RateMode mode = RateMode::kFixedRate;
  std::vector<double> rates;  // nats, or multiplexing gains
  std::vector<SchemeSpec> schemes;

  SystemConfig at(double snr) const;
};

// Conditional experiment on K subchannels with k known to be good. The user
// rate is either fixed or gain * ln(1 + snr); the per-subchannel threshold is
// rate / K.
struct ConditionalSpec {
  int K = 0;
  int k = 0;
  RateMode mode = RateMode::kMultiplexingGain;
  double rate = 0.0;

  double threshold(double snr) const;
};

struct Flags {
  bool pver2hk = false;
  double eta = 2.0;
  bool paired = false;
  bool enforce_guards = true;
  bool qs_factor = false;
  bool band_granularity = true;
};

struct ExperimentConfig {
  std::string name;
  std::optional<SystemSpec> system;
  std::optional<ConditionalSpec> conditional;
  GridSpec snr_db;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<int> users;  // 0-based; empty means all
  std::string output;
  Flags flags;
  int r_points = 61;
};

// Strict parse: unknown keys, wrong types and missing required fields throw
// FieldError. Also validates every system/scheme combination on the grid.
ExperimentConfig parse_experiment(const nlohmann::json& j);
// Canonical echo; parse_experiment(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& c);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
ExperimentConfig preset(std::string_view name);

// FNV-1a 64 over the compact dump, as 16 hex digits.
std::string content_hash(const nlohmann::json& j);

// 1-based line of the first occurrence of "key" in text, 0 if absent.
int line_of_key(std::string_view text, std::string_view key);

}  // namespace chanalloc::tools

#endif  // CHANALLOC_TOOLS_EXPERIMENT_HPP_
