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

#include "experiment.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace chanalloc::tools {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw FieldError(where(), "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& required(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      throw FieldError(path_ + "/" + key, "missing required field '" +
                                              std::string(key) + "'");
    }
    return j_.at(key);
  }

  const json* optional(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw FieldError(path_ + "/" + it.key(),
                         "unknown field '" + it.key() + "'");
      }
    }
  }

  std::string child(const char* key) const { return path_ + "/" + key; }
  std::string where() const { return path_.empty() ? "/" : path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FieldError(path, "expected an integer");
  return v.get<int>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FieldError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw FieldError(path, "expected a number");
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw FieldError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw FieldError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_doubles(const json& v, const std::string& path) {
  if (!v.is_array()) throw FieldError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_double(v[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::vector<int> as_ints(const json& v, const std::string& path) {
  if (!v.is_array()) throw FieldError(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_int(v[i], path + "/" + std::to_string(i)));
  }
  return out;
}

SchemeSpec parse_scheme_entry(const json& v, const std::string& path) {
  SchemeSpec s;
  if (v.is_string()) {
    try {
      s.kind = parse_scheme(v.get<std::string>());
    } catch (const ConfigError& e) {
      throw FieldError(path, e.what());
    }
    return s;
  }
  Reader r(v, path);
  const std::string kind = as_string(r.required("kind"), r.child("kind"));
  try {
    s.kind = parse_scheme(kind);
  } catch (const ConfigError& e) {
    throw FieldError(r.child("kind"), e.what());
  }
  if (const json* caps = r.optional("caps")) {
    s.caps = as_ints(*caps, r.child("caps"));
  }
  r.finish();
  return s;
}

void read_rates(Reader& r, RateMode* mode, std::vector<double>* rates,
                const char* fixed_key, const char* gain_key) {
  const bool fixed = r.has(fixed_key);
  const bool gain = r.has(gain_key);
  if (fixed == gain) {
    throw FieldError(r.child(fixed_key),
                     std::string("exactly one of '") + fixed_key + "' and '" +
                         gain_key + "' is required");
  }
  const char* key = fixed ? fixed_key : gain_key;
  *mode = fixed ? RateMode::kFixedRate : RateMode::kMultiplexingGain;
  *rates = as_doubles(*r.optional(key), r.child(key));
  r.optional(fixed ? gain_key : fixed_key);
}

std::string rate_unit(Reader& r) {
  const json* u = r.optional("rate_unit");
  if (u == nullptr) return "nats";
  const std::string unit = as_string(*u, r.child("rate_unit"));
  if (unit != "nats" && unit != "bits") {
    throw FieldError(r.child("rate_unit"), "expected 'nats' or 'bits'");
  }
  return unit;
}

SystemSpec parse_system(const json& v, const std::string& path) {
  Reader r(v, path);
  SystemSpec s;
  s.num_users = as_int(r.required("num_users"), r.child("num_users"));
  s.num_bands = as_int(r.required("num_bands"), r.child("num_bands"));
  s.num_subchannels =
      as_int(r.required("num_subchannels"), r.child("num_subchannels"));
  read_rates(r, &s.mode, &s.rates, "target_rates", "multiplexing_gains");
  if (rate_unit(r) == "bits" && s.mode == RateMode::kFixedRate) {
    for (double& x : s.rates) x *= std::log(2.0);
  }
  const json& schemes = r.required("schemes");
  if (!schemes.is_array() || schemes.empty()) {
    throw FieldError(r.child("schemes"), "expected a non-empty array");
  }
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    s.schemes.push_back(
        parse_scheme_entry(schemes[i], r.child("schemes") + "/" + std::to_string(i)));
  }
  r.finish();
  return s;
}

ConditionalSpec parse_conditional(const json& v, const std::string& path) {
  Reader r(v, path);
  ConditionalSpec c;
  c.K = as_int(r.required("K"), r.child("K"));
  c.k = as_int(r.required("k"), r.child("k"));
  std::vector<double> rate;
  const bool fixed = r.has("target_rate");
  const bool gain = r.has("multiplexing_gain");
  if (fixed == gain) {
    throw FieldError(r.child("multiplexing_gain"),
                     "exactly one of 'target_rate' and 'multiplexing_gain' is required");
  }
  const char* key = fixed ? "target_rate" : "multiplexing_gain";
  c.mode = fixed ? RateMode::kFixedRate : RateMode::kMultiplexingGain;
  c.rate = as_double(*r.optional(key), r.child(key));
  r.optional(fixed ? "multiplexing_gain" : "target_rate");
  if (rate_unit(r) == "bits" && fixed) c.rate *= std::log(2.0);
  r.finish();
  if (c.K < 1 || c.k < 0 || c.k > c.K) {
    throw FieldError(path, "need K >= 1 and 0 <= k <= K");
  }
  if (!(c.rate > 0.0)) throw FieldError(r.child(key), "rate must be positive");
  return c;
}

Flags parse_flags(const json& v, const std::string& path) {
  Reader r(v, path);
  Flags f;
  if (auto* x = r.optional("pver2hk")) f.pver2hk = as_bool(*x, r.child("pver2hk"));
  if (auto* x = r.optional("eta")) f.eta = as_double(*x, r.child("eta"));
  if (auto* x = r.optional("paired")) f.paired = as_bool(*x, r.child("paired"));
  if (auto* x = r.optional("enforce_guards")) {
    f.enforce_guards = as_bool(*x, r.child("enforce_guards"));
  }
  if (auto* x = r.optional("qs_factor")) f.qs_factor = as_bool(*x, r.child("qs_factor"));
  if (auto* x = r.optional("band_granularity")) {
    f.band_granularity = as_bool(*x, r.child("band_granularity"));
  }
  r.finish();
  if (!(f.eta >= 1.0)) throw FieldError(r.child("eta"), "eta must be >= 1");
  return f;
}

json scheme_json(const SchemeSpec& s) {
  json j = {{"kind", std::string(scheme_name(s.kind))}};
  if (!s.caps.empty()) j["caps"] = s.caps;
  return j;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(start + i * step);
  return v;
}

SystemConfig SystemSpec::at(double snr) const {
  return mode == RateMode::kFixedRate
             ? SystemConfig::FromRates(num_users, num_bands, num_subchannels,
                                       rates, snr)
             : SystemConfig::FromMultiplexingGains(num_users, num_bands,
                                                   num_subchannels, rates, snr);
}

double ConditionalSpec::threshold(double snr) const {
  const double r = mode == RateMode::kFixedRate ? rate : rate * std::log1p(snr);
  return r / K;
}

ExperimentConfig parse_experiment(const json& j) {
  Reader r(j, "");
  ExperimentConfig c;
  if (auto* x = r.optional("name")) c.name = as_string(*x, "/name");
  if (auto* x = r.optional("system")) c.system = parse_system(*x, "/system");
  if (auto* x = r.optional("conditional")) {
    c.conditional = parse_conditional(*x, "/conditional");
  }
  if (!c.system && !c.conditional) {
    throw FieldError("/system", "missing required field 'system' (or 'conditional')");
  }
  {
    const json& g = r.required("snr_db");
    Reader gr(g, "/snr_db");
    c.snr_db.start = as_double(gr.required("start"), gr.child("start"));
    c.snr_db.stop = as_double(gr.required("stop"), gr.child("stop"));
    c.snr_db.step = as_double(gr.required("step"), gr.child("step"));
    gr.finish();
    if (!(c.snr_db.step > 0.0) || c.snr_db.stop < c.snr_db.start) {
      throw FieldError("/snr_db", "need step > 0 and stop >= start");
    }
  }
  c.trials = as_u64(r.required("trials"), "/trials");
  if (c.trials == 0) throw FieldError("/trials", "must be positive");
  c.seed = as_u64(r.required("seed"), "/seed");
  if (auto* x = r.optional("workers")) c.workers = as_int(*x, "/workers");
  if (c.workers < 1) throw FieldError("/workers", "must be positive");
  if (auto* x = r.optional("users")) {
    for (int u : as_ints(*x, "/users")) c.users.push_back(u - 1);
  }
  if (auto* x = r.optional("output")) c.output = as_string(*x, "/output");
  if (auto* x = r.optional("flags")) c.flags = parse_flags(*x, "/flags");
  if (auto* x = r.optional("r_points")) c.r_points = as_int(*x, "/r_points");
  if (c.r_points < 2) throw FieldError("/r_points", "must be at least 2");
  r.finish();

  if (c.system) {
    const SystemSpec& s = *c.system;
    for (int u : c.users) {
      if (u < 0 || u >= s.num_users) throw FieldError("/users", "user index out of range");
    }
    for (double db : {c.snr_db.start, c.snr_db.stop}) {
      SystemConfig cfg;
      try {
        cfg = s.at(db_to_linear(db));
      } catch (const ConfigError& e) {
        throw FieldError("/system", e.what());
      }
      for (std::size_t i = 0; i < s.schemes.size(); ++i) {
        const SchemeSpec& sc = s.schemes[i];
        try {
          if (sc.kind == SchemeKind::kChunkCoded && s.num_subchannels != s.num_bands) {
            SystemSpec bundled = s;
            bundled.num_subchannels = s.num_bands;
            sc.Validate(bundled.at(db_to_linear(db)));
          } else {
            sc.Validate(cfg);
          }
        } catch (const ConfigError& e) {
          throw FieldError("/system/schemes/" + std::to_string(i), e.what());
        }
      }
    }
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  if (c.system) {
    const SystemSpec& s = *c.system;
    json sys = {{"num_users", s.num_users},
                {"num_bands", s.num_bands},
                {"num_subchannels", s.num_subchannels},
                {"rate_unit", "nats"}};
    sys[s.mode == RateMode::kFixedRate ? "target_rates" : "multiplexing_gains"] = s.rates;
    json schemes = json::array();
    for (const SchemeSpec& sc : s.schemes) schemes.push_back(scheme_json(sc));
    sys["schemes"] = schemes;
    j["system"] = sys;
  }
  if (c.conditional) {
    const ConditionalSpec& k = *c.conditional;
    j["conditional"] = {{"K", k.K}, {"k", k.k}, {"rate_unit", "nats"}};
    j["conditional"][k.mode == RateMode::kFixedRate ? "target_rate"
                                                    : "multiplexing_gain"] = k.rate;
  }
  j["snr_db"] = {{"start", c.snr_db.start}, {"stop", c.snr_db.stop}, {"step", c.snr_db.step}};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  if (!c.users.empty()) {
    std::vector<int> one_based;
    for (int u : c.users) one_based.push_back(u + 1);
    j["users"] = one_based;
  }
  if (!c.output.empty()) j["output"] = c.output;
  j["flags"] = {{"pver2hk", c.flags.pver2hk},
                {"eta", c.flags.eta},
                {"paired", c.flags.paired},
                {"enforce_guards", c.flags.enforce_guards},
                {"qs_factor", c.flags.qs_factor},
                {"band_granularity", c.flags.band_granularity}};
  j["r_points"] = c.r_points;
  return j;
}

namespace {

json system_json(int M, int L, int N, const char* rate_key, std::vector<double> rates,
                 json schemes) {
  return {{"num_users", M}, {"num_bands", L}, {"num_subchannels", N},
          {rate_key, rates}, {"schemes", schemes}};
}

json grid(double a, double b, double s) {
  return {{"start", a}, {"stop", b}, {"step", s}};
}

json preset_json(std::string_view name) {
  const json rb_family = {"rb_coded", "interleaved", "tdma"};
  if (name == "fig4") {
    return {{"name", "fig4"},
            {"system", system_json(2, 6, 12, "multiplexing_gains", {0.9, 0.9},
                                   {"rb_coded", "chunk_coded", "interleaved",
                                    "localized", "tdma"})},
            {"snr_db", grid(0, 30, 2)}, {"trials", 100000}, {"seed", 1},
            {"users", {1}}};
  }
  if (name == "fig6" || name == "fig7") {
    return {{"name", std::string(name)},
            {"conditional", {{"K", 4}, {"k", 2}, {"multiplexing_gain", 1.2}}},
            {"snr_db", name == "fig6" ? grid(10, 30, 2.5) : grid(10, 40, 2.5)},
            {"trials", 1000000}, {"seed", 1}};
  }
  if (name == "fig8" || name == "fig8_alt") {
    const bool alt = name == "fig8_alt";
    return {{"name", std::string(name)},
            {"system", alt ? system_json(2, 6, 6, "target_rates", {1, 1}, rb_family)
                           : system_json(2, 6, 12, "target_rates", {6, 6}, rb_family)},
            {"snr_db", alt ? grid(-4, 12, 1) : grid(6, 20, 1)},
            {"trials", 200000}, {"seed", 1}, {"users", {1}},
            {"flags", {{"paired", true}}}};
  }
  if (name == "fig9" || name == "fig9_alt") {
    const bool alt = name == "fig9_alt";
    return {{"name", std::string(name)},
            {"system", system_json(2, 6, alt ? 6 : 12, "multiplexing_gains",
                                   {0.9, 0.9}, rb_family)},
            {"snr_db", grid(-4, 14, 1)},
            {"trials", 200000}, {"seed", 1}, {"users", {1}},
            {"flags", {{"paired", true}}}};
  }
  if (name == "fig10") {
    return {{"name", "fig10"},
            {"system", system_json(3, 6, 6, "target_rates", {1, 1, 1},
                                   {{{"kind", "chunk_coded"}, {"caps", {1, 1, 1}}},
                                    "localized", "tdma"})},
            {"snr_db", grid(0, 12, 1)}, {"trials", 200000}, {"seed", 1},
            {"users", {1}}, {"flags", {{"paired", true}}}};
  }
  if (name == "fig11") {
    return {{"name", "fig11"},
            {"system", system_json(3, 6, 6, "multiplexing_gains", {0.6, 0.6, 0.6},
                                   {{{"kind", "chunk_coded"}, {"caps", {2, 2, 2}}},
                                    "localized"})},
            {"snr_db", grid(0, 30, 2)}, {"trials", 200000}, {"seed", 1},
            {"users", {1}}, {"flags", {{"paired", true}}}};
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig4", "fig6", "fig7", "fig8", "fig8_alt", "fig9", "fig9_alt", "fig10", "fig11"};
}

ExperimentConfig preset(std::string_view name) {
  return parse_experiment(preset_json(name));
}

std::string content_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int line_of_key(std::string_view text, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\"";
  const std::size_t pos = text.find(needle);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n';
  return line;
}

}  // namespace chanalloc::tools
