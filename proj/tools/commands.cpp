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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "chanalloc/montecarlo.hpp"
#include "chanalloc/numerics.hpp"
#include "chanalloc/pver2hk.hpp"

namespace chanalloc::tools {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

// Chunk schemes on a system with N > L run on the bundled system with one
// chunk per coherence band.
SystemConfig scheme_config(const SystemSpec& s, const SchemeSpec& scheme,
                           double snr) {
  if (scheme.kind == SchemeKind::kChunkCoded && s.num_subchannels != s.num_bands) {
    SystemSpec bundled = s;
    bundled.num_subchannels = s.num_bands;
    return bundled.at(snr);
  }
  return s.at(snr);
}

std::vector<int> users_of(const ExperimentConfig& c, int num_users) {
  if (!c.users.empty()) return c.users;
  std::vector<int> u(num_users);
  std::iota(u.begin(), u.end(), 0);
  return u;
}

FormulaOptions formula_options(const Flags& f, bool enforce) {
  FormulaOptions o;
  o.include_qs_factor = f.qs_factor;
  o.band_granularity = f.band_granularity;
  o.enforce_guards = enforce;
  return o;
}

std::string scheme_label(const SchemeSpec& s) {
  return std::string(scheme_name(s.kind));
}

std::vector<ResultRow> simulate_system(const ExperimentConfig& c) {
  const SystemSpec& s = *c.system;
  const std::vector<double> grid = c.snr_db.values();
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < s.schemes.size(); ++i) {
    const SchemeSpec& scheme = s.schemes[i];
    const SystemConfig cfg = scheme_config(s, scheme, db_to_linear(grid.front()));
    SweepOptions so;
    so.estimate.workers = c.workers;
    so.estimate.paired = c.flags.paired;
    so.estimate.trial.use_pver2hk = c.flags.pver2hk;
    so.estimate.trial.eta = c.flags.eta;
    so.estimate.scheme_offset = i;
    so.formula = formula_options(c.flags, c.flags.enforce_guards);
    so.users = c.users;
    for (const SweepRow& r :
         sweep(cfg, std::span<const SchemeSpec>(&scheme, 1), grid, c.trials, c.seed, so)) {
      rows.push_back({scheme_label(scheme), r.user + 1, r.gamma_db, r.p_out,
                      r.ci_lo, r.ci_hi, r.source, r.guard_violated});
    }
  }
  return rows;
}

std::vector<ResultRow> simulate_conditional(const ExperimentConfig& c) {
  const ConditionalSpec& k = *c.conditional;
  std::vector<ResultRow> rows;
  std::vector<ResultRow> bounds;
  for (double db : c.snr_db.values()) {
    const double snr = db_to_linear(db);
    const double rc = k.threshold(snr);
    const ConditionalEstimate e =
        conditional_experiment(k.K, k.k, snr, rc, c.trials, c.seed, c.workers);
    rows.push_back({"conditional", 1, db, e.p_hat, e.ci_lo, e.ci_hi,
                    e.p_hat < 1e-6 ? "monte_carlo_censored" : "monte_carlo", false});
    const double b = solve_saddle({k.K, k.k, snr, rc}).reported();
    bounds.push_back({"conditional", 1, db, b, b, b, "saddle_bound", false});
  }
  rows.insert(rows.end(), bounds.begin(), bounds.end());
  return rows;
}

std::string status_name(SaddleStatus s) {
  switch (s) {
    case SaddleStatus::kOk: return "ok";
    case SaddleStatus::kNoSaddle: return "no_saddle";
    case SaddleStatus::kEmptyTail: return "empty_tail";
  }
  return "ok";
}

SaddleRow saddle_row(double db, const SaddleInputs& in) {
  const SaddleSolution sol = solve_saddle(in);
  return {db, in.K, in.k, in.rc, sol.lambda_star, sol.sigma_sq, sol.reported(),
          status_name(sol.status)};
}

void analyze_fixed_tables(const ExperimentConfig& c, AnalysisTables* t) {
  const SystemSpec& s = *c.system;
  const std::vector<double> grid = c.snr_db.values();
  std::vector<double> snr;
  for (double db : grid) snr.push_back(db_to_linear(db));
  const FormulaOptions loose = formula_options(c.flags, false);
  for (const SchemeSpec& scheme : s.schemes) {
    const std::string label = scheme_label(scheme);
    const SystemConfig base = scheme_config(s, scheme, snr.front());
    const std::vector<int> caps = scheme.effective_caps(base);
    for (int m : users_of(c, s.num_users)) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const SystemConfig cfg = base.WithSnr(snr[i]);
        auto add = [&](const FormulaResult& f, const char* source) {
          t->formulas.push_back({label, m + 1, grid[i], std::min(f.p, 1.0),
                                 0.0, 0.0, source, f.guard_violated});
        };
        switch (scheme.kind) {
          case SchemeKind::kRbCoded:
            add(rb_outage_high_snr(cfg, m, snr[i], loose), "formula_high_snr");
            add(rb_outage_low_snr(cfg, m, snr[i], loose), "formula_low_snr");
            break;
          case SchemeKind::kChunkCoded:
            add(chunk_outage_high_snr(cfg, m, caps, snr[i], loose), "formula_high_snr");
            add(chunk_outage_low_snr(cfg, m, caps, snr[i], loose), "formula_low_snr");
            add(chunk_optimal_outage(cfg, m, snr[i], cfg.multiplexing_gain(m), loose),
                "formula_optimal");
            break;
          default:
            add(fixed_allocation_outage(scheme.kind, cfg, m, snr[i]), "formula_bound");
            break;
        }
        for (const SaddleInputs& in :
             formula_saddle_terms(scheme, cfg, m, snr[i], formula_options(c.flags, false))) {
          t->saddle.push_back(saddle_row(grid[i], in));
        }
      }
      try {
        const OutageCurve curve = oer_curve(base, scheme, m, snr, {});
        for (std::size_t i = 0; i < grid.size(); ++i) {
          t->exponent.push_back({label, m + 1, grid[i], curve.exponent[i],
                                 std::string(curve_source_name(curve.source[i]))});
        }
      } catch (const DomainError&) {
      }
      // DMT polyline at a symmetric operating point r for every user.
      const std::vector<int> demand = base.subchannel_demand();
      const double nc = base.coherence_size();
      const bool chunk = scheme.kind == SchemeKind::kChunkCoded;
      const bool fixed_caps = chunk && !scheme.caps.empty() && scheme.caps != demand;
      const double r_max = chunk ? (fixed_caps ? caps[m] : demand[m]) : demand[m] / nc;
      for (int j = 0; j < c.r_points; ++j) {
        const double r = r_max * j / (c.r_points - 1);
        double d;
        if (fixed_caps) {
          d = dmt_chunk(base, m, caps, r);
        } else if (chunk) {
          std::vector<double> rv(s.num_users);
          for (int i = 0; i < s.num_users; ++i) rv[i] = std::min(r, 1.0 * demand[i]);
          d = dmr_chunk(base, rv).d[m];
        } else if (scheme.kind == SchemeKind::kRbCoded) {
          std::vector<double> rv(s.num_users);
          for (int i = 0; i < s.num_users; ++i) rv[i] = std::min(r, demand[i] / nc);
          d = dmr_rb(base, rv).d[m];
        } else {
          d = scheme_dmt(scheme.kind, base, m, r);
        }
        t->dmt.push_back({label, m + 1, r, std::max(d, 0.0)});
      }
    }
  }
}

void analyze_conditional_tables(const ExperimentConfig& c, AnalysisTables* t) {
  const ConditionalSpec& k = *c.conditional;
  const std::vector<double> grid = c.snr_db.values();
  std::vector<double> bound;
  for (double db : grid) {
    const double snr = db_to_linear(db);
    const SaddleInputs in{k.K, k.k, snr, k.threshold(snr)};
    const SaddleRow row = saddle_row(db, in);
    t->saddle.push_back(row);
    t->formulas.push_back({"conditional", 1, db, row.bound, 0.0, 0.0,
                           "saddle_bound", false});
    bound.push_back(row.bound);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t lo = i > 0 ? i - 1 : i;
    const std::size_t hi = i + 1 < grid.size() ? i + 1 : i;
    double e = std::nan("");
    if (lo != hi && bound[lo] > 0.0 && bound[hi] > 0.0) {
      e = -(std::log(bound[hi]) - std::log(bound[lo])) /
          (std::log(db_to_linear(grid[hi])) - std::log(db_to_linear(grid[lo])));
    }
    t->exponent.push_back({"conditional", 1, grid[i], e, "saddle_bound"});
    if (k.mode == RateMode::kMultiplexingGain) {
      t->exponent.push_back(
          {"conditional", 1, grid[i], cond_dmt(k.K, k.k, k.rate), "cond_dmt"});
    }
  }
  for (int j = 0; j < c.r_points; ++j) {
    const double r = static_cast<double>(k.K) * j / (c.r_points - 1);
    t->dmt.push_back({"conditional", 1, r, cond_dmt(k.K, k.k, r)});
  }
}

std::string timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string prefix_for(const ExperimentConfig& c, const std::string& out) {
  if (!out.empty()) return out;
  if (!c.output.empty()) return c.output;
  return c.name.empty() ? "results" : c.name;
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

std::vector<ResultRow> simulate_rows(const ExperimentConfig& c) {
  std::vector<ResultRow> rows;
  if (c.system) rows = simulate_system(c);
  if (c.conditional) {
    std::vector<ResultRow> more = simulate_conditional(c);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  return rows;
}

AnalysisTables analyze_tables(const ExperimentConfig& c) {
  AnalysisTables t;
  if (c.system) analyze_fixed_tables(c, &t);
  if (c.conditional) analyze_conditional_tables(c, &t);
  return t;
}

json derived_quantities(const ExperimentConfig& c) {
  json d = json::object();
  const double snr = db_to_linear(c.snr_db.start);
  if (c.system) {
    const SystemSpec& s = *c.system;
    const SystemConfig cfg = s.at(snr);
    d["N_c"] = cfg.coherence_size();
    d["R_s"] = cfg.subchannel_rate();
    d["R_c"] = cfg.normalized_rate();
    d["target_rates"] = cfg.target_rates();
    d["K_tilde"] = cfg.subchannel_demand();
    d["p_s"] = subchannel_outage_prob(cfg.normalized_rate(), snr).p;
    json per_scheme = json::object();
    for (const SchemeSpec& scheme : s.schemes) {
      if (scheme.kind != SchemeKind::kChunkCoded) continue;
      const SystemConfig chunk = scheme_config(s, scheme, snr);
      const std::vector<int> caps = scheme.effective_caps(chunk);
      std::vector<int> kth;
      std::vector<double> rth;
      for (int m = 0; m < chunk.num_users(); ++m) {
        kth.push_back(k_threshold(chunk, m, caps));
        rth.push_back(r_threshold(chunk, m));
      }
      per_scheme["chunk_coded"] = {{"K_tilde", chunk.subchannel_demand()},
                                   {"caps", caps},
                                   {"K_th", kth},
                                   {"r_th", rth}};
    }
    if (!per_scheme.empty()) d["schemes"] = per_scheme;
  }
  if (c.conditional) {
    const ConditionalSpec& k = *c.conditional;
    d["conditional"] = {{"beta", 1.0 - static_cast<double>(k.k) / k.K},
                        {"R_c", k.threshold(snr)}};
    if (k.mode == RateMode::kMultiplexingGain) {
      d["conditional"]["cond_dmt"] = cond_dmt(k.K, k.k, k.rate);
    }
  }
  return d;
}

json manifest(const ExperimentConfig& c, const std::string& command,
              const std::vector<std::string>& outputs) {
  const json echo = to_json(c);
  return {{"tool", "chanalloc"},
          {"version", kVersion},
          {"command", command},
          {"config", echo},
          {"config_hash", content_hash(echo)},
          {"seed", c.seed},
          {"derived", derived_quantities(c)},
          {"outputs", outputs},
          {"timestamp", timestamp()}};
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scheme,user,gamma_db,p_out,ci_lo,ci_hi,source\n";
  for (const ResultRow& r : rows) {
    out << r.scheme << ',' << r.user << ',' << num(r.gamma_db) << ','
        << num(r.p_out) << ',' << num(r.ci_lo) << ',' << num(r.ci_hi) << ','
        << r.source << '\n';
  }
}

void write_formulas_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scheme,user,gamma_db,p_out,source,guard_violated\n";
  for (const ResultRow& r : rows) {
    out << r.scheme << ',' << r.user << ',' << num(r.gamma_db) << ','
        << num(r.p_out) << ',' << r.source << ',' << (r.guard_violated ? 1 : 0)
        << '\n';
  }
}

void write_dmt_csv(std::ostream& out, const std::vector<DmtRow>& rows) {
  out << "scheme,user,r,d\n";
  for (const DmtRow& r : rows) {
    out << r.scheme << ',' << r.user << ',' << num(r.r) << ',' << num(r.d) << '\n';
  }
}

void write_saddle_csv(std::ostream& out, const std::vector<SaddleRow>& rows) {
  out << "gamma_db,K,k,R_c,lambda_star,sigma_sq,bound,status\n";
  for (const SaddleRow& r : rows) {
    out << num(r.gamma_db) << ',' << r.K << ',' << r.k << ',' << num(r.rc) << ','
        << num(r.lambda_star) << ',' << num(r.sigma_sq) << ',' << num(r.bound)
        << ',' << r.status << '\n';
  }
}

void write_exponent_csv(std::ostream& out, const std::vector<ExponentRow>& rows) {
  out << "scheme,user,gamma_db,exponent,source\n";
  for (const ExponentRow& r : rows) {
    out << r.scheme << ',' << r.user << ',' << num(r.gamma_db) << ','
        << num(r.exponent) << ',' << r.source << '\n';
  }
}

void match_report(std::ostream& out, const BipartiteGraph& g,
                  const std::vector<int>& caps, const MatchOptions& options) {
  const FProfile f{caps};
  f.Validate(g.num_left());
  out << "graph: M=" << g.num_left() << " N=" << g.num_right()
      << " L=" << g.num_bands() << " edges=" << g.num_edges() << '\n';
  out << "caps:";
  for (int k : caps) out << ' ' << k;
  out << '\n';
  auto listing = [&](const char* label, const FMatching& m) {
    out << label << ": size=" << m.size() << '\n';
    for (int u = 0; u < m.num_users(); ++u) {
      out << "  u" << u + 1 << ": k=" << m.degree(u) << '/' << m.cap(u)
          << (m.saturated(u) ? " saturated" : " unsaturated") << " {";
      bool first = true;
      for (int n : m.subchannels_of(u)) {
        out << (first ? "" : " ") << 's' << n + 1;
        first = false;
      }
      out << "}\n";
    }
  };
  int exact_size = -1;
  if (options.exact) {
    Rng rng(options.seed);
    const FMatching m = max_f_matching(g, f, rng);
    exact_size = m.size();
    listing("exact", m);
  }
  if (options.pver2hk) {
    Rng rng(options.seed);
    Pver2hkOptions po;
    po.eta = options.eta;
    po.workers = options.workers;
    PhaseTrace trace;
    const FMatching m = pver2hk(g, f, po, rng, &trace);
    char label[64];
    std::snprintf(label, sizeof(label), "pver2hk(eta=%g)", options.eta);
    listing(label, m);
    if (exact_size >= 0) {
      const double floor_ratio =
          1.0 - std::pow(std::max(std::log(static_cast<double>(g.num_right())), 1.0),
                         -options.eta);
      out << "ratio=" << num(exact_size > 0 ? static_cast<double>(m.size()) / exact_size : 1.0)
          << " guaranteed>=" << num(floor_ratio) << '\n';
    }
    if (options.trace) write_phase_trace(out, trace);
  }
}

int run_simulate(const ExperimentConfig& c, const std::string& out,
                 std::ostream& log) {
  const std::string prefix = prefix_for(c, out);
  const std::vector<ResultRow> rows = simulate_rows(c);
  const std::string csv = prefix + ".csv";
  const std::string man = prefix + "_manifest.json";
  {
    std::ofstream f = open_out(csv);
    write_results_csv(f, rows);
  }
  {
    std::ofstream f = open_out(man);
    f << manifest(c, "simulate", {csv}).dump(2) << '\n';
  }
  log << "wrote " << csv << " (" << rows.size() << " rows) and " << man << '\n';
  return 0;
}

int run_analyze(const ExperimentConfig& c, const std::string& out,
                std::ostream& log) {
  const std::string prefix = prefix_for(c, out);
  const AnalysisTables t = analyze_tables(c);
  std::vector<std::string> files;
  auto emit = [&](const std::string& suffix, auto writer, const auto& rows) {
    if (rows.empty()) return;
    const std::string path = prefix + suffix;
    std::ofstream f = open_out(path);
    writer(f, rows);
    files.push_back(path);
  };
  emit("_formulas.csv", write_formulas_csv, t.formulas);
  emit("_dmt.csv", write_dmt_csv, t.dmt);
  emit("_saddle.csv", write_saddle_csv, t.saddle);
  emit("_exponent.csv", write_exponent_csv, t.exponent);
  const std::string man = prefix + "_analysis_manifest.json";
  {
    std::ofstream f = open_out(man);
    f << manifest(c, "analyze", files).dump(2) << '\n';
  }
  for (const std::string& p : files) log << "wrote " << p << '\n';
  log << "wrote " << man << '\n';
  return 0;
}

}  // namespace chanalloc::tools
