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


#ifndef CHANALLOC_TOOLS_COMMANDS_HPP_
#define CHANALLOC_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chanalloc/graph.hpp"
#include "experiment.hpp"
#include "json.hpp"

namespace chanalloc::tools {

struct ResultRow {
  std::string scheme;
  int user = 0;  // 1-based
  double gamma_db = 0.0;
  double p_out = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::string source;
  bool guard_violated = false;
};

struct DmtRow {
  std::string scheme;
  int user = 0;
  double r = 0.0;
  double d = 0.0;
};

struct SaddleRow {
  double gamma_db = 0.0;
  int K = 0;
  int k = 0;
  double rc = 0.0;
  double lambda_star = 0.0;
  double sigma_sq = 0.0;
  double bound = 0.0;
  std::string status;
};

struct ExponentRow {
  std::string scheme;
  int user = 0;
  double gamma_db = 0.0;
  double exponent = 0.0;
  std::string source;
};

struct AnalysisTables {
  std::vector<ResultRow> formulas;
  std::vector<DmtRow> dmt;
  std::vector<SaddleRow> saddle;
  std::vector<ExponentRow> exponent;
};

// Monte Carlo results with formula overlays and asymptotes.
std::vector<ResultRow> simulate_rows(const ExperimentConfig& c);
AnalysisTables analyze_tables(const ExperimentConfig& c);

// N_c, R_s, R_c, K~_m, K_m^th and r_m^th at the first grid point.
nlohmann::json derived_quantities(const ExperimentConfig& c);
nlohmann::json manifest(const ExperimentConfig& c, const std::string& command,
                        const std::vector<std::string>& outputs);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_formulas_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_dmt_csv(std::ostream& out, const std::vector<DmtRow>& rows);
void write_saddle_csv(std::ostream& out, const std::vector<SaddleRow>& rows);
void write_exponent_csv(std::ostream& out, const std::vector<ExponentRow>& rows);

struct MatchOptions {
  bool exact = true;
  bool pver2hk = false;
  double eta = 2.0;
  std::uint64_t seed = 1;
  bool trace = false;
  int workers = 1;
};

void match_report(std::ostream& out, const BipartiteGraph& g,
                  const std::vector<int>& caps, const MatchOptions& options);

// Entry points used by main; return the process exit code. Files are
// written under the prefix `out` (or c.output when out is empty).
int run_simulate(const ExperimentConfig& c, const std::string& out,
                 std::ostream& log);
int run_analyze(const ExperimentConfig& c, const std::string& out,
                std::ostream& log);

}  // namespace chanalloc::tools

#endif  // CHANALLOC_TOOLS_COMMANDS_HPP_
