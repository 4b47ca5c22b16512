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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chanalloc/graph.hpp"
#include "commands.hpp"
#include "experiment.hpp"

namespace {

using chanalloc::ConfigError;
using chanalloc::tools::ExperimentConfig;
using chanalloc::tools::FieldError;

constexpr int kConfigExit = 2;

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> eta;
  bool paired = false;
  bool pver2hk = false;
  bool print_config = false;
  std::string out;
};

void add_experiment_options(CLI::App* cmd, ExperimentArgs* a) {
  auto* cfg = cmd->add_option("--config", a->config, "experiment JSON file");
  auto* pre = cmd->add_option("--preset", a->preset, "built-in experiment");
  cfg->excludes(pre);
  cmd->add_option("--trials", a->trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", a->seed, "random seed");
  cmd->add_option("--workers", a->workers, "worker threads");
  cmd->add_option("--eta", a->eta, "PVER2HK depth exponent");
  cmd->add_flag("--paired", a->paired, "share channel draws across schemes");
  cmd->add_flag("--pver2hk", a->pver2hk, "allocate with PVER2HK");
  cmd->add_flag("--print-config", a->print_config, "print the resolved config and exit");
  cmd->add_option("--out", a->out, "output path prefix");
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

// Loads and validates the experiment, applying command-line overrides.
ExperimentConfig load(const ExperimentArgs& a) {
  ExperimentConfig c;
  if (!a.preset.empty()) {
    c = chanalloc::tools::preset(a.preset);
  } else if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ConfigError("cannot open " + a.config);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(a.config + ":" + std::to_string(line_of_byte(text, e.byte)) +
                        ": invalid JSON: " + e.what());
    }
    try {
      c = chanalloc::tools::parse_experiment(j);
    } catch (const FieldError& e) {
      const std::string& ptr = e.pointer();
      const std::string key = ptr.substr(ptr.find_last_of('/') + 1);
      const int line = chanalloc::tools::line_of_key(text, key);
      throw ConfigError(a.config + ":" + (line > 0 ? std::to_string(line) : "?") +
                        ": " + e.what());
    }
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (a.trials) c.trials = *a.trials;
  if (a.seed) c.seed = *a.seed;
  if (a.workers) c.workers = *a.workers;
  if (a.eta) c.flags.eta = *a.eta;
  if (a.paired) c.flags.paired = true;
  if (a.pver2hk) c.flags.pver2hk = true;
  // Re-validate the overridden config through its echo.
  return chanalloc::tools::parse_experiment(chanalloc::tools::to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded f-matching channel allocation laboratory"};
  app.require_subcommand(1);

  ExperimentArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep with formula overlays");
  add_experiment_options(sim, &sim_args);

  ExperimentArgs ana_args;
  auto* ana = app.add_subcommand("analyze", "closed-form outage, saddle and DMT tables");
  add_experiment_options(ana, &ana_args);

  std::string graph_file;
  std::vector<int> caps;
  chanalloc::tools::MatchOptions mo;
  bool no_exact = false;
  auto* match = app.add_subcommand("match", "maximum f-matching on a graph file");
  match->add_option("--graph", graph_file, "graph file")->required();
  match->add_option("--caps", caps, "per-user caps K_m")->delimiter(',');
  match->add_flag("--pver2hk", mo.pver2hk, "also run PVER2HK");
  match->add_flag("--no-exact", no_exact, "skip the exact matching");
  match->add_option("--eta", mo.eta, "PVER2HK depth exponent");
  match->add_option("--seed", mo.seed, "rotation seed");
  match->add_option("--workers", mo.workers, "worker threads");
  match->add_flag("--trace", mo.trace, "print the PVER2HK phase trace");

  app.add_subcommand("presets", "list built-in experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      for (const std::string& n : chanalloc::tools::preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (app.got_subcommand(match)) {
      std::ifstream in(graph_file);
      if (!in) throw ConfigError("cannot open " + graph_file);
      const chanalloc::BipartiteGraph g = chanalloc::read_graph(in);
      if (caps.empty()) caps.assign(g.num_left(), 1);
      if (static_cast<int>(caps.size()) != g.num_left()) {
        throw ConfigError("--caps needs one value per user");
      }
      mo.exact = !no_exact;
      if (!mo.exact && !mo.pver2hk) throw ConfigError("nothing to run");
      chanalloc::tools::match_report(std::cout, g, caps, mo);
      return 0;
    }
    const bool is_sim = app.got_subcommand(sim);
    const ExperimentArgs& a = is_sim ? sim_args : ana_args;
    const ExperimentConfig c = load(a);
    if (a.print_config) {
      std::cout << chanalloc::tools::to_json(c).dump(2) << '\n';
      return 0;
    }
    return is_sim ? chanalloc::tools::run_simulate(c, a.out, std::cerr)
                  : chanalloc::tools::run_analyze(c, a.out, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
