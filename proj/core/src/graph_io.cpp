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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "chanalloc/errors.hpp"
#include "chanalloc/graph.hpp"

namespace chanalloc {

void write_graph(std::ostream& out, const BipartiteGraph& g) {
  out << g.num_left() << ' ' << g.num_right() << ' ' << g.num_bands() << '\n';
  for (auto [u, n] : g.edges()) out << u + 1 << ' ' << n + 1 << '\n';
}

BipartiteGraph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw ConfigError("graph file: missing 'M N L' header");
  int users = 0, subchannels = 0, bands = 0;
  {
    std::istringstream head(line);
    if (!(head >> users >> subchannels >> bands) || users < 1 ||
        subchannels < 1 || bands < 1 || subchannels % bands != 0) {
      throw ConfigError("graph file line " + std::to_string(line_no) +
                        ": bad header '" + line + "'");
    }
  }
  BipartiteGraph g(users, subchannels, bands);
  while (next_line()) {
    std::istringstream row(line);
    int u = 0, n = 0;
    std::string extra;
    if (!(row >> u >> n) || (row >> extra) || u < 1 || u > users || n < 1 ||
        n > subchannels) {
      throw ConfigError("graph file line " + std::to_string(line_no) +
                        ": bad edge '" + line + "'");
    }
    g.add_edge(u - 1, n - 1);
  }
  return g;
}

}  // namespace chanalloc
