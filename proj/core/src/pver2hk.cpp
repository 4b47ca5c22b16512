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

#include "chanalloc/pver2hk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "chanalloc/errors.hpp"

namespace chanalloc {
namespace {

// Runs fn(begin, end) over `workers` contiguous slices of [0, n).
template <typename Fn>
void for_slices(std::size_t n, int workers, Fn fn) {
  const std::size_t parts =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                              1, std::max<std::size_t>(n, 1));
  if (parts == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t begin = n * p / parts;
    const std::size_t end = n * (p + 1) / parts;
    pool.emplace_back([=, &fn] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

DirectedGraph orient(const BipartiteGraph& g, const Matching& m) {
  DirectedGraph d;
  d.num_left = g.num_left();
  d.num_right = g.num_right();
  const int vertices = d.num_left + d.num_right;
  d.out.assign(vertices, {});
  d.in.assign(vertices, {});
  for (int u = 0; u < g.num_left(); ++u) {
    for (int n : g.neighbors(u)) {
      const int r = d.right_id(n);
      if (m.left_mate[u] == n) {
        d.out[u].push_back(r);
        d.in[r].push_back(u);
      } else {
        d.out[r].push_back(u);
        d.in[u].push_back(r);
      }
    }
  }
  return d;
}

std::vector<int> free_left(const DirectedGraph& d) {
  std::vector<int> out;
  for (int u = 0; u < d.num_left; ++u) {
    if (d.out[u].empty()) out.push_back(u);
  }
  return out;
}

std::vector<int> free_right(const DirectedGraph& d) {
  std::vector<int> out;
  for (int n = 0; n < d.num_right; ++n) {
    if (d.in[d.right_id(n)].empty()) out.push_back(d.right_id(n));
  }
  return out;
}

double depth_cap(int num_subchannels, double eta) {
  const double base = std::max(std::log(static_cast<double>(num_subchannels)), 1.0);
  return 2.0 * std::pow(base, eta) + 1.0;
}

LayeredGraph pbfs(const DirectedGraph& d, double max_depth, int workers) {
  const int vertices = d.num_left + d.num_right;
  LayeredGraph lg;
  lg.next.assign(vertices, {});
  std::vector<int> layer_of(vertices, -1);
  std::vector<int> frontier = free_left(d);
  for (int v : frontier) layer_of[v] = 0;
  lg.layers.push_back(frontier);

  for (int depth = 0;; ++depth) {
    if (frontier.empty()) {
      lg.status = LayerStatus::kNoPath;
      return lg;
    }
    if (depth + 1 > max_depth) {
      lg.status = LayerStatus::kDepthCapped;
      return lg;
    }
    // Candidate successors of each frontier vertex against a snapshot of the
    // visited set; the merge below is sequential in frontier order.
    std::vector<std::vector<int>> cand(frontier.size());
    for_slices(frontier.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        for (int w : d.in[frontier[i]]) {
          if (layer_of[w] == -1) cand[i].push_back(w);
        }
      }
    });
    std::vector<int> layer;
    for (const auto& c : cand) {
      for (int w : c) {
        if (layer_of[w] == -1) {
          layer_of[w] = depth + 1;
          layer.push_back(w);
        }
      }
    }
    bool found = false;
    if (depth % 2 == 0) {
      std::vector<int> sinks;
      for (int w : layer) {
        if (d.in[w].empty()) sinks.push_back(w);
      }
      if (!sinks.empty()) {
        found = true;
        for (int w : layer) {
          if (!d.in[w].empty()) layer_of[w] = -1;
        }
        layer = std::move(sinks);
      }
    }
    for_slices(frontier.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const int v = frontier[i];
        for (int w : d.in[v]) {
          if (layer_of[w] == depth + 1) lg.next[v].push_back(w);
        }
      }
    });
    lg.layers.push_back(layer);
    frontier = std::move(layer);
    if (found) {
      lg.status = LayerStatus::kFound;
      lg.length = depth + 1;
      return lg;
    }
  }
}

std::vector<std::vector<int>> pvdp(const LayeredGraph& layered,
                                   int num_vertices, int workers) {
  std::vector<std::vector<int>> paths;
  if (!layered.finite()) return paths;
  const int last = layered.length;
  std::vector<char> is_sink(num_vertices, 0);
  for (int v : layered.layers[last]) is_sink[v] = 1;
  std::vector<char> locked(num_vertices, 0);
  std::vector<char> dead(num_vertices, 0);

  struct Proposal {
    std::vector<int> path;
    std::vector<int> failed;
  };
  // Greedy DFS from one source against fixed lock/dead snapshots. Pure in
  // its inputs, so proposals do not depend on how sources are partitioned.
  auto propose = [&](int source) {
    Proposal p;
    std::vector<int> stack{source};
    std::vector<std::size_t> cursor{0};
    std::vector<char> local(num_vertices, 0);
    while (!stack.empty()) {
      const int v = stack.back();
      if (is_sink[v]) {
        p.path = stack;
        return p;
      }
      const auto& succ = layered.next[v];
      std::size_t& i = cursor.back();
      while (i < succ.size() &&
             (locked[succ[i]] || dead[succ[i]] || local[succ[i]])) {
        ++i;
      }
      if (i == succ.size()) {
        local[v] = 1;
        p.failed.push_back(v);
        stack.pop_back();
        cursor.pop_back();
      } else {
        stack.push_back(succ[i++]);
        cursor.push_back(0);
      }
    }
    return p;
  };

  std::vector<int> pending;
  for (int s : layered.layers[0]) {
    if (!layered.next[s].empty() || is_sink[s]) pending.push_back(s);
  }
  while (!pending.empty()) {
    std::vector<Proposal> round(pending.size());
    for_slices(pending.size(), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) round[i] = propose(pending[i]);
    });
    std::vector<int> retry;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      Proposal& p = round[i];
      for (int v : p.failed) dead[v] = 1;
      if (p.path.empty()) continue;
      const bool clash = std::any_of(p.path.begin(), p.path.end(),
                                     [&](int v) { return locked[v] != 0; });
      if (clash) {
        retry.push_back(pending[i]);
        continue;
      }
      for (int v : p.path) locked[v] = 1;
      paths.push_back(std::move(p.path));
    }
    pending = std::move(retry);
  }
  return paths;
}

Matching pa(const std::vector<std::vector<int>>& paths, const Matching& m,
            const BipartiteGraph& g) {
  const int nl = g.num_left();
  std::vector<char> used(nl + g.num_right(), 0);
  for (const auto& p : paths) {
    if (p.size() < 2 || p.size() % 2 != 0) {
      throw DomainError("augmenting path must have odd length");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int v = p[i];
      const bool want_left = i % 2 == 0;
      if (v < 0 || v >= nl + g.num_right() || (v < nl) != want_left) {
        throw DomainError("path does not alternate sides");
      }
      if (used[v]) throw DomainError("paths are not vertex-disjoint");
      used[v] = 1;
    }
    if (m.left_mate[p.front()] != -1 || m.right_mate[p.back() - nl] != -1) {
      throw DomainError("path endpoints must be free");
    }
    for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
      const int u = p[i];
      const int n = p[i + 1] - nl;
      if (!g.has_edge(u, n) || m.left_mate[u] == n) {
        throw DomainError("path uses a missing or matched edge");
      }
      if (i + 2 < p.size() && m.right_mate[n] != p[i + 2]) {
        throw DomainError("path uses an unmatched edge where a matched one is required");
      }
    }
  }
  Matching out = m;
  for (const auto& p : paths) {
    for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
      const int u = p[i];
      const int n = p[i + 1] - nl;
      out.left_mate[u] = n;
      out.right_mate[n] = u;
    }
    ++out.size;
  }
  return out;
}

void write_phase_trace(std::ostream& out, const PhaseTrace& trace) {
  out << "phase,l,paths,matching_size\n";
  for (const auto& r : trace) {
    out << r.phase << ',' << r.length << ',' << r.paths << ','
        << r.matching_size << '\n';
  }
}

Matching pver2hk_unit(const BipartiteGraph& g, const Pver2hkOptions& options,
                      PhaseTrace* trace) {
  if (g.num_right() < 2) throw DomainError("pver2hk requires N >= 2");
  if (!options.uncapped && !(options.eta >= 1.0)) {
    throw DomainError("pver2hk requires eta >= 1");
  }
  const double cap = options.uncapped
                         ? std::numeric_limits<double>::infinity()
                         : depth_cap(g.num_right(), options.eta);
  Matching m(g.num_left(), g.num_right());
  for (int phase = 1;; ++phase) {
    const DirectedGraph d = orient(g, m);
    const LayeredGraph lg = pbfs(d, cap, options.workers);
    if (!lg.finite()) break;
    const auto paths = pvdp(lg, d.num_left + d.num_right, options.workers);
    if (paths.empty()) break;
    m = pa(paths, m, g);
    if (trace != nullptr) {
      trace->push_back({phase, lg.length, static_cast<int>(paths.size()), m.size});
    }
  }
  return m;
}

FMatching pver2hk(const BipartiteGraph& g, const FProfile& f,
                  const Pver2hkOptions& options, Rng& rng, PhaseTrace* trace) {
  f.Validate(g.num_left());
  const ExpandedGraph e = expand_vertices(g, rotated_clone_order(f, rng));
  return collapse(e, pver2hk_unit(e.graph, options, trace), f);
}

}  // namespace chanalloc
