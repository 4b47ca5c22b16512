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

#include <limits>
#include <vector>

#include "chanalloc/graph.hpp"

namespace chanalloc {
namespace {

constexpr int kInf = std::numeric_limits<int>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : g_(g),
        m_(g.num_left(), g.num_right()),
        dist_(g.num_left()),
        next_(g.num_left()) {}

  Matching Run(HopcroftKarpStats* stats) {
    int phases = 0;
    while (Bfs()) {
      ++phases;
      for (int u = 0; u < g_.num_left(); ++u) next_[u] = 0;
      for (int u = 0; u < g_.num_left(); ++u) {
        if (m_.left_mate[u] == -1 && Dfs(u)) ++m_.size;
      }
    }
    if (stats != nullptr) stats->phases = phases + 1;
    return std::move(m_);
  }

 private:
  // Layers left vertices by alternating distance from the free ones.
  bool Bfs() {
    std::vector<int> queue;
    queue.reserve(g_.num_left());
    for (int u = 0; u < g_.num_left(); ++u) {
      if (m_.left_mate[u] == -1) {
        dist_[u] = 0;
        queue.push_back(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int n : g_.neighbors(u)) {
        const int w = m_.right_mate[n];
        if (w == -1) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  }

  bool Dfs(int u) {
    const auto nbrs = g_.neighbors(u);
    for (int& i = next_[u]; i < static_cast<int>(nbrs.size()); ++i) {
      const int n = nbrs[i];
      const int w = m_.right_mate[n];
      if (w == -1 || (dist_[w] == dist_[u] + 1 && Dfs(w))) {
        m_.left_mate[u] = n;
        m_.right_mate[n] = u;
        ++i;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const BipartiteGraph& g_;
  Matching m_;
  std::vector<int> dist_;
  std::vector<int> next_;
};

}  // namespace

Matching hopcroft_karp(const BipartiteGraph& g, HopcroftKarpStats* stats) {
  return HopcroftKarp(g).Run(stats);
}

bool has_augmenting_path(const BipartiteGraph& g, const Matching& m) {
  std::vector<char> seen(g.num_left(), 0);
  std::vector<int> queue;
  for (int u = 0; u < g.num_left(); ++u) {
    if (m.left_mate[u] == -1) {
      seen[u] = 1;
      queue.push_back(u);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int n : g.neighbors(queue[head])) {
      const int w = m.right_mate[n];
      if (w == -1) return true;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace chanalloc
