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

#include "chanalloc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "chanalloc/errors.hpp"

namespace chanalloc {

BipartiteGraph::BipartiteGraph(int num_left, int num_right, int num_bands)
    : num_right_(num_right),
      num_bands_(num_bands > 0 ? num_bands : std::max(num_right, 1)),
      adj_(num_left) {
  if (num_right > 0 && num_right % num_bands_ != 0) {
    throw ConfigError("num_bands must divide the number of subchannels");
  }
}

int BipartiteGraph::num_edges() const {
  int e = 0;
  for (const auto& row : adj_) e += static_cast<int>(row.size());
  return e;
}

void BipartiteGraph::add_edge(int u, int n) {
  if (u < 0 || u >= num_left() || n < 0 || n >= num_right_) {
    throw DomainError("edge endpoint out of range");
  }
  auto& row = adj_[u];
  auto it = std::lower_bound(row.begin(), row.end(), n);
  if (it == row.end() || *it != n) row.insert(it, n);
}

bool BipartiteGraph::has_edge(int u, int n) const {
  const auto& row = adj_[u];
  return std::binary_search(row.begin(), row.end(), n);
}

std::vector<std::pair<int, int>> BipartiteGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < num_left(); ++u) {
    for (int n : adj_[u]) out.emplace_back(u, n);
  }
  return out;
}

int FProfile::total() const {
  return std::accumulate(caps.begin(), caps.end(), 0);
}

int FProfile::min_cap() const {
  return caps.empty() ? 0 : *std::min_element(caps.begin(), caps.end());
}

void FProfile::Validate(int num_users) const {
  if (static_cast<int>(caps.size()) != num_users) {
    throw ConfigError("profile has " + std::to_string(caps.size()) +
                      " caps for " + std::to_string(num_users) + " users");
  }
  for (int k : caps) {
    if (k < 1) throw ConfigError("user caps must be at least 1");
  }
}

bool Matching::is_valid_for(const BipartiteGraph& g) const {
  if (static_cast<int>(left_mate.size()) != g.num_left() ||
      static_cast<int>(right_mate.size()) != g.num_right()) {
    return false;
  }
  int count = 0;
  for (int u = 0; u < g.num_left(); ++u) {
    const int n = left_mate[u];
    if (n < 0) continue;
    if (n >= g.num_right() || right_mate[n] != u || !g.has_edge(u, n)) {
      return false;
    }
    ++count;
  }
  for (int n = 0; n < g.num_right(); ++n) {
    const int u = right_mate[n];
    if (u >= 0 && left_mate[u] != n) return false;
  }
  return count == size;
}

FMatching::FMatching(int num_subchannels, std::vector<int> caps)
    : caps_(std::move(caps)),
      degree_(caps_.size(), 0),
      owner_(num_subchannels, -1) {}

void FMatching::add(int u, int n) {
  if (owner_[n] != -1) throw DomainError("subchannel already matched");
  if (degree_[u] >= caps_[u]) throw DomainError("user cap exhausted");
  owner_[n] = u;
  ++degree_[u];
  ++size_;
}

std::vector<int> FMatching::subchannels_of(int u) const {
  std::vector<int> out;
  for (int n = 0; n < num_subchannels(); ++n) {
    if (owner_[n] == u) out.push_back(n);
  }
  return out;
}

std::vector<std::pair<int, int>> FMatching::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n < num_subchannels(); ++n) {
    if (owner_[n] >= 0) out.emplace_back(owner_[n], n);
  }
  return out;
}

bool FMatching::is_valid_for(const BipartiteGraph& g) const {
  if (num_users() != g.num_left() || num_subchannels() != g.num_right()) {
    return false;
  }
  std::vector<int> deg(num_users(), 0);
  for (int n = 0; n < num_subchannels(); ++n) {
    const int u = owner_[n];
    if (u < 0) continue;
    if (!g.has_edge(u, n)) return false;
    ++deg[u];
  }
  for (int u = 0; u < num_users(); ++u) {
    if (deg[u] != degree_[u] || deg[u] > caps_[u]) return false;
  }
  return true;
}

BipartiteGraph build_rbg(const CsiMatrix& csi, int coherence_size) {
  const int bands = csi.num_bands();
  BipartiteGraph g(csi.num_users(), bands * coherence_size, bands);
  for (int m = 0; m < csi.num_users(); ++m) {
    for (int l = 0; l < bands; ++l) {
      if (!csi.at(m, l)) continue;
      for (int j = 0; j < coherence_size; ++j) {
        g.add_edge(m, l * coherence_size + j);
      }
    }
  }
  return g;
}

BipartiteGraph sample_rbg(double p_s, int num_users, int num_bands,
                          int coherence_size, Rng& rng) {
  if (!(p_s >= 0.0 && p_s <= 1.0)) throw DomainError("p_s outside [0, 1]");
  CsiMatrix csi(num_users, num_bands);
  for (int m = 0; m < num_users; ++m) {
    for (int l = 0; l < num_bands; ++l) csi.set(m, l, rng.uniform() >= p_s);
  }
  return build_rbg(csi, coherence_size);
}

std::vector<int> identity_clone_order(const FProfile& f) {
  std::vector<int> order;
  order.reserve(f.total());
  for (int m = 0; m < f.num_users(); ++m) {
    order.insert(order.end(), f.caps[m], m);
  }
  return order;
}

std::vector<int> rotated_clone_order(const FProfile& f, Rng& rng) {
  const int groups = f.min_cap();
  if (groups <= 0) return identity_clone_order(f);
  std::vector<std::vector<int>> bucket(groups);
  for (int m = 0; m < f.num_users(); ++m) {
    for (int j = 0; j < f.caps[m]; ++j) bucket[j % groups].push_back(m);
  }
  const int shift = static_cast<int>(rng.below(groups));
  std::vector<int> order;
  order.reserve(f.total());
  for (int i = 0; i < groups; ++i) {
    auto& b = bucket[(i + shift) % groups];
    shuffle(std::span<int>(b), rng);
    order.insert(order.end(), b.begin(), b.end());
  }
  return order;
}

ExpandedGraph expand_vertices(const BipartiteGraph& g,
                              std::span<const int> clone_owner) {
  ExpandedGraph e{BipartiteGraph(static_cast<int>(clone_owner.size()),
                                 g.num_right(), g.num_bands()),
                  std::vector<int>(clone_owner.begin(), clone_owner.end())};
  for (int c = 0; c < static_cast<int>(clone_owner.size()); ++c) {
    for (int n : g.neighbors(clone_owner[c])) e.graph.add_edge(c, n);
  }
  return e;
}

ExpandedGraph expand_vertices(const BipartiteGraph& g, const FProfile& f) {
  f.Validate(g.num_left());
  return expand_vertices(g, identity_clone_order(f));
}

FMatching collapse(const ExpandedGraph& expanded, const Matching& m,
                   const FProfile& f) {
  FMatching out(expanded.graph.num_right(), f.caps);
  for (int n = 0; n < expanded.graph.num_right(); ++n) {
    const int c = m.right_mate[n];
    if (c >= 0) out.add(expanded.owner[c], n);
  }
  return out;
}

namespace {

FMatching max_f_matching_ordered(const BipartiteGraph& g, const FProfile& f,
                                 const std::vector<int>& order) {
  const ExpandedGraph e = expand_vertices(g, order);
  return collapse(e, hopcroft_karp(e.graph), f);
}

Allocation complete_impl(const FMatching& m, std::span<const int> demands,
                         Rng& rng) {
  const int users = m.num_users();
  if (static_cast<int>(demands.size()) != users) {
    throw ConfigError("demand vector size does not match the user count");
  }
  Allocation a;
  a.sets.resize(users);
  a.matched.resize(users);
  std::vector<int> unmatched;
  for (int n = 0; n < m.num_subchannels(); ++n) {
    const int u = m.owner(n);
    if (u >= 0) {
      a.sets[u].push_back(n);
    } else {
      unmatched.push_back(n);
    }
  }
  shuffle(std::span<int>(unmatched), rng);
  std::size_t next = 0;
  for (int u = 0; u < users; ++u) {
    a.matched[u] = m.degree(u);
    const int extra = demands[u] - m.degree(u);
    if (extra < 0) throw DomainError("matched count exceeds demand");
    for (int i = 0; i < extra; ++i) a.sets[u].push_back(unmatched[next++]);
    std::sort(a.sets[u].begin(), a.sets[u].end());
  }
  return a;
}

}  // namespace

FMatching max_f_matching(const BipartiteGraph& g, const FProfile& f,
                         Rng& rng) {
  f.Validate(g.num_left());
  return max_f_matching_ordered(g, f, rotated_clone_order(f, rng));
}

FMatching max_f_matching(const BipartiteGraph& g, const FProfile& f) {
  f.Validate(g.num_left());
  return max_f_matching_ordered(g, f, identity_clone_order(f));
}

Allocation complete_allocation(const FMatching& m,
                               std::span<const int> demands, Rng& rng) {
  const int total = std::accumulate(demands.begin(), demands.end(), 0);
  if (total != m.num_subchannels()) {
    throw ConfigError("demands sum to " + std::to_string(total) +
                      ", expected " + std::to_string(m.num_subchannels()));
  }
  return complete_impl(m, demands, rng);
}

Allocation complete_partial_allocation(const FMatching& m,
                                       std::span<const int> demands,
                                       Rng& rng) {
  const int total = std::accumulate(demands.begin(), demands.end(), 0);
  if (total > m.num_subchannels()) {
    throw ConfigError("demands exceed the number of subchannels");
  }
  return complete_impl(m, demands, rng);
}

}  // namespace chanalloc
