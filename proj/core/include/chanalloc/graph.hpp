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

#ifndef CHANALLOC_GRAPH_HPP_
#define CHANALLOC_GRAPH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "chanalloc/channel.hpp"
#include "chanalloc/random.hpp"

namespace chanalloc {

// Left vertices are users (or user clones), right vertices are subchannels.
// Adjacency lists are kept sorted by subchannel index.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(int num_left, int num_right, int num_bands = 0);

  int num_left() const { return static_cast<int>(adj_.size()); }
  int num_right() const { return num_right_; }
  int num_bands() const { return num_bands_; }
  int band_of(int n) const { return n / (num_right_ / num_bands_); }
  int num_edges() const;

  // Inserts (u, n) keeping the list sorted; duplicates are ignored.
  void add_edge(int u, int n);
  bool has_edge(int u, int n) const;
  std::span<const int> neighbors(int u) const { return adj_[u]; }
  int degree(int u) const { return static_cast<int>(adj_[u].size()); }

  std::vector<std::pair<int, int>> edges() const;

  friend bool operator==(const BipartiteGraph&,
                         const BipartiteGraph&) = default;

 private:
  int num_right_ = 0;
  int num_bands_ = 0;
  std::vector<std::vector<int>> adj_;
};

// Degree caps: f(u_m) = caps[m], f(s_n) = 1.
struct FProfile {
  std::vector<int> caps;

  int num_users() const { return static_cast<int>(caps.size()); }
  int total() const;
  int min_cap() const;
  void Validate(int num_users) const;
};

// Unit-capacity matching on a bipartite graph. -1 marks a free vertex.
struct Matching {
  std::vector<int> left_mate;
  std::vector<int> right_mate;
  int size = 0;

  Matching() = default;
  Matching(int num_left, int num_right)
      : left_mate(num_left, -1), right_mate(num_right, -1) {}

  bool is_valid_for(const BipartiteGraph& g) const;
};

// Edge subset with deg(u_m) <= caps[m] and every subchannel used at most once.
class FMatching {
 public:
  FMatching() = default;
  FMatching(int num_subchannels, std::vector<int> caps);

  int num_users() const { return static_cast<int>(caps_.size()); }
  int num_subchannels() const { return static_cast<int>(owner_.size()); }
  // Throws DomainError if the cap of u or the subchannel is exhausted.
  void add(int u, int n);
  int owner(int n) const { return owner_[n]; }
  int degree(int u) const { return degree_[u]; }
  int cap(int u) const { return caps_[u]; }
  bool saturated(int u) const { return degree_[u] == caps_[u]; }
  int size() const { return size_; }
  const std::vector<int>& caps() const { return caps_; }
  std::vector<int> subchannels_of(int u) const;
  std::vector<std::pair<int, int>> edges() const;

  // Every edge exists in g and every cap holds.
  bool is_valid_for(const BipartiteGraph& g) const;

 private:
  std::vector<int> caps_;
  std::vector<int> degree_;
  std::vector<int> owner_;
  int size_ = 0;
};

// Per-user subchannel sets S_m and matched (non-outage) counts k_m.
struct Allocation {
  std::vector<std::vector<int>> sets;
  std::vector<int> matched;
};

// Left vertices are clones; owner[c] is the user that clone c stands for.
struct ExpandedGraph {
  BipartiteGraph graph;
  std::vector<int> owner;
};

// Edge (u_m, s_n) iff q(m, band(n)) = 1; all N_c subchannels of a band share
// the neighbourhood.
BipartiteGraph build_rbg(const CsiMatrix& csi, int coherence_size);

// Each (user, band) block is present with probability 1 - p_s.
BipartiteGraph sample_rbg(double p_s, int num_users, int num_bands,
                          int coherence_size, Rng& rng);

// Clones of user m are consecutive: m's clones occupy
// [sum_{i<m} K_i, sum_{i<=m} K_i).
ExpandedGraph expand_vertices(const BipartiteGraph& g, const FProfile& f);
// Clones are laid out in the given order of owners (each user must appear
// caps[m] times).
ExpandedGraph expand_vertices(const BipartiteGraph& g,
                              std::span<const int> clone_owner);

// Fairness pre-pass: round-robin striping of clones into min(K) groups, a
// uniform cyclic shift of the groups and a uniform shuffle inside each.
std::vector<int> rotated_clone_order(const FProfile& f, Rng& rng);
// Clone order without rotation (users in index order).
std::vector<int> identity_clone_order(const FProfile& f);

struct HopcroftKarpStats {
  int phases = 0;
};

// Maximum-cardinality matching. Free left vertices are processed in index
// order and neighbours in adjacency order.
Matching hopcroft_karp(const BipartiteGraph& g,
                       HopcroftKarpStats* stats = nullptr);

// True iff some augmenting path exists relative to m.
bool has_augmenting_path(const BipartiteGraph& g, const Matching& m);

// Folds a matching of an expanded graph back to an f-matching.
FMatching collapse(const ExpandedGraph& expanded, const Matching& m,
                   const FProfile& f);

// Maximum f-matching via expansion + Hopcroft-Karp with the fairness
// rotation drawn from rng.
FMatching max_f_matching(const BipartiteGraph& g, const FProfile& f, Rng& rng);
// Same without rotation.
FMatching max_f_matching(const BipartiteGraph& g, const FProfile& f);

// Step two of the allocation: user m receives demands[m] - k_m extra
// subchannels taken from one uniform permutation of the unmatched subchannels,
// consumed in user order. Requires sum(demands) == N.
Allocation complete_allocation(const FMatching& m,
                               std::span<const int> demands, Rng& rng);
// As above, but sum(demands) may be below N; leftovers stay unallocated.
Allocation complete_partial_allocation(const FMatching& m,
                                       std::span<const int> demands, Rng& rng);

// Literal Hall-type condition: some X containing u_m with
// sum_X f(u) > |N(X)|. Necessary for u_m to be unsaturated in some maximum
// f-matching, not sufficient.
std::optional<std::vector<int>> hall_violation(const BipartiteGraph& g,
                                               const FProfile& f, int m,
                                               int max_users = 12);

// Returns X containing u_m of maximum deficiency sum_X f(u) - |N(X)| when
// that deficiency is positive and strictly larger than the deficiency of
// every set avoiding u_m. This happens iff some maximum f-matching leaves u_m
// unsaturated. Throws DomainError when M > max_users.
std::optional<std::vector<int>> deficiency_witness(const BipartiteGraph& g,
                                                   const FProfile& f, int m,
                                                   int max_users = 12);

// True iff every maximum f-matching saturates u_m.
bool always_saturated(const BipartiteGraph& g, const FProfile& f, int m);

struct EdgeThreshold {
  int k_threshold = 0;  // K_m^th
  int min_edges = 0;    // |E| that guarantees saturation of u_m
  bool low_branch = false;  // K_m <= K_m^th
};

// K_m^th = N + 1 - ceil(M / (M-1) * K_m^sum) where K_m^sum sums the caps of
// the other users.
int k_threshold(int num_users, int num_subchannels, int others_sum);
EdgeThreshold edge_count_threshold(int num_users, int num_subchannels,
                                   const FProfile& f, int m);

// Text format: "M N L" header followed by one "m n" line per edge, 1-based.
// Lines starting with '#' are comments.
void write_graph(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph read_graph(std::istream& in);

}  // namespace chanalloc

#endif  // CHANALLOC_GRAPH_HPP_
