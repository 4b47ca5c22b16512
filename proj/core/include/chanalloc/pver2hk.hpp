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

#ifndef CHANALLOC_PVER2HK_HPP_
#define CHANALLOC_PVER2HK_HPP_

#include <iosfwd>
#include <vector>

#include "chanalloc/graph.hpp"
#include "chanalloc/random.hpp"

namespace chanalloc {

// Oriented expanded graph. Vertex ids: left u -> u, right n -> num_left + n.
// Matched edges point left -> right, all other edges right -> left.
struct DirectedGraph {
  int num_left = 0;
  int num_right = 0;
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;

  int right_id(int n) const { return num_left + n; }
  bool is_left(int v) const { return v < num_left; }
};

DirectedGraph orient(const BipartiteGraph& g, const Matching& m);

enum class LayerStatus { kFound, kNoPath, kDepthCapped };

// Layered graph of shortest alternating paths. layers[0] holds the free left
// vertices, the last layer only free right vertices. next[v] lists the
// successors of v in the following layer. Successor arcs run against the
// orientation, so every path read backwards is a walk in the DirectedGraph
// starting at a free subchannel.
struct LayeredGraph {
  std::vector<std::vector<int>> layers;
  std::vector<std::vector<int>> next;
  LayerStatus status = LayerStatus::kNoPath;
  int length = 0;  // number of edges on each path; odd when kFound

  bool finite() const { return status == LayerStatus::kFound; }
};

// l* = 2 * max(ln N, 1)^eta + 1.
double depth_cap(int num_subchannels, double eta);

// Free vertices read off the orientation: a left vertex is free when it has
// no outgoing (matched) arc, a right vertex when it has no incoming one.
std::vector<int> free_left(const DirectedGraph& d);
std::vector<int> free_right(const DirectedGraph& d);

// Frontier-synchronous BFS from the free left vertices, stopping at the first
// layer that touches a free right vertex. kDepthCapped when that layer would
// lie deeper than max_depth. Frontiers are split into `workers` contiguous
// parts; the result does not depend on the split.
LayeredGraph pbfs(const DirectedGraph& d, double max_depth, int workers = 1);

// Maximal set of vertex-disjoint source-to-sink paths of the layered graph,
// each listed from layer 0 to the final layer.
std::vector<std::vector<int>> pvdp(const LayeredGraph& layered,
                                   int num_vertices, int workers = 1);

// Symmetric difference with vertex-disjoint augmenting paths. Throws
// DomainError when paths overlap or do not augment m.
Matching pa(const std::vector<std::vector<int>>& paths, const Matching& m,
            const BipartiteGraph& g);

struct PhaseRecord {
  int phase = 0;
  int length = 0;
  int paths = 0;
  int matching_size = 0;
};
using PhaseTrace = std::vector<PhaseRecord>;

void write_phase_trace(std::ostream& out, const PhaseTrace& trace);

struct Pver2hkOptions {
  double eta = 2.0;
  int workers = 1;
  bool uncapped = false;  // ignore l*; runs to an exact maximum
};

// Phase-capped matching on a unit-capacity graph.
Matching pver2hk_unit(const BipartiteGraph& g, const Pver2hkOptions& options,
                      PhaseTrace* trace = nullptr);

// Approximate maximum f-matching: rotation, expansion, then phases of
// orient / pbfs / pvdp / pa until no path or the depth exceeds l*.
FMatching pver2hk(const BipartiteGraph& g, const FProfile& f,
                  const Pver2hkOptions& options, Rng& rng,
                  PhaseTrace* trace = nullptr);

}  // namespace chanalloc

#endif  // CHANALLOC_PVER2HK_HPP_
