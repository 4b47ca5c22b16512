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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>

#include "chanalloc/errors.hpp"
#include "chanalloc/graph.hpp"

namespace chanalloc {
namespace {

using Words = std::vector<std::uint64_t>;

struct SubsetScan {
  // deficiency[mask] = sum_X f(u) - |N(X)| for the user subset mask.
  std::vector<int> deficiency;
};

SubsetScan scan_subsets(const BipartiteGraph& g, const FProfile& f,
                        int max_users) {
  const int users = g.num_left();
  if (users > max_users) {
    throw DomainError("subset enumeration limited to " +
                      std::to_string(max_users) + " users");
  }
  f.Validate(users);
  const int words = (g.num_right() + 63) / 64;
  std::vector<Words> row(users, Words(words, 0));
  for (int u = 0; u < users; ++u) {
    for (int n : g.neighbors(u)) row[u][n / 64] |= std::uint64_t{1} << (n % 64);
  }
  const std::size_t count = std::size_t{1} << users;
  SubsetScan scan;
  scan.deficiency.assign(count, 0);
  std::vector<Words> nbr(count, Words(words, 0));
  std::vector<int> cap_sum(count, 0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    const std::size_t rest = mask & (mask - 1);
    int size = 0;
    for (int w = 0; w < words; ++w) {
      nbr[mask][w] = nbr[rest][w] | row[low][w];
      size += std::popcount(nbr[mask][w]);
    }
    cap_sum[mask] = cap_sum[rest] + f.caps[low];
    scan.deficiency[mask] = cap_sum[mask] - size;
  }
  return scan;
}

std::vector<int> members(std::size_t mask) {
  std::vector<int> out;
  for (int u = 0; mask != 0; ++u, mask >>= 1) {
    if (mask & 1) out.push_back(u);
  }
  return out;
}

}  // namespace

std::optional<std::vector<int>> hall_violation(const BipartiteGraph& g,
                                               const FProfile& f, int m,
                                               int max_users) {
  const SubsetScan scan = scan_subsets(g, f, max_users);
  const std::size_t bit = std::size_t{1} << m;
  for (std::size_t mask = 1; mask < scan.deficiency.size(); ++mask) {
    if ((mask & bit) && scan.deficiency[mask] > 0) return members(mask);
  }
  return std::nullopt;
}

std::optional<std::vector<int>> deficiency_witness(const BipartiteGraph& g,
                                                   const FProfile& f, int m,
                                                   int max_users) {
  const SubsetScan scan = scan_subsets(g, f, max_users);
  const std::size_t bit = std::size_t{1} << m;
  int best_with = std::numeric_limits<int>::min();
  std::size_t best_mask = 0;
  int best_without = 0;  // the empty set
  for (std::size_t mask = 1; mask < scan.deficiency.size(); ++mask) {
    const int d = scan.deficiency[mask];
    if (mask & bit) {
      if (d > best_with) {
        best_with = d;
        best_mask = mask;
      }
    } else {
      best_without = std::max(best_without, d);
    }
  }
  if (best_with > best_without) return members(best_mask);
  return std::nullopt;
}

bool always_saturated(const BipartiteGraph& g, const FProfile& f, int m) {
  const int full = max_f_matching(g, f).size();
  FProfile reduced = f;
  if (--reduced.caps[m] == 0) {
    // Cap zero is outside FProfile; drop the user's edges instead.
    BipartiteGraph h(g.num_left(), g.num_right(), g.num_bands());
    for (auto [u, n] : g.edges()) {
      if (u != m) h.add_edge(u, n);
    }
    reduced.caps[m] = 1;
    return max_f_matching(h, reduced).size() < full;
  }
  return max_f_matching(g, reduced).size() < full;
}

int k_threshold(int num_users, int num_subchannels, int others_sum) {
  // ceil(M * S / (M - 1)) in integer arithmetic.
  const int num = num_users * others_sum;
  const int den = num_users - 1;
  return num_subchannels + 1 - (num + den - 1) / den;
}

EdgeThreshold edge_count_threshold(int num_users, int num_subchannels,
                                   const FProfile& f, int m) {
  if (num_users < 2 || num_users > num_subchannels) {
    throw DomainError("edge_count_threshold requires 2 <= M <= N");
  }
  const int others = f.total() - f.caps[m];
  EdgeThreshold t;
  t.k_threshold = k_threshold(num_users, num_subchannels, others);
  t.low_branch = f.caps[m] <= t.k_threshold;
  t.min_edges = t.low_branch ? (num_users - 1) * num_subchannels + f.caps[m]
                             : num_users * (f.total() - 1) + 1;
  return t;
}

}  // namespace chanalloc
