// Copyright 2026 The gtspq Authors
//
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

#include "gtspq/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gtspq/error.hpp"
#include "gtspq/random.hpp"

namespace gtspq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ExactResult exact_solve(const GtspInstance& inst, const ExactOptions& options) {
  const std::size_t k = inst.k();
  if (k > options.max_clusters) {
    throw CapacityError("exact search over " + std::to_string(k) +
                        " clusters exceeds the cap of " + std::to_string(options.max_clusters));
  }
  const auto& clusters = inst.clusters();
  auto leg = [&](NodeId a, NodeId b) {
    return edge_exists(inst, a, b, options.zeros) ? inst.weight(a, b) : kInf;
  };

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);

  ExactResult best;
  bool found = false;
  // to_go[j][x]: cheapest path from member x of cluster order[j] through the
  // remaining clusters and back to the fixed start node.
  std::vector<std::vector<double>> to_go(k);
  do {
    ++best.explored_orderings;
    for (NodeId s : clusters[0]) {
      const auto& last = clusters[order[k - 1]];
      to_go[k - 1].assign(last.size(), kInf);
      for (std::size_t x = 0; x < last.size(); ++x) to_go[k - 1][x] = leg(last[x], s);
      for (std::size_t j = k - 1; j-- > 1;) {
        const auto& cur = clusters[order[j]];
        const auto& next = clusters[order[j + 1]];
        to_go[j].assign(cur.size(), kInf);
        for (std::size_t x = 0; x < cur.size(); ++x) {
          for (std::size_t y = 0; y < next.size(); ++y)
            to_go[j][x] = std::min(to_go[j][x], leg(cur[x], next[y]) + to_go[j + 1][y]);
        }
      }
      const auto& second = clusters[order[1]];
      double total = kInf;
      for (std::size_t y = 0; y < second.size(); ++y)
        total = std::min(total, leg(s, second[y]) + to_go[1][y]);
      if (total == kInf) continue;

      // Forward walk taking the smallest node that stays on an optimal path.
      Tour t;
      t.order.push_back(s);
      double remaining = total;
      NodeId prev = s;
      for (std::size_t j = 1; j < k; ++j) {
        const auto& cur = clusters[order[j]];
        for (std::size_t x = 0; x < cur.size(); ++x) {
          if (leg(prev, cur[x]) + to_go[j][x] == remaining) {
            t.order.push_back(cur[x]);
            remaining = to_go[j][x];
            prev = cur[x];
            break;
          }
        }
      }
      const double cost = tour_cost(inst, t);
      if (!found || cost < best.cost) {
        found = true;
        best.cost = cost;
        best.tour = std::move(t);
      }
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));

  if (!found) throw InstanceError("instance '" + inst.name() + "' has no tour avoiding missing edges");
  return best;
}

std::vector<std::pair<Tour, double>> random_tours(const GtspInstance& inst, std::size_t count,
                                                  std::uint64_t seed) {
  if (count == 0) throw InstanceError("random_tours needs count >= 1");
  Rng rng(seed);
  const auto& clusters = inst.clusters();
  std::vector<std::pair<Tour, double>> out;
  out.reserve(count);
  std::vector<std::size_t> order(inst.k());
  for (std::size_t r = 0; r < count; ++r) {
    std::iota(order.begin(), order.end(), 0);
    portable_shuffle(order.begin(), order.end(), rng);
    Tour t;
    t.order.reserve(order.size());
    for (std::size_t c : order) {
      const auto& members = clusters[c];
      t.order.push_back(members[uniform_below(rng, members.size())]);
    }
    const double cost = tour_cost(inst, t);
    out.emplace_back(std::move(t), cost);
  }
  return out;
}

}  // namespace gtspq
