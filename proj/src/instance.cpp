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

#include "gtspq/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gtspq/error.hpp"

namespace gtspq {

GtspInstance::GtspInstance(std::string name, std::vector<std::vector<NodeId>> clusters,
                           WeightMatrix weights, bool symmetric,
                           std::vector<NodeCoord> coords, std::string comment)
    : name_(std::move(name)),
      comment_(std::move(comment)),
      clusters_(std::move(clusters)),
      weights_(std::move(weights)),
      symmetric_(symmetric),
      coords_(std::move(coords)) {
  const std::size_t n = weights_.size();
  if (clusters_.size() < 2) {
    throw InstanceError("instance needs at least 2 clusters, got " +
                        std::to_string(clusters_.size()));
  }
  constexpr auto kUnassigned = std::numeric_limits<std::size_t>::max();
  cluster_of_.assign(n, kUnassigned);
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    auto& members = clusters_[c];
    if (members.empty()) {
      throw InstanceError("cluster " + std::to_string(c) + " is empty");
    }
    std::sort(members.begin(), members.end());
    for (NodeId v : members) {
      if (v >= n) {
        throw InstanceError("cluster " + std::to_string(c) + " references node " +
                            std::to_string(v) + " outside 0.." + std::to_string(n - 1));
      }
      if (cluster_of_[v] != kUnassigned) {
        throw InstanceError("node " + std::to_string(v) + " appears in clusters " +
                            std::to_string(cluster_of_[v]) + " and " + std::to_string(c));
      }
      cluster_of_[v] = c;
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (cluster_of_[v] == kUnassigned) {
      throw InstanceError("node " + std::to_string(v) + " belongs to no cluster");
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw InstanceError("weight (" + std::to_string(i) + "," + std::to_string(j) +
                            ") is negative or not finite");
      }
      if (symmetric_ && w != weights_(j, i)) {
        throw InstanceError("instance declared symmetric but w(" + std::to_string(i) +
                            "," + std::to_string(j) + ") != w(" + std::to_string(j) +
                            "," + std::to_string(i) + ")");
      }
    }
    // Self-loops are never traversed; normalize the diagonal.
    weights_(i, i) = 0.0;
  }
  if (!coords_.empty() && coords_.size() != n) {
    throw InstanceError("coordinate count does not match node count");
  }
  for (const auto& p : coords_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InstanceError("non-finite node coordinate");
    }
  }
}

double tour_cost(const GtspInstance& inst, const Tour& t) {
  const auto& order = t.order;
  if (order.size() != inst.k()) {
    throw InstanceError("tour has " + std::to_string(order.size()) + " nodes, instance has " +
                        std::to_string(inst.k()) + " clusters");
  }
  for (NodeId v : order) {
    if (v >= inst.n()) throw InstanceError("tour node " + std::to_string(v) + " out of range");
  }
  // Legs are summed in ascending order so rotations (and reversals of
  // symmetric tours) produce bit-identical costs.
  std::vector<double> legs(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    legs[i] = inst.weight(order[i], order[(i + 1) % order.size()]);
  }
  std::sort(legs.begin(), legs.end());
  double cost = 0.0;
  for (double w : legs) cost += w;
  return cost;
}

bool is_feasible_tour(const GtspInstance& inst, const Tour& t) {
  if (t.order.size() != inst.k()) return false;
  std::vector<bool> seen(inst.k(), false);
  for (NodeId v : t.order) {
    if (v >= inst.n()) return false;
    const auto c = inst.cluster_of(v);
    if (seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

bool uses_missing_edge(const GtspInstance& inst, const Tour& t, ZeroWeight zeros) {
  const auto& order = t.order;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!edge_exists(inst, order[i], order[(i + 1) % order.size()], zeros)) return true;
  }
  return false;
}

}  // namespace gtspq
