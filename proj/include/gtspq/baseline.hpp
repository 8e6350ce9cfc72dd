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

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gtspq/instance.hpp"

namespace gtspq {

struct ExactResult {
  Tour tour;
  double cost = 0.0;
  std::uint64_t explored_orderings = 0;
};

struct ExactOptions {
  std::size_t max_clusters = 9;
  ZeroWeight zeros = ZeroWeight::kMissingEdge;
};

// Optimal tour by enumerating the (K-1)! cluster orderings with cluster 0
// pinned first and running a layered shortest-path pass per start node of
// cluster 0. Ties go to the lexicographically smallest ordering, then the
// lexicographically smallest node sequence. Missing edges are never used.
//
// Throws CapacityError when K exceeds options.max_clusters and
// InstanceError when no tour avoids missing edges.
ExactResult exact_solve(const GtspInstance& inst, const ExactOptions& options = {});

// Uniformly random feasible tours: a uniform node per cluster and a uniform
// order of clusters. Costs are plain tour_cost values (missing edges are not
// filtered here).
std::vector<std::pair<Tour, double>> random_tours(const GtspInstance& inst, std::size_t count,
                                                  std::uint64_t seed);

}  // namespace gtspq
