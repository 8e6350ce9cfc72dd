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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtspq/instance.hpp"

namespace gtspq {

enum class ReductionMethod { kNn2c, kSubsample };

// Traceability from a reduced instance back to its source.
struct ReductionRecord {
  std::string original_instance_name;
  std::vector<NodeId> kept_nodes;  // new id -> original id, strictly increasing
  ReductionMethod method = ReductionMethod::kNn2c;
  std::optional<std::uint64_t> seed;  // set iff method == kSubsample

  bool operator==(const ReductionRecord&) const = default;
};

// Builds the instance induced by `kept` (original ids, any order). Clusters
// keep their original relative order; clusters with no kept node are dropped.
// Weights are copied verbatim from the source matrix.
GtspInstance induced_instance(const GtspInstance& inst, std::vector<NodeId> kept,
                              std::string name);

// Extended Nearest-Nodes-to-Clusters reduction.
//
// For every node v of cluster C, bestIN(v) is the cheapest edge entering v
// from outside C and bestOUT(v) the cheapest edge leaving v to outside C.
// Each cluster keeps its best entry node (argmin bestIN; ties -> smaller mean
// outgoing weight to other clusters; then smaller id) and its best exit node
// (argmin bestOUT; ties -> smaller mean incoming weight; then smaller id).
// The result has K clusters and between K and 2K nodes. Deterministic.
std::pair<GtspInstance, ReductionRecord> nn2c_reduce(const GtspInstance& inst);

// Per-cluster (entry, exit) picks in original ids, exposed for tests.
std::vector<std::pair<NodeId, NodeId>> nn2c_representatives(const GtspInstance& inst);

// Cluster subset sampling: draws whole clusters uniformly without
// replacement and keeps them while the node total stays within
// `target_nodes`. Sampling stops at the first draw that would overshoot once
// two clusters are held; with fewer than two, the draw is kept regardless.
// The reduced instance is named "<name>_nodes_<N'>".
//
// Throws InstanceError if target_nodes is smaller than the two smallest
// clusters combined.
std::pair<GtspInstance, ReductionRecord> cluster_subsample(const GtspInstance& inst,
                                                           std::size_t target_nodes,
                                                           std::uint64_t seed);

std::string to_json(const ReductionRecord& record);
ReductionRecord reduction_record_from_json(const std::string& text);

}  // namespace gtspq
