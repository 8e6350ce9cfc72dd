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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gtspq {

using NodeId = std::size_t;

struct NodeCoord {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const NodeCoord&) const = default;
};

// Dense row-major N x N weight matrix.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n, double fill = 0.0) : n_(n), w_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(NodeId from, NodeId to) const { return w_[from * n_ + to]; }
  double& operator()(NodeId from, NodeId to) { return w_[from * n_ + to]; }
  std::span<const double> row(NodeId from) const { return {w_.data() + from * n_, n_}; }

  bool operator==(const WeightMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

// A GTSP instance: N nodes partitioned into K clusters with a directed,
// non-negative weight matrix. Immutable once constructed; the constructor
// validates every structural invariant and throws InstanceError otherwise.
class GtspInstance {
 public:
  GtspInstance(std::string name, std::vector<std::vector<NodeId>> clusters,
               WeightMatrix weights, bool symmetric,
               std::vector<NodeCoord> coords = {}, std::string comment = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& comment() const noexcept { return comment_; }
  std::size_t n() const noexcept { return weights_.size(); }
  std::size_t k() const noexcept { return clusters_.size(); }
  bool symmetric() const noexcept { return symmetric_; }

  double weight(NodeId from, NodeId to) const { return weights_(from, to); }
  const WeightMatrix& weights() const noexcept { return weights_; }

  // Members of each cluster in ascending node order.
  const std::vector<std::vector<NodeId>>& clusters() const noexcept { return clusters_; }
  std::size_t cluster_of(NodeId v) const { return cluster_of_.at(v); }

  // Empty unless the source file carried a coordinate section.
  const std::vector<NodeCoord>& coords() const noexcept { return coords_; }

  bool operator==(const GtspInstance&) const = default;

 private:
  std::string name_;
  std::string comment_;
  std::vector<std::vector<NodeId>> clusters_;
  std::vector<std::size_t> cluster_of_;
  WeightMatrix weights_;
  bool symmetric_;
  std::vector<NodeCoord> coords_;
};

// Cyclic visiting order: order[K-1] links back to order[0].
struct Tour {
  std::vector<NodeId> order;

  bool operator==(const Tour&) const = default;
  auto operator<=>(const Tour&) const = default;
};

// Whether an off-diagonal zero weight denotes a missing edge (the GTSPLIB
// reading) or a genuine zero-cost edge (synthetic instances).
enum class ZeroWeight { kMissingEdge, kEdge };

// Sum of the K cyclic legs. Throws InstanceError if the tour length is not K
// or a node id is out of range.
double tour_cost(const GtspInstance& inst, const Tour& t);

// True iff t has length K and hits every cluster exactly once.
bool is_feasible_tour(const GtspInstance& inst, const Tour& t);

// True iff some leg of t traverses an edge that does not exist under the
// given zero-weight policy.
bool uses_missing_edge(const GtspInstance& inst, const Tour& t, ZeroWeight zeros);

// A non-diagonal edge exists unless its weight is zero and zeros are read
// as missing edges.
inline bool edge_exists(const GtspInstance& inst, NodeId from, NodeId to,
                        ZeroWeight zeros) {
  return from != to && (zeros == ZeroWeight::kEdge || inst.weight(from, to) != 0.0);
}

}  // namespace gtspq
