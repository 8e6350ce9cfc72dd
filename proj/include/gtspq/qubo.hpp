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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtspq/instance.hpp"

namespace gtspq {

using VarId = std::size_t;

// One binary variable per (step, node): x_{c,i} = 1 means node i is visited
// at position c. Variables are numbered c * N + i.
struct QuboLayout {
  std::size_t n = 0;  // nodes per step
  std::size_t k = 0;  // steps

  std::size_t num_vars() const noexcept { return n * k; }
  VarId var(std::size_t step, NodeId node) const;
  std::size_t step_of(VarId v) const noexcept { return v / n; }
  NodeId node_of(VarId v) const noexcept { return v % n; }

  bool operator==(const QuboLayout&) const = default;
};

// A 0/1 assignment, index = VarId.
using Bitstring = std::vector<std::uint8_t>;

std::string to_string(const Bitstring& b);
// Throws ModelError on characters other than '0' / '1'.
Bitstring bitstring_from_string(std::string_view s);

// Sparse QUBO: offset + sum_v a_v x_v + sum_{u<v} q_uv x_u x_v.
// Quadratic keys are canonical (min, max); a diagonal pair folds into the
// linear term since x^2 = x.
class QuboModel {
 public:
  using Pair = std::pair<VarId, VarId>;

  QuboModel(QuboLayout layout, double lambda, ZeroWeight zeros = ZeroWeight::kMissingEdge);
  // Generic model without GTSP structure; layout is (num_vars, 1).
  explicit QuboModel(std::size_t num_vars);

  void add_offset(double c) { offset_ += c; }
  void add_linear(VarId v, double c);
  void add_quadratic(VarId u, VarId v, double c);

  std::size_t num_vars() const noexcept { return layout_.num_vars(); }
  const QuboLayout& layout() const noexcept { return layout_; }
  double lambda() const noexcept { return lambda_; }
  ZeroWeight zero_weight() const noexcept { return zeros_; }
  double offset() const noexcept { return offset_; }
  const std::map<VarId, double>& linear() const noexcept { return linear_; }
  const std::map<Pair, double>& quadratic() const noexcept { return quadratic_; }

  bool operator==(const QuboModel&) const = default;

 private:
  QuboLayout layout_;
  double lambda_;
  ZeroWeight zeros_;
  double offset_ = 0.0;
  std::map<VarId, double> linear_;
  std::map<Pair, double> quadratic_;
};

// Sum of the K largest off-diagonal weights (over ordered pairs) plus one:
// an upper bound on any tour cost.
double penalty_weight(const GtspInstance& inst);

// energy(x) = E_cost + lambda * (p0 + p1 + p2) with
//   E_cost = sum_c sum_ij w_ij x_{c,i} x_{c+1,j}    (steps cyclic)
//   p0     = sum_c (sum_i x_{c,i} - 1)^2             (one node per step)
//   p1     = sum_m (sum_c sum_{i in C_m} x_{c,i} - 1)^2   (one visit per cluster)
//   p2     = sum_c sum_{(i,j): w_ij = 0, i != j} x_{c,i} x_{c+1,j}   (missing edges)
// p2 is empty when zeros are genuine edges. Terms accumulate in a fixed
// order (steps, then i, then j), so builds are bit-identical.
QuboModel build_qubo(const GtspInstance& inst, ZeroWeight zeros = ZeroWeight::kMissingEdge);

// Throws ModelError on length mismatch.
double energy(const QuboModel& model, const Bitstring& b);

enum class Violation { kNone, kStepOneHot, kClusterOneHot, kMissingEdge };

std::string_view to_string(Violation v);

struct Decoded {
  std::optional<Tour> tour;           // set iff violation == kNone
  Violation violation = Violation::kNone;

  bool feasible() const noexcept { return violation == Violation::kNone; }
};

// Reads a tour off step by step. No repair: the first violated constraint
// class (step one-hot, cluster one-hot, missing edge) is reported.
Decoded decode(const QuboModel& model, const GtspInstance& inst, const Bitstring& b);

// Exactly K bits set. Throws InstanceError if the tour is not feasible.
Bitstring encode(const QuboModel& model, const Tour& t, const GtspInstance& inst);

// Spin form with z = 1 - 2x:  offset + sum h_v z_v + sum J_uv z_u z_v.
struct IsingModel {
  std::size_t num_vars = 0;
  std::map<VarId, double> h;
  std::map<QuboModel::Pair, double> j;
  double offset = 0.0;
};

IsingModel to_ising(const QuboModel& model);

// spins[v] in {-1, +1}.
double ising_energy(const IsingModel& model, std::span<const int> spins);

// {n_vars, offset, lambda, linear: [[v, a]], quadratic: [[u, v, q]], layout: {n, k}}
std::string to_json(const QuboModel& model);
// One term per line: "v v a" for linear terms, "u v q" (u < v) for quadratic
// ones, after a '#' header carrying n_vars, offset and lambda.
std::string to_coo(const QuboModel& model);

// Flat adjacency form for inner loops (samplers, subspace simulator).
struct CompiledQubo {
  std::size_t num_vars = 0;
  double offset = 0.0;
  std::vector<double> linear;                 // dense, one per variable
  std::vector<std::size_t> row_start;         // CSR over symmetric neighbors
  std::vector<VarId> neighbor;
  std::vector<double> coupling;

  explicit CompiledQubo(const QuboModel& model);

  // Energy change when bit v flips, given current bits and the local field
  // field[v] = linear[v] + sum_u q_uv x_u.
  double flip_delta(const Bitstring& bits, std::span<const double> field, VarId v) const {
    return bits[v] ? -field[v] : field[v];
  }
  std::vector<double> local_field(const Bitstring& bits) const;
};

}  // namespace gtspq
