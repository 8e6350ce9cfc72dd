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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtspq/instance.hpp"
#include "gtspq/qubo.hpp"
#include "gtspq/sample_set.hpp"

namespace gtspq {

// Step partitions P_t (the N variables of step t) with their XY ring
// couplings E_t = {(q0,q1), (q1,q2), ..., (q_{N-1},q0)} in ascending node
// order. N = 2 yields a single edge, N = 1 none.
struct PartitionLayout {
  QuboLayout layout;
  std::vector<std::vector<VarId>> partitions;
  std::vector<std::vector<std::pair<VarId, VarId>>> ring_edges;

  explicit PartitionLayout(const QuboLayout& layout);
};

inline constexpr std::size_t kMaxSubspaceDim = 2'000'000;

// Amplitudes over the N^K assignments with exactly one set bit per step.
// Index of tuple (i_0, ..., i_{K-1}) is sum_c i_c * N^c.
class SubspaceState {
 public:
  // Throws CapacityError when N^K exceeds max_dim.
  explicit SubspaceState(const QuboLayout& layout, std::size_t max_dim = kMaxSubspaceDim);

  const QuboLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::size_t stride(std::size_t step) const noexcept { return strides_[step]; }

  std::span<std::complex<double>> amps() noexcept { return amps_; }
  std::span<const std::complex<double>> amps() const noexcept { return amps_; }

  std::size_t index_of(std::span<const NodeId> tuple) const;
  std::vector<NodeId> tuple_of(std::size_t index) const;
  // Full N*K bitstring with bit (c, tuple[c]) set for every step.
  Bitstring bitstring_of(std::size_t index) const;

  double norm_squared() const;

 private:
  QuboLayout layout_;
  std::vector<std::size_t> strides_;
  std::vector<std::complex<double>> amps_;
};

struct QaoaParams {
  double gamma = 0.0;
  double beta = 0.0;
  std::size_t layers = 1;
};

enum class GridScore { kShotMean, kExactExpectation };

struct GridConfig {
  double gamma_min = 0.05;
  double gamma_max = std::numbers::pi;
  double beta_min = 0.05;
  double beta_max = std::numbers::pi / 2.0;
  std::size_t gamma_steps = 10;
  std::size_t beta_steps = 10;
  std::size_t shots = 1500;
  double timeout_s = 300.0;
  std::size_t layers = 1;
  GridScore score = GridScore::kShotMean;
  std::size_t max_dim = kMaxSubspaceDim;

  // Evenly spaced, endpoints included; a single step yields the lower bound.
  std::vector<double> gamma_values() const;
  std::vector<double> beta_values() const;
};

// Basis state with one uniformly drawn node per step.
SubspaceState initial_state(const PartitionLayout& layout, std::uint64_t seed,
                            std::size_t max_dim = kMaxSubspaceDim);

// QUBO energy of every subspace assignment (p0 is identically zero there).
std::vector<double> cost_diagonal(const QuboModel& model, const PartitionLayout& layout,
                                  std::size_t max_dim = kMaxSubspaceDim);

// amp[x] *= exp(-i * gamma * diag[x])
void apply_cost_phase(SubspaceState& state, std::span<const double> diagonal, double gamma);

// Ordered product of exp(-i beta (XX + YY)) over every ring edge, partitions
// ascending, edges in ring order. Each factor mixes the amplitude pair that
// differs only in step t's node (u <-> v) with
// [[cos 2b, -i sin 2b], [-i sin 2b, cos 2b]].
void apply_xy_ring_mixer(SubspaceState& state, const PartitionLayout& layout, double beta);

// initial_state(seed) followed by `layers` rounds of cost phase then mixer.
SubspaceState run_qaoa(std::span<const double> diagonal, const PartitionLayout& layout,
                       const QaoaParams& params, std::uint64_t seed,
                       std::size_t max_dim = kMaxSubspaceDim);
SubspaceState run_qaoa(const QuboModel& model, const PartitionLayout& layout,
                       const QaoaParams& params, std::uint64_t seed,
                       std::size_t max_dim = kMaxSubspaceDim);

double expectation(const SubspaceState& state, std::span<const double> diagonal);

// i.i.d. draws from |amp|^2, rendered as full bitstrings with energies
// evaluated against `model`.
SampleSet sample_shots(const SubspaceState& state, const QuboModel& model, std::size_t shots,
                       std::uint64_t seed);

struct CellSummary {
  double gamma = 0.0;
  double beta = 0.0;
  double mean_energy = 0.0;
  double feasible_shot_fraction = 0.0;
  std::optional<double> best_shot_energy;  // absent when no shot was drawn
};

struct GridResult {
  std::optional<QaoaParams> best;  // absent iff no cell completed
  SampleSet samples;               // shots of the best cell
  std::vector<CellSummary> cells;  // completed cells, gamma-major order
};

// Evaluates every (gamma, beta) cell: cell i runs run_qaoa with seed
// derive_seed(seed, i) and draws grid.shots shots. The lowest score wins;
// ties go to the smaller gamma, then the smaller beta. Cells not started
// before grid.timeout_s are skipped; with no completed cell the result
// carries Failure::kTimeout.
GridResult grid_search(const QuboModel& model, const GtspInstance& inst, const GridConfig& grid,
                       std::uint64_t seed);

// gamma,beta,mean_energy,feasible_shot_fraction,best_shot_energy
std::string grid_summary_csv(const GridResult& result);

}  // namespace gtspq
