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

#include "gtspq/qubo.hpp"
#include "gtspq/sample_set.hpp"

namespace gtspq {

inline constexpr std::size_t kDefaultExhaustiveCap = 24;
inline constexpr std::size_t kDefaultNumReads = 1500;
inline constexpr std::size_t kDefaultSweeps = 1000;

struct GroundState {
  Bitstring bits;
  double energy = 0.0;
};

// Global minimum by Gray-code enumeration of all 2^n assignments. Ties go to
// the lexicographically smallest bitstring (bit 0 compared first).
// Throws CapacityError when num_vars exceeds `max_vars`.
GroundState exhaustive_ground_state(const QuboModel& model,
                                    std::size_t max_vars = kDefaultExhaustiveCap);

// Single-entry SampleSet wrapping the exhaustive ground state.
SampleSet exhaustive_sample(const QuboModel& model, std::size_t max_vars = kDefaultExhaustiveCap);

enum class Interpolation { kGeometric, kLinear };

// Inverse-temperature ramp, one beta per sweep.
struct AnnealSchedule {
  std::size_t sweeps = kDefaultSweeps;
  double beta_initial = 0.1;
  double beta_final = 10.0;
  Interpolation interpolation = Interpolation::kGeometric;

  // Throws ModelError unless 0 < beta_initial < beta_final, both finite, and
  // sweeps >= 1.
  void validate() const;
  double beta_at(std::size_t sweep) const;
};

// Hot end accepts the largest single-flip uphill move with probability 1/2;
// cold end accepts the smallest non-zero one with probability 1e-4.
AnnealSchedule default_schedule(const QuboModel& model, std::size_t sweeps = kDefaultSweeps);

// Metropolis single-bit-flip annealing. Each of the num_reads restarts uses
// its own stream derive_seed(seed, restart), starts from a uniform random
// assignment, sweeps variables in index order, and contributes its final
// state. Fully determined by (model, num_reads, schedule, seed).
SampleSet sa_sample(const QuboModel& model, std::size_t num_reads,
                    const AnnealSchedule& schedule, std::uint64_t seed);

}  // namespace gtspq
