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

#include "gtspq/sampler.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "gtspq/error.hpp"
#include "gtspq/random.hpp"

namespace gtspq {

GroundState exhaustive_ground_state(const QuboModel& model, std::size_t max_vars) {
  const std::size_t n = model.num_vars();
  if (n > max_vars || n >= 63) {
    throw CapacityError("exhaustive search over " + std::to_string(n) +
                        " variables exceeds the cap of " + std::to_string(max_vars));
  }
  const CompiledQubo q(model);
  Bitstring bits(n, 0);
  std::vector<double> field = q.local_field(bits);
  double e = q.offset;

  GroundState best{bits, e};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto v = static_cast<VarId>(std::countr_zero(step));
    e += q.flip_delta(bits, field, v);
    const double sign = bits[v] ? -1.0 : 1.0;
    bits[v] ^= 1;
    for (std::size_t k = q.row_start[v]; k < q.row_start[v + 1]; ++k)
      field[q.neighbor[k]] += sign * q.coupling[k];
    if (e < best.energy || (e == best.energy && bits < best.bits)) {
      best.bits = bits;
      best.energy = e;
    }
  }
  // Incremental sums can drift on non-integral models; report the exact value.
  best.energy = energy(model, best.bits);
  return best;
}

SampleSet exhaustive_sample(const QuboModel& model, std::size_t max_vars) {
  const auto start = std::chrono::steady_clock::now();
  const auto gs = exhaustive_ground_state(model, max_vars);
  SampleSet s = aggregate_reads(model, {gs.bits}, Backend::kExhaustive);
  s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

void AnnealSchedule::validate() const {
  if (sweeps == 0) throw ModelError("anneal schedule needs at least one sweep");
  if (!std::isfinite(beta_initial) || !std::isfinite(beta_final) || beta_initial <= 0.0 ||
      beta_initial >= beta_final) {
    throw ModelError("anneal schedule needs 0 < beta_initial < beta_final, both finite");
  }
}

double AnnealSchedule::beta_at(std::size_t sweep) const {
  if (sweeps == 1) return beta_final;
  const double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
  if (interpolation == Interpolation::kLinear) {
    return beta_initial + t * (beta_final - beta_initial);
  }
  return beta_initial * std::pow(beta_final / beta_initial, t);
}

AnnealSchedule default_schedule(const QuboModel& model, std::size_t sweeps) {
  const CompiledQubo q(model);
  double max_delta = 0.0;
  double min_delta = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < q.num_vars; ++v) {
    double bound = std::fabs(q.linear[v]);
    if (q.linear[v] != 0.0) min_delta = std::min(min_delta, std::fabs(q.linear[v]));
    for (std::size_t k = q.row_start[v]; k < q.row_start[v + 1]; ++k) {
      bound += std::fabs(q.coupling[k]);
      if (q.coupling[k] != 0.0) min_delta = std::min(min_delta, std::fabs(q.coupling[k]));
    }
    max_delta = std::max(max_delta, bound);
  }
  AnnealSchedule s;
  s.sweeps = sweeps;
  if (max_delta == 0.0) {
    // Flat landscape: any finite ramp works.
    s.beta_initial = 0.1;
    s.beta_final = 10.0;
    return s;
  }
  s.beta_initial = std::log(2.0) / max_delta;
  s.beta_final = std::log(1e4) / min_delta;
  if (s.beta_final <= s.beta_initial) s.beta_final = 2.0 * s.beta_initial;
  return s;
}

SampleSet sa_sample(const QuboModel& model, std::size_t num_reads,
                    const AnnealSchedule& schedule, std::uint64_t seed) {
  schedule.validate();
  const std::size_t n = model.num_vars();
  if (n == 0) throw ModelError("cannot anneal a model without variables");
  if (num_reads == 0) throw ModelError("num_reads must be positive");
  const auto start = std::chrono::steady_clock::now();
  const CompiledQubo q(model);

  std::vector<double> betas(schedule.sweeps);
  for (std::size_t s = 0; s < schedule.sweeps; ++s) betas[s] = schedule.beta_at(s);

  std::vector<Bitstring> reads;
  reads.reserve(num_reads);
  Bitstring bits(n);
  std::vector<double> field;
  for (std::size_t r = 0; r < num_reads; ++r) {
    Rng rng(derive_seed(seed, r));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    field = q.local_field(bits);
    for (double beta : betas) {
      for (VarId v = 0; v < n; ++v) {
        const double delta = q.flip_delta(bits, field, v);
        if (delta > 0.0 && uniform_unit(rng) >= std::exp(-beta * delta)) continue;
        const double sign = bits[v] ? -1.0 : 1.0;
        bits[v] ^= 1;
        for (std::size_t k = q.row_start[v]; k < q.row_start[v + 1]; ++k)
          field[q.neighbor[k]] += sign * q.coupling[k];
      }
    }
    reads.push_back(bits);
  }
  SampleSet s = aggregate_reads(model, reads, Backend::kSimulatedAnnealing);
  s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

}  // namespace gtspq
