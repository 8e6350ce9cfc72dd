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

#include "gtspq/qaoa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "gtspq/error.hpp"
#include "gtspq/random.hpp"
#include "numfmt.hpp"

namespace gtspq {

PartitionLayout::PartitionLayout(const QuboLayout& l) : layout(l) {
  partitions.resize(l.k);
  ring_edges.resize(l.k);
  for (std::size_t t = 0; t < l.k; ++t) {
    for (NodeId i = 0; i < l.n; ++i) partitions[t].push_back(l.var(t, i));
    if (l.n == 2) {
      ring_edges[t].emplace_back(partitions[t][0], partitions[t][1]);
    } else if (l.n > 2) {
      for (NodeId i = 0; i < l.n; ++i)
        ring_edges[t].emplace_back(partitions[t][i], partitions[t][(i + 1) % l.n]);
    }
  }
}

namespace {

std::size_t subspace_dim(const QuboLayout& layout, std::size_t max_dim) {
  if (layout.n == 0 || layout.k == 0) throw ModelError("empty QAOA layout");
  std::size_t dim = 1;
  for (std::size_t c = 0; c < layout.k; ++c) {
    if (dim > max_dim / layout.n) {
      throw CapacityError("subspace of " + std::to_string(layout.n) + "^" +
                          std::to_string(layout.k) + " amplitudes exceeds the cap of " +
                          std::to_string(max_dim));
    }
    dim *= layout.n;
  }
  return dim;
}

}  // namespace

SubspaceState::SubspaceState(const QuboLayout& layout, std::size_t max_dim)
    : layout_(layout) {
  const std::size_t dim = subspace_dim(layout, max_dim);
  strides_.resize(layout.k);
  std::size_t s = 1;
  for (std::size_t c = 0; c < layout.k; ++c) {
    strides_[c] = s;
    s *= layout.n;
  }
  amps_.assign(dim, {0.0, 0.0});
}

std::size_t SubspaceState::index_of(std::span<const NodeId> tuple) const {
  if (tuple.size() != layout_.k) throw ModelError("tuple length does not match step count");
  std::size_t idx = 0;
  for (std::size_t c = 0; c < layout_.k; ++c) {
    if (tuple[c] >= layout_.n) throw ModelError("tuple node out of range");
    idx += tuple[c] * strides_[c];
  }
  return idx;
}

std::vector<NodeId> SubspaceState::tuple_of(std::size_t index) const {
  std::vector<NodeId> t(layout_.k);
  for (std::size_t c = 0; c < layout_.k; ++c) {
    t[c] = index % layout_.n;
    index /= layout_.n;
  }
  return t;
}

Bitstring SubspaceState::bitstring_of(std::size_t index) const {
  Bitstring b(layout_.num_vars(), 0);
  const auto t = tuple_of(index);
  for (std::size_t c = 0; c < layout_.k; ++c) b[layout_.var(c, t[c])] = 1;
  return b;
}

double SubspaceState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw ModelError("grid needs at least one step per axis");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ModelError("grid range must be finite");
  std::vector<double> v(steps);
  if (steps == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < steps; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  v.back() = hi;
  return v;
}

}  // namespace

std::vector<double> GridConfig::gamma_values() const {
  return linspace(gamma_min, gamma_max, gamma_steps);
}

std::vector<double> GridConfig::beta_values() const {
  return linspace(beta_min, beta_max, beta_steps);
}

SubspaceState initial_state(const PartitionLayout& layout, std::uint64_t seed,
                            std::size_t max_dim) {
  SubspaceState s(layout.layout, max_dim);
  Rng rng(seed);
  std::vector<NodeId> tuple(layout.layout.k);
  for (auto& i : tuple) i = uniform_below(rng, layout.layout.n);
  s.amps()[s.index_of(tuple)] = 1.0;
  return s;
}

std::vector<double> cost_diagonal(const QuboModel& model, const PartitionLayout& layout,
                                  std::size_t max_dim) {
  const QuboLayout& l = layout.layout;
  if (model.layout() != l) throw ModelError("model layout does not match the partition layout");
  const std::size_t dim = subspace_dim(l, max_dim);
  const std::size_t nv = l.num_vars();

  std::vector<double> lin(nv, 0.0);
  for (const auto& [v, a] : model.linear()) lin[v] = a;
  std::vector<double> quad(nv * nv, 0.0);
  for (const auto& [uv, q] : model.quadratic()) {
    quad[uv.first * nv + uv.second] = q;
    quad[uv.second * nv + uv.first] = q;
  }

  std::vector<double> diag(dim);
  std::vector<NodeId> tuple(l.k, 0);
  std::vector<VarId> vars(l.k);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    for (std::size_t c = 0; c < l.k; ++c) vars[c] = c * l.n + tuple[c];
    double e = model.offset();
    for (std::size_t c = 0; c < l.k; ++c) {
      e += lin[vars[c]];
      for (std::size_t d = c + 1; d < l.k; ++d) e += quad[vars[c] * nv + vars[d]];
    }
    diag[idx] = e;
    for (std::size_t c = 0; c < l.k; ++c) {
      if (++tuple[c] < l.n) break;
      tuple[c] = 0;
    }
  }
  return diag;
}

void apply_cost_phase(SubspaceState& state, std::span<const double> diagonal, double gamma) {
  auto amps = state.amps();
  if (diagonal.size() != amps.size()) throw ModelError("diagonal length does not match state");
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] *= std::polar(1.0, -gamma * diagonal[i]);
}

void apply_xy_ring_mixer(SubspaceState& state, const PartitionLayout& layout, double beta) {
  const QuboLayout& l = state.layout();
  if (layout.layout != l) throw ModelError("partition layout does not match state");
  const double c = std::cos(2.0 * beta);
  const std::complex<double> ms(0.0, -std::sin(2.0 * beta));
  auto amps = state.amps();
  const std::size_t dim = amps.size();
  for (std::size_t t = 0; t < l.k; ++t) {
    const std::size_t stride = state.stride(t);
    const std::size_t block = stride * l.n;
    for (const auto& [u, v] : layout.ring_edges[t]) {
      const std::size_t off_a = l.node_of(u) * stride;
      const std::size_t off_b = l.node_of(v) * stride;
      for (std::size_t hi = 0; hi < dim; hi += block) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
          auto& a = amps[hi + off_a + lo];
          auto& b = amps[hi + off_b + lo];
          const auto na = c * a + ms * b;
          const auto nb = ms * a + c * b;
          a = na;
          b = nb;
        }
      }
    }
  }
}

SubspaceState run_qaoa(std::span<const double> diagonal, const PartitionLayout& layout,
                       const QaoaParams& params, std::uint64_t seed, std::size_t max_dim) {
  if (params.layers == 0) throw ModelError("QAOA needs at least one layer");
  if (!std::isfinite(params.gamma) || !std::isfinite(params.beta))
    throw ModelError("QAOA parameters must be finite");
  SubspaceState s = initial_state(layout, seed, max_dim);
  for (std::size_t p = 0; p < params.layers; ++p) {
    apply_cost_phase(s, diagonal, params.gamma);
    apply_xy_ring_mixer(s, layout, params.beta);
  }
  return s;
}

SubspaceState run_qaoa(const QuboModel& model, const PartitionLayout& layout,
                       const QaoaParams& params, std::uint64_t seed, std::size_t max_dim) {
  const auto diag = cost_diagonal(model, layout, max_dim);
  return run_qaoa(diag, layout, params, seed, max_dim);
}

double expectation(const SubspaceState& state, std::span<const double> diagonal) {
  const auto amps = state.amps();
  if (diagonal.size() != amps.size()) throw ModelError("diagonal length does not match state");
  double e = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) e += std::norm(amps[i]) * diagonal[i];
  return e;
}

SampleSet sample_shots(const SubspaceState& state, const QuboModel& model, std::size_t shots,
                       std::uint64_t seed) {
  if (shots == 0) throw ModelError("shots must be positive");
  if (model.layout() != state.layout()) throw ModelError("model layout does not match state");
  const auto amps = state.amps();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  Rng rng(seed);
  std::map<std::size_t, std::uint64_t> hits;
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = uniform_unit(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // Skip trailing zero-probability entries that rounding could land on.
    std::size_t idx = static_cast<std::size_t>(std::min(it, cdf.end() - 1) - cdf.begin());
    while (idx > 0 && std::norm(amps[idx]) == 0.0) --idx;
    ++hits[idx];
  }
  std::vector<std::pair<Bitstring, std::uint64_t>> counts;
  counts.reserve(hits.size());
  for (const auto& [idx, n] : hits) counts.emplace_back(state.bitstring_of(idx), n);
  return aggregate_counts(model, counts, Backend::kQaoa);
}

GridResult grid_search(const QuboModel& model, const GtspInstance& inst, const GridConfig& grid,
                       std::uint64_t seed) {
  if (grid.shots == 0) throw ModelError("grid search needs at least one shot per cell");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const PartitionLayout layout(model.layout());
  const auto gammas = grid.gamma_values();
  const auto betas = grid.beta_values();
  const auto diag = cost_diagonal(model, layout, grid.max_dim);

  GridResult result;
  double best_score = 0.0;
  std::size_t cell = 0;
  bool timed_out = false;
  for (double gamma : gammas) {
    for (double beta : betas) {
      const std::size_t this_cell = cell++;
      if (timed_out || elapsed() > grid.timeout_s) {
        timed_out = true;
        continue;
      }
      const std::uint64_t cell_seed = derive_seed(seed, this_cell);
      const QaoaParams params{gamma, beta, grid.layers};
      const auto state = run_qaoa(diag, layout, params, cell_seed, grid.max_dim);
      SampleSet shots = sample_shots(state, model, grid.shots, derive_seed(cell_seed, "shots"));

      CellSummary summary;
      summary.gamma = gamma;
      summary.beta = beta;
      double energy_sum = 0.0;
      std::uint64_t feasible = 0;
      for (const auto& e : shots.entries) {
        energy_sum += static_cast<double>(e.count) * e.energy;
        if (decode(model, inst, e.bits).feasible()) feasible += e.count;
      }
      summary.mean_energy = energy_sum / static_cast<double>(shots.num_reads);
      summary.feasible_shot_fraction =
          static_cast<double>(feasible) / static_cast<double>(shots.num_reads);
      if (!shots.entries.empty()) summary.best_shot_energy = shots.entries.front().energy;

      const double score = grid.score == GridScore::kShotMean ? summary.mean_energy
                                                               : expectation(state, diag);
      if (!result.best || score < best_score) {
        best_score = score;
        result.best = params;
        result.samples = std::move(shots);
      }
      result.cells.push_back(summary);
    }
  }

  if (!result.best) {
    result.samples = SampleSet::failed(Backend::kQaoa, Failure::kTimeout, elapsed());
  } else {
    result.samples.wall_time_s = elapsed();
  }
  return result;
}

std::string grid_summary_csv(const GridResult& result) {
  std::ostringstream out;
  out << "gamma,beta,mean_energy,feasible_shot_fraction,best_shot_energy\n";
  for (const auto& c : result.cells) {
    out << detail::format_number(c.gamma) << ',' << detail::format_number(c.beta) << ','
        << detail::format_number(c.mean_energy) << ','
        << detail::format_number(c.feasible_shot_fraction) << ',';
    if (c.best_shot_energy) out << detail::format_number(*c.best_shot_energy);
    out << '\n';
  }
  return out.str();
}

}  // namespace gtspq
