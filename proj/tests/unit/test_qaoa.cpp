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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gtspq/error.hpp"
#include "gtspq/qaoa.hpp"
#include "oracles.hpp"

using namespace gtspq;

namespace {

GtspInstance pair_instance() {
  WeightMatrix w(2);
  w(0, 1) = w(1, 0) = 5;
  return GtspInstance("pair", {{0}, {1}}, w, true);
}

std::uint64_t dense_index(const Bitstring& b) {
  std::uint64_t x = 0;
  for (std::size_t v = 0; v < b.size(); ++v)
    if (b[v]) x |= std::uint64_t{1} << v;
  return x;
}

// Dense reference run of the same circuit from the same basis state.
oracle::DenseSim dense_run(const QuboModel& model, const PartitionLayout& layout,
                           const SubspaceState& start, const QaoaParams& p) {
  oracle::DenseSim sim(model.num_vars());
  std::size_t at = 0;
  for (std::size_t i = 0; i < start.dim(); ++i)
    if (std::abs(start.amps()[i]) > 0.5) at = i;
  sim.set_basis(dense_index(start.bitstring_of(at)));
  for (std::size_t l = 0; l < p.layers; ++l) {
    sim.apply_diagonal_phase(model, p.gamma);
    for (const auto& ring : layout.ring_edges)
      for (auto [u, v] : ring) sim.apply_xy(u, v, p.beta);
  }
  return sim;
}

}  // namespace

TEST_CASE("partition layout") {
  const PartitionLayout l3(QuboLayout{3, 2});
  REQUIRE(l3.partitions.size() == 2);
  CHECK(l3.partitions[1] == std::vector<VarId>{3, 4, 5});
  CHECK(l3.ring_edges[1] == std::vector<std::pair<VarId, VarId>>{{3, 4}, {4, 5}, {5, 3}});
  const PartitionLayout l2(QuboLayout{2, 3});
  CHECK(l2.ring_edges[0] == std::vector<std::pair<VarId, VarId>>{{0, 1}});
  const PartitionLayout l1(QuboLayout{1, 3});
  CHECK(l1.ring_edges[0].empty());
}

TEST_CASE("subspace indexing") {
  SubspaceState s(QuboLayout{3, 3});
  CHECK(s.dim() == 27);
  CHECK(s.stride(0) == 1);
  CHECK(s.stride(2) == 9);
  const std::vector<NodeId> t{2, 0, 1};
  CHECK(s.index_of(t) == 2 + 0 * 3 + 1 * 9);
  CHECK(s.tuple_of(11) == t);
  CHECK(s.bitstring_of(11) == Bitstring{0, 0, 1, 1, 0, 0, 0, 1, 0});
  CHECK_THROWS_AS(SubspaceState(QuboLayout{5, 10}), CapacityError);
  CHECK_THROWS_AS(SubspaceState(QuboLayout{3, 3}, 26), CapacityError);
  CHECK_NOTHROW(SubspaceState(QuboLayout{3, 3}, 27));
}

TEST_CASE("grid values") {
  GridConfig g;
  const auto gv = g.gamma_values();
  REQUIRE(gv.size() == 10);
  CHECK(gv.front() == 0.05);
  CHECK(gv.back() == std::numbers::pi);
  for (std::size_t i = 1; i < gv.size(); ++i)
    CHECK(gv[i] - gv[i - 1] == doctest::Approx((std::numbers::pi - 0.05) / 9));
  const auto bv = g.beta_values();
  CHECK(bv.front() == 0.05);
  CHECK(bv.back() == std::numbers::pi / 2);
  g.gamma_steps = 1;
  CHECK(g.gamma_values() == std::vector<double>{0.05});
}

TEST_CASE("zero angles leave the initial basis state") {
  Rng rng(1);
  const auto inst = oracle::random_instance(rng, {4, 3, false, true});
  const auto m = build_qubo(inst);
  const PartitionLayout layout(m.layout());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto start = initial_state(layout, seed);
    const auto out = run_qaoa(m, layout, {0.0, 0.0, 1}, seed);
    for (std::size_t i = 0; i < out.dim(); ++i) CHECK(out.amps()[i] == start.amps()[i]);
  }
}

TEST_CASE("cost diagonal equals the model energy") {
  Rng rng(2);
  const auto inst = oracle::random_instance(rng, {4, 3, false, false});
  const auto m = build_qubo(inst);
  const PartitionLayout layout(m.layout());
  const auto diag = cost_diagonal(m, layout);
  const SubspaceState s(m.layout());
  REQUIRE(diag.size() == s.dim());
  for (std::size_t i = 0; i < diag.size(); ++i)
    CHECK(std::fabs(diag[i] - energy(m, s.bitstring_of(i))) <= 1e-9);
}

TEST_CASE("mixer block on two nodes") {
  SubspaceState s(QuboLayout{2, 1});
  s.amps()[0] = 1.0;
  const PartitionLayout layout(QuboLayout{2, 1});
  const double b = 0.3;
  apply_xy_ring_mixer(s, layout, b);
  CHECK(s.amps()[0].real() == doctest::Approx(std::cos(2 * b)));
  CHECK(s.amps()[1].imag() == doctest::Approx(-std::sin(2 * b)));
  CHECK(std::abs(s.amps()[1].real()) < 1e-15);
}

TEST_CASE("unitarity and agreement with the dense simulator") {
  Rng rng(3);
  int compared = 0;
  for (int rep = 0; rep < 60; ++rep) {
    oracle::RandomInstanceOptions opt{std::size_t(2 + rep % 3), std::size_t(2 + rep % 2),
                                      rep % 2 == 0, rep % 3 == 0};
    if (opt.k > opt.n) opt.k = opt.n;
    const auto inst = oracle::random_instance(rng, opt);
    const auto m = build_qubo(inst);
    const PartitionLayout layout(m.layout());
    const QaoaParams p{uniform_unit(rng) * 3.2, uniform_unit(rng) * 1.6, std::size_t(1 + rep % 2)};
    const auto seed = static_cast<std::uint64_t>(rep);
    const auto out = run_qaoa(m, layout, p, seed);
    CHECK(std::fabs(out.norm_squared() - 1.0) < 1e-9 * static_cast<double>(p.layers));
    if (m.num_vars() > 12) continue;
    const auto dense = dense_run(m, layout, initial_state(layout, seed), p);
    double in_subspace = 0;
    for (std::size_t i = 0; i < out.dim(); ++i) {
      const auto d = dense.amps()[dense_index(out.bitstring_of(i))];
      CHECK(std::abs(d - out.amps()[i]) < 1e-8);
      in_subspace += std::norm(d);
    }
    CHECK(in_subspace == doctest::Approx(1.0).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared > 20);
}

TEST_CASE("expectation") {
  const auto inst = pair_instance();
  const auto m = build_qubo(inst);
  const PartitionLayout layout(m.layout());
  const auto diag = cost_diagonal(m, layout);
  const auto s = run_qaoa(diag, layout, {0.7, 0.4, 1}, 5);
  double manual = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) manual += std::norm(s.amps()[i]) * diag[i];
  CHECK(expectation(s, diag) == doctest::Approx(manual));
}

TEST_CASE("shot sampling") {
  const auto inst = pair_instance();
  const auto m = build_qubo(inst);
  SubspaceState basis(m.layout());
  basis.amps()[2] = 1.0;
  const auto one = sample_shots(basis, m, 1500, 9);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].count == 1500);
  CHECK(one.entries[0].bits == basis.bitstring_of(2));
  CHECK(one.backend == Backend::kQaoa);

  SubspaceState half(m.layout());
  half.amps()[1] = std::sqrt(0.5);
  half.amps()[2] = std::complex<double>(0.0, std::sqrt(0.5));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_shots(half, m, 1500, seed);
    std::uint64_t total = 0;
    for (const auto& e : s.entries) total += e.count;
    CHECK(total == 1500);
    REQUIRE(s.entries.size() == 2);
    // binomial(1500, 1/2): sigma = 19.36
    CHECK(std::fabs(static_cast<double>(s.entries[0].count) - 750.0) <= 4 * 19.365);
    for (const auto& e : s.entries) CHECK(e.energy == energy(m, e.bits));
  }
  CHECK(sample_shots(half, m, 100, 4) == sample_shots(half, m, 100, 4));
}

TEST_CASE("grid search") {
  const auto inst = pair_instance();
  const auto m = build_qubo(inst);
  SUBCASE("single cell is a single run") {
    GridConfig g;
    g.gamma_steps = g.beta_steps = 1;
    g.shots = 200;
    const auto r = grid_search(m, inst, g, 17);
    REQUIRE(r.best.has_value());
    CHECK(r.cells.size() == 1);
    CHECK(r.best->gamma == 0.05);
    CHECK(r.best->beta == 0.05);
    const PartitionLayout layout(m.layout());
    const auto direct = run_qaoa(m, layout, *r.best, derive_seed(17, std::uint64_t{0}));
    auto expect = sample_shots(direct, m, 200, derive_seed(derive_seed(17, std::uint64_t{0}), "shots"));
    auto got = r.samples;
    got.wall_time_s = expect.wall_time_s = 0;
    CHECK(got == expect);
  }
  SUBCASE("best cell contains the optimal tour") {
    GridConfig g;
    g.shots = 300;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = grid_search(m, inst, g, seed);
      REQUIRE(r.best.has_value());
      CHECK(r.cells.size() == 100);
      bool hit = false;
      for (const auto& e : r.samples.entries) hit |= e.energy == 10.0;
      CHECK(hit);
      const auto again = grid_search(m, inst, g, seed);
      CHECK(again.best->gamma == r.best->gamma);
      CHECK(again.best->beta == r.best->beta);
      CHECK(grid_summary_csv(again) == grid_summary_csv(r));
    }
  }
  SUBCASE("first minimal cell in gamma-major order wins") {
    GridConfig g;
    g.shots = 50;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = grid_search(m, inst, g, seed);
      std::size_t first = 0;
      for (std::size_t i = 1; i < r.cells.size(); ++i)
        if (r.cells[i].mean_energy < r.cells[first].mean_energy) first = i;
      CHECK(r.best->gamma == r.cells[first].gamma);
      CHECK(r.best->beta == r.cells[first].beta);
      for (std::size_t i = 1; i < r.cells.size(); ++i) {
        const auto& p = r.cells[i - 1];
        const auto& q = r.cells[i];
        CHECK((p.gamma < q.gamma || (p.gamma == q.gamma && p.beta < q.beta)));
      }
    }
  }
  SUBCASE("timeout before the first cell") {
    GridConfig g;
    g.timeout_s = 0.0;
    const auto r = grid_search(m, inst, g, 0);
    CHECK_FALSE(r.best.has_value());
    CHECK(r.samples.failure == Failure::kTimeout);
    CHECK(r.cells.empty());
  }
  SUBCASE("csv") {
    GridConfig g;
    g.gamma_steps = 2;
    g.beta_steps = 3;
    g.shots = 20;
    const auto csv = grid_summary_csv(grid_search(m, inst, g, 0));
    CHECK(csv.rfind("gamma,beta,mean_energy,feasible_shot_fraction,best_shot_energy\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  }
}
