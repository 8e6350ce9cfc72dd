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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gtspq/baseline.hpp"
#include "gtspq/bench.hpp"
#include "gtspq/gtsplib.hpp"
#include "gtspq/pipeline.hpp"
#include "gtspq/preprocess.hpp"
#include "gtspq/qaoa.hpp"
#include "gtspq/qubo.hpp"
#include "gtspq/sampler.hpp"
#include "oracles.hpp"

using namespace gtspq;
namespace fs = std::filesystem;

namespace {

constexpr double kEnergyTol = 1e-9;
constexpr double kNormTol = 1e-9;
constexpr double kDenseTol = 1e-8;
constexpr std::size_t kMinRandomInstances = 100;
constexpr std::size_t kQaoaDraws = 1000;
constexpr int kQaoaSeeds = 10;
constexpr int kQaoaRequiredHits = 9;
constexpr std::uint64_t kSaSeeds = 10;
constexpr std::size_t kSaReads = 1500;

const fs::path kFixtures = GTSPQ_FIXTURES;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Random instances with N*K <= 20 and strictly positive weights.
std::vector<GtspInstance> small_random_instances() {
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 2}, {3, 2}, {4, 2}, {5, 2}, {3, 3},
                                                        {4, 3}, {5, 3}, {6, 3}, {4, 4}, {5, 4}};
  Rng rng(20240611);
  std::vector<GtspInstance> out;
  for (std::size_t rep = 0; rep < 12; ++rep) {
    for (auto [n, k] : shapes) {
      const bool symmetric = (rep + n) % 2 == 0;
      const bool integral = rep % 3 != 2;
      out.push_back(oracle::random_instance(rng, {n, k, symmetric, integral}));
    }
  }
  return out;
}

std::vector<GtspInstance> group_instances(const std::string& file) {
  const auto group = load_group(kFixtures / "groups" / file);
  std::vector<GtspInstance> out;
  for (std::size_t i = 0; i < group.instances.size(); ++i)
    out.push_back(prepare_instance(group.instances[i], i, 0).instance);
  return out;
}

std::vector<GtspInstance> all_fixtures() {
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(kFixtures / "gtsplib")) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<GtspInstance> out;
  for (const auto& p : paths) out.push_back(load_gtsplib(p));
  return out;
}

// 1. Qubit counts of the reference instance shapes.
Outcome qubit_counts() {
  Outcome o;
  struct Row {
    const char* group;
    const char* name;
    std::size_t n, k, qubits;
  };
  const Row rows[] = {
      {"subsample_small.json", "12ftv55_nodes_3", 3, 2, 6},
      {"subsample_small.json", "16pr76_nodes_3", 3, 2, 6},
      {"subsample_small.json", "6fri26_nodes_3", 3, 2, 6},
      {"subsample_small.json", "16eil76_nodes_4", 4, 2, 8},
      {"subsample_small.json", "4ulysses16_nodes_4", 4, 2, 8},
      {"subsample_small.json", "5ulysses22_nodes_4", 4, 3, 12},
      {"subsample_small.json", "6fri26_nodes_4", 4, 3, 12},
      {"subsample_small.json", "20gr96_nodes_5", 5, 4, 20},
      {"subsample_small.json", "9ftv44_nodes_5", 5, 2, 10},
      {"subsample_small.json", "9p43_nodes_5", 5, 3, 15},
      {"subsample_medium.json", "5ulysses22_nodes_3", 3, 3, 9},
      {"subsample_medium.json", "9p43_nodes_5", 5, 3, 15},
      {"subsample_medium.json", "10att48_nodes_7", 7, 3, 21},
      {"subsample_medium.json", "10hk48_nodes_10", 10, 3, 30},
      {"subsample_medium.json", "14st70_nodes_11", 11, 2, 22},
      {"subsample_medium.json", "11ft53_nodes_13", 13, 4, 52},
      {"subsample_medium.json", "20kroD100_nodes_15", 15, 4, 60},
      {"subsample_medium.json", "20gr96_nodes_16", 16, 7, 112},
      {"subsample_medium.json", "12brazil58_nodes_18", 18, 6, 108},
      {"subsample_medium.json", "20rd100_nodes_20", 20, 7, 140},
      {"preprocess_small.json", "3burma14", 3, 3, 9},
      {"preprocess_small.json", "4br17", 4, 4, 16},
      {"preprocess_small.json", "4gr17", 4, 4, 16},
      {"preprocess_small.json", "4ulysses16", 4, 4, 16},
      {"preprocess_small.json", "5gr21", 5, 5, 25},
      {"preprocess_small.json", "5gr24", 5, 5, 25},
      {"preprocess_small.json", "5ulysses22", 5, 5, 25},
      {"preprocess_medium.json", "3burma14", 3, 3, 9},
      {"preprocess_medium.json", "6bayg29", 6, 6, 36},
      {"preprocess_medium.json", "7ftv33", 12, 7, 84},
      {"preprocess_medium.json", "8ftv38", 13, 8, 104},
      {"preprocess_medium.json", "14st70", 14, 14, 196},
      {"preprocess_medium.json", "10ftv47", 15, 10, 150},
      {"preprocess_medium.json", "9ftv44", 12, 9, 108},
      {"preprocess_medium.json", "16pr76", 16, 16, 256},
      {"preprocess_medium.json", "12ftv55", 20, 12, 240},
      {"preprocess_medium.json", "20kroA100", 20, 20, 400},
  };
  std::map<std::string, std::vector<GtspInstance>> groups;
  std::size_t checked = 0;
  for (const auto& row : rows) {
    auto& insts = groups[row.group];
    if (insts.empty()) insts = group_instances(row.group);
    const auto it = std::find_if(insts.begin(), insts.end(),
                                 [&](const GtspInstance& i) { return i.name() == row.name; });
    if (it == insts.end()) {
      o.fail(std::string("missing ") + row.group + ":" + row.name);
      continue;
    }
    const auto model = build_qubo(*it);
    if (it->n() != row.n || it->k() != row.k || model.num_vars() != row.qubits ||
        model.num_vars() != it->n() * it->k()) {
      std::ostringstream s;
      s << row.name << " has N=" << it->n() << " K=" << it->k() << " qubits=" << model.num_vars()
        << ", expected " << row.n << "/" << row.k << "/" << row.qubits;
      o.fail(s.str());
    }
    ++checked;
  }
  if (o.pass) o.detail << checked << " reference shapes";
  return o;
}

// 2. energy(encode(t)) == tour_cost(t) for every feasible tour.
Outcome feasible_energy(const std::vector<GtspInstance>& insts) {
  Outcome o;
  std::size_t tours = 0;
  double worst = 0.0;
  for (const auto& inst : insts) {
    const auto m = build_qubo(inst);
    for (const auto& t : oracle::all_tours(inst)) {
      const double diff = std::fabs(energy(m, encode(m, t, inst)) - tour_cost(inst, t));
      worst = std::max(worst, diff);
      ++tours;
    }
  }
  if (insts.size() < kMinRandomInstances) o.fail("too few instances");
  if (worst > kEnergyTol) o.fail("max deviation " + std::to_string(worst));
  o.detail << (o.pass ? "" : "; ") << insts.size() << " instances, " << tours
           << " tours, max |diff| " << worst;
  return o;
}

// Gray-code scan of all assignments, tracking one-hot violations
// incrementally. Returns (min infeasible, max feasible).
std::pair<double, double> scan_separation(const GtspInstance& inst, const QuboModel& m) {
  const std::size_t n = inst.n(), k = inst.k(), vars = m.num_vars();
  const CompiledQubo q(m);
  Bitstring bits(vars, 0);
  auto field = q.local_field(bits);
  double e = m.offset();
  std::vector<int> step_count(k, 0), cluster_count(k, 0);
  std::size_t bad = 2 * k;  // groups whose count is not exactly one
  double min_infeasible = std::numeric_limits<double>::infinity();
  double max_feasible = -std::numeric_limits<double>::infinity();
  auto visit = [&] {
    if (bad == 0) max_feasible = std::max(max_feasible, e);
    else min_infeasible = std::min(min_infeasible, e);
  };
  auto recount = [&](VarId v, int delta) {
    for (int* c : {&step_count[v / n], &cluster_count[inst.cluster_of(v % n)]}) {
      if (*c == 1) ++bad;
      *c += delta;
      if (*c == 1) --bad;
    }
  };
  visit();
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << vars); ++g) {
    const auto v = static_cast<VarId>(__builtin_ctzll(g));
    e += q.flip_delta(bits, field, v);
    const double sign = bits[v] ? -1.0 : 1.0;
    bits[v] ^= 1;
    for (std::size_t j = q.row_start[v]; j < q.row_start[v + 1]; ++j)
      field[q.neighbor[j]] += sign * q.coupling[j];
    recount(v, bits[v] ? 1 : -1);
    visit();
  }
  return {min_infeasible, max_feasible};
}

// 3. Penalty separation.
Outcome penalty_separation(const std::vector<GtspInstance>& insts) {
  Outcome o;
  double tightest = std::numeric_limits<double>::infinity();
  for (const auto& inst : insts) {
    const auto m = build_qubo(inst);
    // Feasible maximum straight from the tours; the scan must agree.
    double max_tour = -std::numeric_limits<double>::infinity();
    for (const auto& t : oracle::all_tours(inst)) max_tour = std::max(max_tour, tour_cost(inst, t));
    const auto [min_bad, max_good] = scan_separation(inst, m);
    // Incremental sums drift by a few ulps; compare against the scan with slack.
    if (std::fabs(max_good - max_tour) > 1e-6 * std::max(1.0, max_tour)) {
      o.fail("feasible maximum mismatch on an N=" + std::to_string(inst.n()) + " K=" + std::to_string(inst.k()) + " instance");
    }
    if (!(min_bad > max_good)) o.fail("separation violated");
    tightest = std::min(tightest, min_bad - max_good);
  }
  o.detail << (o.pass ? "" : "; ") << insts.size() << " instances, smallest gap " << tightest;
  return o;
}

// 4. Exhaustive ground state vs exact baseline.
Outcome ground_states(const std::vector<GtspInstance>& insts) {
  Outcome o;
  for (const auto& inst : insts) {
    const auto m = build_qubo(inst);
    const auto g = exhaustive_ground_state(m);
    const auto d = decode(m, inst, g.bits);
    const auto exact = exact_solve(inst);
    if (!d.feasible()) {
      o.fail(inst.name() + ": ground state infeasible");
      continue;
    }
    const double cost = tour_cost(inst, *d.tour);
    if (std::fabs(cost - exact.cost) > kEnergyTol * std::max(1.0, exact.cost))
      o.fail(inst.name() + ": ground state cost differs from the exact optimum");
  }
  o.detail << (o.pass ? "" : "; ") << insts.size() << " instances";
  return o;
}

// 5. SA best-of-1500 with the default schedule.
Outcome sa_quality(const std::vector<GtspInstance>& insts) {
  Outcome o;
  std::size_t runs = 0, hits = 0;
  for (const auto& inst : insts) {
    const auto m = build_qubo(inst);
    const double ground = exhaustive_ground_state(m).energy;
    const auto schedule = default_schedule(m);
    for (std::uint64_t seed = 0; seed < kSaSeeds; ++seed) {
      const auto s = sa_sample(m, kSaReads, schedule, seed);
      ++runs;
      if (std::fabs(s.entries.front().energy - ground) <= kEnergyTol * std::max(1.0, std::fabs(ground)))
        ++hits;
      else
        o.fail(inst.name() + " seed " + std::to_string(seed) + " missed the ground state");
    }
  }
  o.detail << (o.pass ? "" : "; ") << hits << "/" << runs << " runs over " << insts.size()
           << " instances";
  return o;
}

// 6. Subspace invariants and dense agreement.
Outcome qaoa_invariants() {
  Outcome o;
  Rng rng(6);
  double worst_norm = 0.0, worst_dense = 0.0;
  std::size_t dense_checked = 0, shots = 0, bad_shots = 0;
  for (std::size_t draw = 0; draw < kQaoaDraws; ++draw) {
    const std::size_t k = 2 + uniform_below(rng, 2);
    const std::size_t n = k + uniform_below(rng, 5 - k);
    const auto inst = oracle::random_instance(rng, {n, k, uniform_below(rng, 2) == 0, true});
    const auto m = build_qubo(inst);
    const PartitionLayout layout(m.layout());
    const QaoaParams p{uniform_unit(rng) * std::numbers::pi, uniform_unit(rng) * std::numbers::pi / 2,
                       1 + uniform_below(rng, 2)};
    const std::uint64_t seed = rng();
    const auto state = run_qaoa(m, layout, p, seed);
    worst_norm = std::max(worst_norm, std::fabs(state.norm_squared() - 1.0));

    const auto s = sample_shots(state, m, 100, seed ^ 0x5eed);
    for (const auto& e : s.entries) {
      shots += e.count;
      for (std::size_t c = 0; c < k; ++c) {
        int ones = 0;
        for (std::size_t i = 0; i < n; ++i) ones += e.bits[c * n + i];
        if (ones != 1) {
          bad_shots += e.count;
          break;
        }
      }
    }

    if (m.num_vars() <= 12) {
      oracle::DenseSim sim(m.num_vars());
      const auto start = initial_state(layout, seed);
      std::size_t at = 0;
      for (std::size_t i = 0; i < start.dim(); ++i)
        if (std::abs(start.amps()[i]) > 0.5) at = i;
      auto dense_index = [](const Bitstring& b) {
        std::uint64_t x = 0;
        for (std::size_t v = 0; v < b.size(); ++v) x |= std::uint64_t{b[v]} << v;
        return x;
      };
      sim.set_basis(dense_index(start.bitstring_of(at)));
      for (std::size_t l = 0; l < p.layers; ++l) {
        sim.apply_diagonal_phase(m, p.gamma);
        for (const auto& ring : layout.ring_edges)
          for (auto [u, v] : ring) sim.apply_xy(u, v, p.beta);
      }
      for (std::size_t i = 0; i < state.dim(); ++i)
        worst_dense = std::max(worst_dense,
                               std::abs(sim.amps()[dense_index(state.bitstring_of(i))] - state.amps()[i]));
      ++dense_checked;
    }
  }
  if (worst_norm >= kNormTol) o.fail("norm drift " + std::to_string(worst_norm));
  if (bad_shots != 0) o.fail(std::to_string(bad_shots) + " shots left the step one-hot subspace");
  if (worst_dense > kDenseTol) o.fail("dense deviation " + std::to_string(worst_dense));
  o.detail << (o.pass ? "" : "; ") << kQaoaDraws << " draws, max norm drift " << worst_norm << ", "
           << shots << " shots one-hot, " << dense_checked << " dense checks, max |diff| "
           << worst_dense;
  return o;
}

// 7. Grid search reaches the optimum on Subsample Small instances.
Outcome qaoa_end_to_end() {
  Outcome o;
  const auto insts = group_instances("subsample_small.json");
  const GridConfig grid;  // 10x10, 1500 shots
  std::ostringstream tally;
  for (const auto& inst : insts) {
    const auto m = build_qubo(inst);
    const auto exact = exact_solve(inst);
    int hits = 0;
    for (int seed = 0; seed < kQaoaSeeds; ++seed) {
      const auto r = grid_search(m, inst, grid, static_cast<std::uint64_t>(seed));
      const auto report = build_report(inst, m, {r.samples}, exact, RandomBaseline{});
      const auto& b = report.backends.front();
      if (b.best_shot_ar && *b.best_shot_ar == 1.0) ++hits;
    }
    tally << " " << inst.name() << "=" << hits << "/" << kQaoaSeeds;
    if (hits < kQaoaRequiredHits) o.fail("below " + std::to_string(kQaoaRequiredHits) + "/10 on " + inst.name());
  }
  o.detail << (o.pass ? "" : ";") << tally.str();
  return o;
}

// 8. NN2C bound and determinism.
Outcome nn2c_bound(const std::vector<GtspInstance>& fixtures) {
  Outcome o;
  for (const auto& inst : fixtures) {
    const auto a = nn2c_reduce(inst);
    const auto b = nn2c_reduce(inst);
    if (a.first.k() != inst.k()) o.fail(inst.name() + ": cluster count changed");
    if (a.first.n() > 2 * inst.k()) o.fail(inst.name() + ": more than 2K nodes kept");
    if (!(a.first == b.first) || !(a.second == b.second)) o.fail(inst.name() + ": not deterministic");
  }
  o.detail << (o.pass ? "" : "; ") << fixtures.size() << " fixtures";
  return o;
}

// 9. Metric identities.
Outcome metric_identities(const std::vector<GtspInstance>& fixtures) {
  Outcome o;
  for (double x : {1e-3, 0.5, 1.0, 7.0, 123.25, 2944.0, 1e9})
    if (approximation_ratio(x, x) != 1.0) o.fail("approximation_ratio(x, x) != 1");

  std::vector<GtspInstance> solvable;
  for (const auto& f : fixtures)
    if (f.k() <= 9) solvable.push_back(f);
  for (const char* g : {"subsample_small.json", "subsample_medium.json", "preprocess_small.json",
                        "preprocess_medium.json"})
    for (auto& i : group_instances(g))
      if (i.k() <= 9) solvable.push_back(std::move(i));

  std::size_t reports = 0;
  for (const auto& inst : solvable) {
    const auto exact = exact_solve(inst);
    const auto rb = random_baseline(inst, exact.cost, kDefaultRandomSamples, 1);
    if (!rb.mean_cost || *rb.mean_cost < exact.cost) o.fail(inst.name() + ": mean random cost below optimum");
    if (inst.n() * inst.k() > 20) continue;
    const auto m = build_qubo(inst);
    const auto sa = sa_sample(m, 200, default_schedule(m, 100), 3);
    const auto r = build_report(inst, m, {sa, exhaustive_sample(m)}, exact, rb);
    for (const auto& b : r.backends) {
      if (b.ar_distribution.empty()) continue;
      double mx = 0.0;
      for (const auto& p : b.ar_distribution) mx = std::max(mx, p.ar);
      if (!b.best_shot_ar || *b.best_shot_ar != mx) o.fail(inst.name() + ": best_shot_ar is not the maximum");
      ++reports;
    }
  }
  o.detail << (o.pass ? "" : "; ") << solvable.size() << " instances, " << reports << " backend reports";
  return o;
}

// 10. Two bench runs produce identical bytes.
Outcome bench_determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / "gtspq_acceptance_bench";
  fs::remove_all(root);
  const std::string group = (kFixtures / "groups" / "subsample_small.json").string();
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("'") + GTSPQ_CLI + "' bench '" + group + "' --seed 11 --out '" +
                            (root / run).string() + "' >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) o.fail(std::string("bench run ") + run + " failed");
  }
  std::size_t files = 0;
  if (o.pass) {
    for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
      if (!e.is_regular_file()) continue;
      const auto rel = fs::relative(e.path(), root / "a");
      ++files;
      if (!fs::exists(root / "b" / rel) || read_file(e.path()) != read_file(root / "b" / rel))
        o.fail("differs: " + rel.string());
    }
    std::size_t other = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "b")) other += e.is_regular_file();
    if (other != files) o.fail("file sets differ");
  }
  o.detail << (o.pass ? "" : "; ") << files << " files compared";
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const auto random = small_random_instances();
  auto small = random;
  for (auto& i : group_instances("subsample_small.json")) small.push_back(std::move(i));
  const auto fixtures = all_fixtures();

  std::vector<GtspInstance> sa_set = group_instances("subsample_small.json");
  for (std::size_t i = 0; i < random.size(); i += 6) sa_set.push_back(random[i]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"qubit counts of the reference shapes", qubit_counts},
      {"feasible-energy identity", [&] { return feasible_energy(random); }},
      {"penalty separation", [&] { return penalty_separation(random); }},
      {"ground state equals exact optimum", [&] { return ground_states(small); }},
      {"SA best-of-1500 reaches the ground state", [&] { return sa_quality(sa_set); }},
      {"QAOA subspace invariants", qaoa_invariants},
      {"QAOA grid search finds the optimum", qaoa_end_to_end},
      {"NN2C bound and determinism", [&] { return nn2c_bound(fixtures); }},
      {"metric identities", [&] { return metric_identities(fixtures); }},
      {"bench determinism", bench_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu: %s %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
