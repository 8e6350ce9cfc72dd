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
#include <httplib.h>

#include <cmath>
#include <functional>
#include <thread>

#include "gtspq/baseline.hpp"
#include "gtspq/error.hpp"
#include "gtspq/external.hpp"
#include "gtspq/sampler.hpp"
#include "oracles.hpp"

using namespace gtspq;

namespace {

GtspInstance pair_instance() {
  WeightMatrix w(2);
  w(0, 1) = w(1, 0) = 5;
  return GtspInstance("pair", {{0}, {1}}, w, true);
}

class MockTransport : public SamplerTransport {
 public:
  explicit MockTransport(std::function<std::string(const std::string&)> fn) : fn_(std::move(fn)) {}
  std::string exchange(const std::string& request) override {
    last_request = request;
    return fn_(request);
  }
  std::string last_request;

 private:
  std::function<std::string(const std::string&)> fn_;
};

void check_energies(const QuboModel& m, const SampleSet& s) {
  std::uint64_t total = 0;
  for (const auto& e : s.entries) {
    CHECK(std::fabs(e.energy - energy(m, e.bits)) <= 1e-9);
    total += e.count;
  }
  if (!s.failure) CHECK(total == s.num_reads);
}

SampleSet without_time(SampleSet s) {
  s.wall_time_s = 0.0;
  return s;
}

}  // namespace

TEST_CASE("exhaustive ground state") {
  const auto inst = pair_instance();
  const auto m = build_qubo(inst);
  const auto g = exhaustive_ground_state(m);
  CHECK(g.energy == 10.0);
  const auto d = decode(m, inst, g.bits);
  REQUIRE(d.feasible());
  // 0110 precedes 1001, so the cycle is reported starting at node 1.
  CHECK(d.tour->order == std::vector<NodeId>{1, 0});
  CHECK(g.bits == Bitstring{0, 1, 1, 0});

  QuboModel zero(5);
  zero.add_offset(2.5);
  const auto z = exhaustive_ground_state(zero);
  CHECK(z.bits == Bitstring(5, 0));
  CHECK(z.energy == 2.5);

  // Two degenerate minima: 10 and 01. Lexicographic order compares bit 0
  // first, so 01 wins.
  QuboModel tie(2);
  tie.add_linear(0, -1);
  tie.add_linear(1, -1);
  tie.add_quadratic(0, 1, 2);
  CHECK(exhaustive_ground_state(tie).bits == Bitstring{0, 1});

  CHECK_THROWS_AS(exhaustive_ground_state(QuboModel(25)), CapacityError);
  CHECK_THROWS_AS(exhaustive_ground_state(QuboModel(6), 5), CapacityError);

  const auto s = exhaustive_sample(m);
  CHECK(s.backend == Backend::kExhaustive);
  CHECK(s.num_reads == 1);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].bits == g.bits);
}

TEST_CASE("exhaustive minimum matches a plain scan") {
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = oracle::random_instance(rng, {4, 3, rep % 2 == 0, rep % 3 != 0});
    const auto m = build_qubo(inst);
    double best = INFINITY;
    std::uint64_t arg = 0;
    for (std::uint64_t x = 0; x < 4096; ++x) {
      const double e = energy(m, oracle::bits_of(x, 12));
      if (e < best) best = e, arg = x;
    }
    const auto g = exhaustive_ground_state(m);
    CHECK(g.energy == doctest::Approx(best).epsilon(1e-12));
    CHECK(std::fabs(energy(m, g.bits) - g.energy) <= 1e-9);
    // Random real weights make the minimum unique up to the direction of the
    // cycle, which the (bit 0 first) rule resolves; compare decoded cost.
    const auto d = decode(m, inst, g.bits);
    REQUIRE(d.feasible());
    CHECK(tour_cost(inst, *d.tour) ==
          doctest::Approx(*oracle::brute_force_optimum(inst, ZeroWeight::kMissingEdge)));
    CHECK(tour_cost(inst, *d.tour) == doctest::Approx(exact_solve(inst).cost));
    (void)arg;
  }
}

TEST_CASE("anneal schedule") {
  AnnealSchedule s;
  CHECK_NOTHROW(s.validate());
  s.sweeps = 5;
  s.beta_initial = 1;
  s.beta_final = 16;
  CHECK(s.beta_at(0) == doctest::Approx(1));
  CHECK(s.beta_at(4) == doctest::Approx(16));
  CHECK(s.beta_at(2) == doctest::Approx(4));
  s.interpolation = Interpolation::kLinear;
  CHECK(s.beta_at(2) == doctest::Approx(8.5));
  for (std::size_t i = 1; i < 5; ++i) CHECK(s.beta_at(i) > s.beta_at(i - 1));

  AnnealSchedule bad;
  bad.sweeps = 0;
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = {};
  bad.beta_initial = 0;
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = {};
  bad.beta_initial = 20;
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = {};
  bad.beta_final = INFINITY;
  CHECK_THROWS_AS(bad.validate(), ModelError);

  const auto m = build_qubo(pair_instance());
  const auto d = default_schedule(m, 300);
  CHECK(d.sweeps == 300);
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("simulated annealing basics") {
  QuboModel one(1);
  one.add_linear(0, 5);
  const auto s = sa_sample(one, 100, default_schedule(one, 50), 3);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].bits == Bitstring{0});
  CHECK(s.entries[0].count == 100);
  CHECK(s.backend == Backend::kSimulatedAnnealing);

  CHECK_THROWS_AS(sa_sample(QuboModel(0), 1, AnnealSchedule{}, 0), ModelError);
  CHECK_THROWS_AS(sa_sample(one, 0, AnnealSchedule{}, 0), ModelError);
}

TEST_CASE("simulated annealing is deterministic and honest") {
  Rng rng(13);
  const auto inst = oracle::random_instance(rng, {5, 3, false, true});
  const auto m = build_qubo(inst);
  const auto sched = default_schedule(m, 200);
  const auto a = sa_sample(m, 300, sched, 42);
  const auto b = sa_sample(m, 300, sched, 42);
  CHECK(without_time(a) == without_time(b));
  CHECK(without_time(a) != without_time(sa_sample(m, 300, sched, 43)));
  CHECK(a.num_reads == 300);
  check_energies(m, a);
  for (std::size_t i = 1; i < a.entries.size(); ++i) {
    const auto& p = a.entries[i - 1];
    const auto& q = a.entries[i];
    CHECK((p.energy < q.energy || (p.energy == q.energy && p.bits < q.bits)));
  }
}

TEST_CASE("simulated annealing finds small ground states") {
  Rng rng(99);
  for (int rep = 0; rep < 6; ++rep) {
    const auto inst = oracle::random_instance(rng, {5, 4, rep % 2 == 0, true});
    const auto m = build_qubo(inst);
    const auto s = sa_sample(m, 1500, default_schedule(m), static_cast<std::uint64_t>(rep));
    CHECK(s.entries.front().energy == doctest::Approx(exhaustive_ground_state(m).energy));
  }
}

TEST_CASE("more sweeps do not hurt on average") {
  Rng rng(16);
  const auto inst = oracle::random_instance(rng, {4, 4, false, false});
  const auto m = build_qubo(inst);
  REQUIRE(m.num_vars() == 16);
  double short_sum = 0, long_sum = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    short_sum += sa_sample(m, 5, default_schedule(m, 20), seed).entries.front().energy;
    long_sum += sa_sample(m, 5, default_schedule(m, 2000), seed).entries.front().energy;
  }
  CHECK(long_sum / 30 <= short_sum / 30);
}

TEST_CASE("sample set aggregation and json") {
  const auto m = build_qubo(pair_instance());
  const std::vector<Bitstring> reads{{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {0, 0, 0, 0}};
  const auto s = aggregate_reads(m, reads, Backend::kQaoa);
  CHECK(s.num_reads == 4);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].bits == Bitstring{0, 1, 1, 0});
  CHECK(s.entries[1].bits == Bitstring{1, 0, 0, 1});
  CHECK(s.entries[1].count == 2);
  CHECK(s.entries[2].energy == 44.0);
  check_energies(m, s);

  const auto merged = aggregate_counts(m, {{{1, 0, 0, 1}, 3}, {{1, 0, 0, 1}, 4}}, Backend::kExternal);
  REQUIRE(merged.entries.size() == 1);
  CHECK(merged.entries[0].count == 7);
  CHECK_THROWS_AS(aggregate_reads(m, {{1, 0}}, Backend::kQaoa), ModelError);

  CHECK(sample_set_from_json(to_json(s)) == s);
  CHECK(sample_set_from_json(to_json(s), &m) == s);
  const auto f = SampleSet::failed(Backend::kQaoa, Failure::kTimeout, 1.5);
  CHECK(sample_set_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(sample_set_from_json("{"), SchemaError);
  CHECK_THROWS_AS(sample_set_from_json(to_json(aggregate_reads(QuboModel(3), {{1, 1, 1}}, Backend::kQaoa)), &m),
                  SchemaError);

  for (auto b : {Backend::kExhaustive, Backend::kSimulatedAnnealing, Backend::kQaoa, Backend::kExternal})
    CHECK(backend_from_string(to_string(b)) == b);
  for (auto x : {Failure::kInvalidTour, Failure::kTimeout, Failure::kCouldNotEmbed, Failure::kNotApplicable})
    CHECK(failure_from_string(to_string(x)) == x);
  CHECK_THROWS_AS(backend_from_string("dwave"), SchemaError);
  CHECK_THROWS_AS(failure_from_string("nope"), SchemaError);
}

TEST_CASE("external sampler adapter") {
  const auto inst = pair_instance();
  const auto m = build_qubo(inst);

  SUBCASE("echoed ground state, remote energies ignored") {
    MockTransport t([](const std::string&) {
      return R"({"status":"ok","samples":[{"bits":"1001","count":5,"energy":-1000}]})";
    });
    const auto s = external_sampler_submit(m, t, 5);
    REQUIRE(s.entries.size() == 1);
    CHECK(s.entries[0].energy == 10.0);
    CHECK(s.num_reads == 5);
    CHECK(s.backend == Backend::kExternal);
    CHECK(t.last_request.find("\"num_reads\":5") != std::string::npos);
  }
  SUBCASE("embedding failure") {
    MockTransport t([](const std::string&) { return R"({"status":"error","error":"embedding_failed"})"; });
    const auto s = external_sampler_submit(m, t, 5);
    CHECK(s.failure == Failure::kCouldNotEmbed);
    CHECK(s.entries.empty());
  }
  SUBCASE("remote timeout and transport failure") {
    MockTransport t([](const std::string&) { return R"({"status":"error","error":"timeout"})"; });
    CHECK(external_sampler_submit(m, t, 5).failure == Failure::kTimeout);
    MockTransport down([](const std::string&) -> std::string { throw TransportError("down"); });
    CHECK(external_sampler_submit(m, down, 5).failure == Failure::kTimeout);
  }
  SUBCASE("schema violations") {
    MockTransport wrong_len([](const std::string&) {
      return R"({"status":"ok","samples":[{"bits":"100","count":5}]})";
    });
    CHECK_THROWS_AS(external_sampler_submit(m, wrong_len, 5), SchemaError);
    MockTransport garbage([](const std::string&) { return "not json"; });
    CHECK_THROWS_AS(external_sampler_submit(m, garbage, 5), SchemaError);
    MockTransport code([](const std::string&) { return R"({"status":"error","error":"quota"})"; });
    CHECK_THROWS_AS(external_sampler_submit(m, code, 5), SchemaError);
    MockTransport status([](const std::string&) { return R"({"status":"maybe"})"; });
    CHECK_THROWS_AS(external_sampler_submit(m, status, 5), SchemaError);
    MockTransport chars([](const std::string&) {
      return R"({"status":"ok","samples":[{"bits":"10x1","count":5}]})";
    });
    CHECK_THROWS_AS(external_sampler_submit(m, chars, 5), SchemaError);
  }
}

TEST_CASE("http transport") {
  httplib::Server server;
  server.Post("/sample", [](const httplib::Request& req, httplib::Response& res) {
    const bool ok = req.body.find("\"num_reads\":3") != std::string::npos;
    res.set_content(ok ? R"({"status":"ok","samples":[{"bits":"1001","count":3}]})"
                       : R"({"status":"error","error":"timeout"})",
                     "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const auto m = build_qubo(pair_instance());
  HttpTransport http("http://127.0.0.1:" + std::to_string(port) + "/sample", std::chrono::seconds(5));
  const auto s = external_sampler_submit(m, http, 3);
  CHECK_FALSE(s.failure.has_value());
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].count == 3);

  HttpTransport missing("http://127.0.0.1:" + std::to_string(port) + "/absent", std::chrono::seconds(5));
  CHECK(external_sampler_submit(m, missing, 3).failure == Failure::kTimeout);

  server.stop();
  worker.join();

  HttpTransport closed("http://127.0.0.1:" + std::to_string(port) + "/sample", std::chrono::seconds(2));
  CHECK(external_sampler_submit(m, closed, 3).failure == Failure::kTimeout);
}
