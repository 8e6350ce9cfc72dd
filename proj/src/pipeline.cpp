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

#include "gtspq/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "gtspq/baseline.hpp"
#include "gtspq/error.hpp"
#include "gtspq/external.hpp"
#include "gtspq/gtsplib.hpp"
#include "gtspq/qubo.hpp"
#include "gtspq/random.hpp"

namespace gtspq {

void RunConfig::validate() const {
  if (backends.empty()) throw SchemaError("at least one backend is required");
  if (std::find(backends.begin(), backends.end(), Backend::kExternal) != backends.end() &&
      !endpoint) {
    throw SchemaError("the external backend needs an endpoint");
  }
  if (sa.reads == 0 || grid.shots == 0) throw SchemaError("reads and shots must be positive");
  if (jobs == 0) throw SchemaError("jobs must be positive");
}

std::uint64_t subsample_seed(std::uint64_t run_seed, std::size_t member_index) {
  return derive_seed(derive_seed(run_seed, "subsample"), member_index);
}

std::uint64_t instance_seed(std::uint64_t run_seed, const std::string& instance_name) {
  return derive_seed(run_seed, std::string_view(instance_name));
}

PreparedInstance prepare_instance(const GroupMember& member, std::size_t member_index,
                                  std::uint64_t run_seed) {
  GtspInstance inst = load_gtsplib(member.path);
  switch (member.reduction.kind) {
    case Reduction::Kind::kNone:
      return {std::move(inst), std::nullopt, std::nullopt};
    case Reduction::Kind::kNn2c: {
      const std::size_t n = inst.n();
      auto [reduced, record] = nn2c_reduce(inst);
      return {std::move(reduced), std::move(record), n};
    }
    case Reduction::Kind::kSubsample: {
      const std::size_t n = inst.n();
      const auto seed = member.reduction.seed.value_or(subsample_seed(run_seed, member_index));
      auto [reduced, record] = cluster_subsample(inst, member.reduction.target_nodes, seed);
      return {std::move(reduced), std::move(record), n};
    }
  }
  throw SchemaError("unknown reduction kind");
}

BackendRun run_backend(Backend backend, const QuboModel& model, const GtspInstance& inst,
                       const RunConfig& config, std::uint64_t inst_seed) {
  BackendRun run;
  try {
    switch (backend) {
      case Backend::kExhaustive:
        run.samples = exhaustive_sample(model, config.exhaustive_cap);
        break;
      case Backend::kSimulatedAnnealing:
        run.samples = sa_sample(model, config.sa.reads, default_schedule(model, config.sa.sweeps),
                                derive_seed(inst_seed, "sa"));
        break;
      case Backend::kQaoa: {
        auto grid = grid_search(model, inst, config.grid, derive_seed(inst_seed, "qaoa"));
        run.samples = std::move(grid.samples);
        run.grid_csv = grid_summary_csv(grid);
        break;
      }
      case Backend::kExternal: {
        HttpTransport transport(*config.endpoint);
        run.samples = external_sampler_submit(model, transport, config.sa.reads);
        break;
      }
    }
  } catch (const CapacityError&) {
    run.samples = SampleSet::failed(backend, Failure::kNotApplicable);
  }
  return run;
}

namespace {

using ojson = nlohmann::ordered_json;

std::string raw_name(const std::string& inst, Backend b) {
  return inst + "_" + std::string(to_string(b)) + ".json";
}

struct InstanceEntry {
  std::string name;
  std::optional<std::size_t> original_n;
};

struct RunManifest {
  std::string group;
  std::uint64_t seed = 0;
  ZeroWeight zeros = ZeroWeight::kMissingEdge;
  std::size_t exact_cap = 9;
  std::size_t random_samples = kDefaultRandomSamples;
  std::vector<Backend> backends;
  std::vector<InstanceEntry> instances;
};

std::string manifest_json(const RunManifest& m) {
  ojson j;
  j["schema"] = "v1";
  j["group"] = m.group;
  j["seed"] = m.seed;
  j["zero_is_edge"] = m.zeros == ZeroWeight::kEdge;
  j["exact_cap"] = m.exact_cap;
  j["random_samples"] = m.random_samples;
  j["backends"] = ojson::array();
  for (auto b : m.backends) j["backends"].push_back(std::string(to_string(b)));
  j["instances"] = ojson::array();
  for (const auto& e : m.instances) {
    ojson ji;
    ji["name"] = e.name;
    ji["original_n"] = e.original_n ? ojson(*e.original_n) : ojson(nullptr);
    j["instances"].push_back(std::move(ji));
  }
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.group = j.at("group").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.zeros = j.at("zero_is_edge").get<bool>() ? ZeroWeight::kEdge : ZeroWeight::kMissingEdge;
    m.exact_cap = j.at("exact_cap").get<std::size_t>();
    m.random_samples = j.at("random_samples").get<std::size_t>();
    for (const auto& b : j.at("backends")) m.backends.push_back(backend_from_string(b.get<std::string>()));
    for (const auto& ji : j.at("instances")) {
      InstanceEntry e;
      e.name = ji.at("name").get<std::string>();
      if (!ji.at("original_n").is_null()) e.original_n = ji.at("original_n").get<std::size_t>();
      m.instances.push_back(std::move(e));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("run manifest: ") + e.what());
  }
}

// Everything that does not depend on shots: optimum and random baseline.
struct Baselines {
  std::optional<ExactResult> exact;
  RandomBaseline random;
};

Baselines compute_baselines(const GtspInstance& inst, const RunManifest& m) {
  Baselines b;
  if (inst.k() <= m.exact_cap) {
    try {
      b.exact = exact_solve(inst, {m.exact_cap, m.zeros});
    } catch (const InstanceError&) {
      // No tour avoids missing edges; every shot will decode as infeasible.
    }
  }
  b.random = random_baseline(inst, b.exact ? std::optional(b.exact->cost) : std::nullopt,
                             m.random_samples,
                             derive_seed(instance_seed(m.seed, inst.name()), "random"), m.zeros);
  return b;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

GroupReport run_bench(const RunConfig& config) {
  config.validate();
  const auto& members = config.group.instances;

  std::vector<PreparedInstance> prepared;
  prepared.reserve(members.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto p = prepare_instance(members[i], i, config.seed);
    check_membership(config.group.name, members[i].reduction, p.original_n.value_or(p.instance.n()),
                     p.instance.n());
    if (!names.insert(p.instance.name()).second)
      throw InstanceError("instance name '" + p.instance.name() + "' appears twice in the group");
    prepared.push_back(std::move(p));
  }

  RunManifest manifest;
  manifest.group = std::string(to_string(config.group.name));
  manifest.seed = config.seed;
  manifest.zeros = config.zeros;
  manifest.exact_cap = config.exact_cap;
  manifest.random_samples = config.random_samples;
  manifest.backends = config.backends;
  for (const auto& p : prepared) manifest.instances.push_back({p.instance.name(), p.original_n});

  const auto& out = config.out;
  std::filesystem::create_directories(out / "instances");
  std::filesystem::create_directories(out / "raw");
  write_file_atomic(out / "run.json", manifest_json(manifest));

  GroupReport report;
  report.group = manifest.group;
  report.seed = config.seed;
  report.instances.resize(prepared.size());

  parallel_for(prepared.size(), config.jobs, [&](std::size_t i) {
    const auto& p = prepared[i];
    const auto& inst = p.instance;
    write_file_atomic(out / "instances" / (inst.name() + ".gtsp"), to_gtsplib(inst));
    if (p.record) {
      write_file_atomic(out / "instances" / (inst.name() + ".reduction.json"), to_json(*p.record));
    }
    const QuboModel model = build_qubo(inst, config.zeros);
    const auto seed = instance_seed(config.seed, inst.name());

    std::vector<SampleSet> sets;
    for (Backend b : config.backends) {
      auto run = run_backend(b, model, inst, config, seed);
      if (!config.record_timing) run.samples.wall_time_s = 0.0;
      write_file_atomic(out / "raw" / raw_name(inst.name(), b), to_json(run.samples));
      if (run.grid_csv) write_file_atomic(out / "qaoa" / (inst.name() + "_grid.csv"), *run.grid_csv);
      sets.push_back(std::move(run.samples));
    }
    const auto base = compute_baselines(inst, manifest);
    report.instances[i] = build_report(inst, model, sets, base.exact, base.random, p.original_n);
  });

  emit_report(report, out);
  return report;
}

GroupReport run_report(const std::filesystem::path& dir) {
  const auto manifest = manifest_from_json(read_file(dir / "run.json"));
  GroupReport report;
  report.group = manifest.group;
  report.seed = manifest.seed;
  for (const auto& e : manifest.instances) {
    const auto inst = load_gtsplib(dir / "instances" / (e.name + ".gtsp"));
    const QuboModel model = build_qubo(inst, manifest.zeros);
    std::vector<SampleSet> sets;
    for (Backend b : manifest.backends)
      sets.push_back(sample_set_from_json(read_file(dir / "raw" / raw_name(e.name, b)), &model));
    const auto base = compute_baselines(inst, manifest);
    report.instances.push_back(build_report(inst, model, sets, base.exact, base.random, e.original_n));
  }
  emit_report(report, dir);
  return report;
}

}  // namespace gtspq
