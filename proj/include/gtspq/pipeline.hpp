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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gtspq/bench.hpp"
#include "gtspq/instance.hpp"
#include "gtspq/preprocess.hpp"
#include "gtspq/qaoa.hpp"
#include "gtspq/sample_set.hpp"
#include "gtspq/sampler.hpp"

namespace gtspq {

struct SaConfig {
  std::size_t reads = kDefaultNumReads;
  std::size_t sweeps = kDefaultSweeps;
};

struct RunConfig {
  ExperimentGroup group;
  std::vector<Backend> backends{Backend::kExhaustive, Backend::kSimulatedAnnealing,
                                Backend::kQaoa};
  SaConfig sa;
  GridConfig grid;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  ZeroWeight zeros = ZeroWeight::kMissingEdge;
  std::size_t jobs = 1;
  std::size_t exhaustive_cap = kDefaultExhaustiveCap;
  std::size_t exact_cap = 9;
  std::size_t random_samples = kDefaultRandomSamples;
  std::optional<std::string> endpoint;  // required by Backend::kExternal
  bool record_timing = false;           // otherwise wall times are written as 0

  // Throws SchemaError when no backend is selected or external lacks an
  // endpoint.
  void validate() const;
};

// Stream seeds, all derived from the run seed:
//   subsample draw of member i (unless pinned): derive_seed(derive_seed(seed, "subsample"), i)
//   per instance:  s_i = derive_seed(seed, <instance name>)
//   SA: derive_seed(s_i, "sa"); QAOA grid: derive_seed(s_i, "qaoa");
//   random baseline: derive_seed(s_i, "random")
std::uint64_t subsample_seed(std::uint64_t run_seed, std::size_t member_index);
std::uint64_t instance_seed(std::uint64_t run_seed, const std::string& instance_name);

struct PreparedInstance {
  GtspInstance instance;
  std::optional<ReductionRecord> record;
  std::optional<std::size_t> original_n;
};

// Loads a group member and applies its reduction.
PreparedInstance prepare_instance(const GroupMember& member, std::size_t member_index,
                                  std::uint64_t run_seed);

struct BackendRun {
  SampleSet samples;
  std::optional<std::string> grid_csv;  // QAOA only
};

// Runs one backend. Size caps surface as Failure::kNotApplicable.
BackendRun run_backend(Backend backend, const QuboModel& model, const GtspInstance& inst,
                       const RunConfig& config, std::uint64_t inst_seed);

// Full pipeline over config.group. Writes under config.out:
//   run.json                      run parameters and instance list
//   instances/<name>.gtsp         the (reduced) instance as solved
//   instances/<name>.reduction.json
//   raw/<name>_<backend>.json     shots, written before any aggregation
//   qaoa/<name>_grid.csv          per-cell grid summary
//   report.json, *.csv, violin/   see emit_report
GroupReport run_bench(const RunConfig& config);

// Rebuilds the report of a finished bench directory from its raw shots and
// re-emits it into the same directory.
GroupReport run_report(const std::filesystem::path& dir);

}  // namespace gtspq
