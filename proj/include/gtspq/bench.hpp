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
#include <string_view>
#include <vector>

#include "gtspq/baseline.hpp"
#include "gtspq/instance.hpp"
#include "gtspq/qubo.hpp"
#include "gtspq/sample_set.hpp"

namespace gtspq {

// optimal / cost. Undefined (nullopt) when optimal is 0. Throws ModelError
// if cost < optimal or either value is negative or non-finite.
std::optional<double> approximation_ratio(double optimal, double cost);

// Shots decoding to a feasible tour over num_reads; 0 for failed sets.
double feasibility_ratio(const SampleSet& samples, const QuboModel& model,
                         const GtspInstance& inst);

struct RandomBaseline {
  std::size_t samples = 0;                // tours drawn
  std::size_t valid = 0;                  // of which avoid missing edges
  std::optional<double> mean_cost;        // over valid tours
  std::optional<double> mean_ar;          // mean of optimal / cost over valid tours
};

inline constexpr std::size_t kDefaultRandomSamples = 10000;

RandomBaseline random_baseline(const GtspInstance& inst, std::optional<double> optimal,
                               std::size_t samples, std::uint64_t seed,
                               ZeroWeight zeros = ZeroWeight::kMissingEdge);

// One approximation-ratio value with its shot multiplicity.
struct ArPoint {
  double ar = 0.0;
  std::uint64_t count = 0;

  bool operator==(const ArPoint&) const = default;
};

struct BackendReport {
  Backend backend = Backend::kExhaustive;
  std::uint64_t num_reads = 0;
  double feasible_shot_rate = 0.0;
  std::vector<ArPoint> ar_distribution;  // descending AR, equal values merged
  std::optional<double> best_shot_ar;
  std::optional<double> mean_ar;           // count-weighted
  std::optional<double> mean_solver_cost;  // count-weighted over feasible shots
  double wall_time_s = 0.0;
  std::optional<Failure> failure;

  bool operator==(const BackendReport&) const = default;
};

struct InstanceReport {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t qubits = 0;
  std::optional<std::size_t> original_n;  // set for reduced instances
  std::optional<double> optimal_cost;     // absent when the exact solver was skipped
  std::optional<double> mean_random_cost;
  std::optional<double> mean_random_ar;
  std::vector<BackendReport> backends;

  bool operator==(const InstanceReport&) const = default;
};

// Per backend: failed sets keep their failure; a set without a feasible shot
// is marked Failure::kInvalidTour. AR values exist only when the optimum is
// known and non-zero.
InstanceReport build_report(const GtspInstance& inst, const QuboModel& model,
                            const std::vector<SampleSet>& sample_sets,
                            const std::optional<ExactResult>& exact,
                            const RandomBaseline& random,
                            std::optional<std::size_t> original_n = std::nullopt);

enum class GroupName { kSubsampleSmall, kSubsampleMedium, kPreprocessSmall, kPreprocessMedium, kCustom };

std::string_view to_string(GroupName g);
// Throws SchemaError on unknown names.
GroupName group_name_from_string(std::string_view s);

struct Reduction {
  enum class Kind { kNone, kNn2c, kSubsample };
  Kind kind = Kind::kNone;
  std::size_t target_nodes = 0;       // kSubsample only
  std::optional<std::uint64_t> seed;  // kSubsample only; derived from the run seed when absent

  bool operator==(const Reduction&) const = default;
};

// "none", "nn2c", "subsample:<target>". Throws SchemaError otherwise.
Reduction reduction_from_string(std::string_view s);
std::string to_string(const Reduction& r);

struct GroupMember {
  std::filesystem::path path;
  Reduction reduction;
};

struct ExperimentGroup {
  GroupName name = GroupName::kCustom;
  std::vector<GroupMember> instances;
};

// {"name": "...", "instances": [{"path": "...", "reduce": "subsample:5", "seed": 3}]}
// Relative paths resolve against `base_dir`.
ExperimentGroup group_from_json(std::string_view text, const std::filesystem::path& base_dir);
ExperimentGroup load_group(const std::filesystem::path& file);

// Throws InstanceError when a member does not fit its group: subsample
// groups need cluster subsampling, preprocess groups NN2C; reduced sizes must
// fall in the group's node range (3-5 small, 3-20 medium) and preprocess
// originals in 14-24 (small) or 14-100 (medium) nodes. Custom accepts all.
void check_membership(GroupName group, const Reduction& reduction, std::size_t original_n,
                      std::size_t reduced_n);

struct GroupReport {
  std::string group;
  std::uint64_t seed = 0;
  std::vector<InstanceReport> instances;

  bool operator==(const GroupReport&) const = default;
};

// Schema "v1". Stable key order, two-space indentation, trailing newline.
std::string to_json(const GroupReport& report);
GroupReport group_report_from_json(std::string_view text);

// name,n,k,qubits,original_n
std::string instances_csv(const GroupReport& report);
// instance,backend,feasible_pct,failure
std::string feasibility_csv(const GroupReport& report);
// instance,backend,best_shot_ar,mean_ar,mean_random_ar
std::string ar_csv(const GroupReport& report);
// ar, one row per feasible shot (multiplicities expanded)
std::string violin_csv(const BackendReport& backend);

// Writes report.json, the three CSV tables and violin/<instance>_<backend>.csv
// under `dir`, each atomically.
void emit_report(const GroupReport& report, const std::filesystem::path& dir);

// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace gtspq
