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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtspq/qubo.hpp"

namespace gtspq {

enum class Backend { kExhaustive, kSimulatedAnnealing, kQaoa, kExternal };

// Why a backend produced no usable shots. kNotApplicable covers runs that
// were skipped (size caps, missing baseline).
enum class Failure { kInvalidTour, kTimeout, kCouldNotEmbed, kNotApplicable };

std::string_view to_string(Backend b);
std::string_view to_string(Failure f);
Backend backend_from_string(std::string_view s);
Failure failure_from_string(std::string_view s);

struct SampleEntry {
  Bitstring bits;
  std::uint64_t count = 0;
  double energy = 0.0;

  bool operator==(const SampleEntry&) const = default;
};

// Distinct bitstrings with multiplicities. Entries are sorted by energy,
// then bitstring; counts sum to num_reads unless `failure` is set.
struct SampleSet {
  std::vector<SampleEntry> entries;
  std::uint64_t num_reads = 0;
  Backend backend = Backend::kExhaustive;
  double wall_time_s = 0.0;
  std::optional<Failure> failure;

  bool operator==(const SampleSet&) const = default;

  static SampleSet failed(Backend backend, Failure failure, double wall_time_s = 0.0);
};

// Merges raw reads into a SampleSet, evaluating every energy against `model`.
SampleSet aggregate_reads(const QuboModel& model, const std::vector<Bitstring>& reads,
                          Backend backend);

// Same, from (bitstring, count) pairs; duplicate bitstrings are merged.
SampleSet aggregate_counts(const QuboModel& model,
                           const std::vector<std::pair<Bitstring, std::uint64_t>>& counts,
                           Backend backend);

// {backend, num_reads, wall_time_s, failure, entries: [{bits, count, energy}]}
std::string to_json(const SampleSet& s);

// Parses the JSON form. When `model` is given, bit lengths are checked and
// energies are recomputed from it instead of trusted.
SampleSet sample_set_from_json(std::string_view text, const QuboModel* model = nullptr);

}  // namespace gtspq
