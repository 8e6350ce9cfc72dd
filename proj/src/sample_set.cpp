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

#include "gtspq/sample_set.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"

namespace gtspq {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::kExhaustive: return "exhaustive";
    case Backend::kSimulatedAnnealing: return "sa";
    case Backend::kQaoa: return "qaoa";
    case Backend::kExternal: return "external";
  }
  return "?";
}

std::string_view to_string(Failure f) {
  switch (f) {
    case Failure::kInvalidTour: return "InvalidTour";
    case Failure::kTimeout: return "Timeout";
    case Failure::kCouldNotEmbed: return "CouldNotEmbed";
    case Failure::kNotApplicable: return "NotApplicable";
  }
  return "?";
}

Backend backend_from_string(std::string_view s) {
  for (auto b : {Backend::kExhaustive, Backend::kSimulatedAnnealing, Backend::kQaoa,
                 Backend::kExternal})
    if (to_string(b) == s) return b;
  throw SchemaError("unknown backend '" + std::string(s) + "'");
}

Failure failure_from_string(std::string_view s) {
  for (auto f : {Failure::kInvalidTour, Failure::kTimeout, Failure::kCouldNotEmbed,
                 Failure::kNotApplicable})
    if (to_string(f) == s) return f;
  throw SchemaError("unknown failure '" + std::string(s) + "'");
}

SampleSet SampleSet::failed(Backend backend, Failure failure, double wall_time_s) {
  SampleSet s;
  s.backend = backend;
  s.failure = failure;
  s.wall_time_s = wall_time_s;
  return s;
}

SampleSet aggregate_counts(const QuboModel& model,
                           const std::vector<std::pair<Bitstring, std::uint64_t>>& counts,
                           Backend backend) {
  std::map<Bitstring, std::uint64_t> merged;
  for (const auto& [bits, count] : counts) {
    if (bits.size() != model.num_vars()) {
      throw ModelError("sample has " + std::to_string(bits.size()) + " bits, model has " +
                       std::to_string(model.num_vars()));
    }
    if (count > 0) merged[bits] += count;
  }
  SampleSet s;
  s.backend = backend;
  for (auto& [bits, count] : merged) {
    s.num_reads += count;
    s.entries.push_back({bits, count, energy(model, bits)});
  }
  std::sort(s.entries.begin(), s.entries.end(), [](const SampleEntry& a, const SampleEntry& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.bits < b.bits;
  });
  return s;
}

SampleSet aggregate_reads(const QuboModel& model, const std::vector<Bitstring>& reads,
                          Backend backend) {
  std::vector<std::pair<Bitstring, std::uint64_t>> counts;
  counts.reserve(reads.size());
  for (const auto& r : reads) counts.emplace_back(r, 1);
  return aggregate_counts(model, counts, backend);
}

std::string to_json(const SampleSet& s) {
  nlohmann::ordered_json j;
  j["backend"] = to_string(s.backend);
  j["num_reads"] = s.num_reads;
  j["wall_time_s"] = s.wall_time_s;
  j["failure"] = s.failure ? nlohmann::ordered_json(to_string(*s.failure))
                           : nlohmann::ordered_json();
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : s.entries) {
    nlohmann::ordered_json row;
    row["bits"] = to_string(e.bits);
    row["count"] = e.count;
    row["energy"] = e.energy;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j.dump(1) + "\n";
}

SampleSet sample_set_from_json(std::string_view text, const QuboModel* model) {
  try {
    const auto j = nlohmann::json::parse(text);
    SampleSet s;
    s.backend = backend_from_string(j.at("backend").get<std::string>());
    s.num_reads = j.at("num_reads").get<std::uint64_t>();
    s.wall_time_s = j.at("wall_time_s").get<double>();
    if (!j.at("failure").is_null()) {
      s.failure = failure_from_string(j.at("failure").get<std::string>());
    }
    std::uint64_t total = 0;
    for (const auto& row : j.at("entries")) {
      SampleEntry e;
      e.bits = bitstring_from_string(row.at("bits").get<std::string>());
      e.count = row.at("count").get<std::uint64_t>();
      if (model) {
        if (e.bits.size() != model->num_vars()) {
          throw SchemaError("sample bitstring length does not match the model");
        }
        e.energy = energy(*model, e.bits);
      } else {
        e.energy = row.at("energy").get<double>();
      }
      total += e.count;
      s.entries.push_back(std::move(e));
    }
    if (!s.failure && total != s.num_reads) {
      throw SchemaError("entry counts do not sum to num_reads");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("sample set: ") + e.what());
  } catch (const ModelError& e) {
    throw SchemaError(std::string("sample set: ") + e.what());
  }
}

}  // namespace gtspq
