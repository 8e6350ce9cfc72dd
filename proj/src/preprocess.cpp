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

#include "gtspq/preprocess.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"
#include "gtspq/random.hpp"

namespace gtspq {

namespace {

struct NodeScore {
  double best;       // cheapest external edge in the primary direction
  double secondary;  // mean external weight in the opposite direction
  NodeId id;

  bool operator<(const NodeScore& o) const {
    if (best != o.best) return best < o.best;
    if (secondary != o.secondary) return secondary < o.secondary;
    return id < o.id;
  }
};

}  // namespace

GtspInstance induced_instance(const GtspInstance& inst, std::vector<NodeId> kept,
                              std::string name) {
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<std::size_t> new_id(inst.n(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] >= inst.n()) throw InstanceError("kept node out of range");
    new_id[kept[i]] = i;
  }
  WeightMatrix w(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j) w(i, j) = inst.weight(kept[i], kept[j]);

  std::vector<std::vector<NodeId>> clusters;
  for (const auto& members : inst.clusters()) {
    std::vector<NodeId> reduced;
    for (NodeId v : members)
      if (new_id[v] != std::numeric_limits<std::size_t>::max()) reduced.push_back(new_id[v]);
    if (!reduced.empty()) clusters.push_back(std::move(reduced));
  }
  std::vector<NodeCoord> coords;
  if (!inst.coords().empty()) {
    for (NodeId v : kept) coords.push_back(inst.coords()[v]);
  }
  return GtspInstance(std::move(name), std::move(clusters), std::move(w), inst.symmetric(),
                      std::move(coords), inst.comment());
}

std::vector<std::pair<NodeId, NodeId>> nn2c_representatives(const GtspInstance& inst) {
  const std::size_t n = inst.n();
  std::vector<std::pair<NodeId, NodeId>> picks;
  picks.reserve(inst.k());
  for (std::size_t c = 0; c < inst.k(); ++c) {
    const auto& members = inst.clusters()[c];
    const double external = static_cast<double>(n - members.size());
    NodeScore best_entry{std::numeric_limits<double>::infinity(), 0.0, n};
    NodeScore best_exit = best_entry;
    for (NodeId v : members) {
      double in_min = std::numeric_limits<double>::infinity();
      double out_min = std::numeric_limits<double>::infinity();
      double in_sum = 0.0, out_sum = 0.0;
      for (NodeId u = 0; u < n; ++u) {
        if (inst.cluster_of(u) == c) continue;
        in_min = std::min(in_min, inst.weight(u, v));
        out_min = std::min(out_min, inst.weight(v, u));
        in_sum += inst.weight(u, v);
        out_sum += inst.weight(v, u);
      }
      const NodeScore entry{in_min, out_sum / external, v};
      const NodeScore exit{out_min, in_sum / external, v};
      if (entry < best_entry) best_entry = entry;
      if (exit < best_exit) best_exit = exit;
    }
    picks.emplace_back(best_entry.id, best_exit.id);
  }
  return picks;
}

std::pair<GtspInstance, ReductionRecord> nn2c_reduce(const GtspInstance& inst) {
  std::vector<NodeId> kept;
  for (auto [entry, exit] : nn2c_representatives(inst)) {
    kept.push_back(entry);
    if (exit != entry) kept.push_back(exit);
  }
  std::sort(kept.begin(), kept.end());
  ReductionRecord record{inst.name(), kept, ReductionMethod::kNn2c, std::nullopt};
  return {induced_instance(inst, std::move(kept), inst.name()), std::move(record)};
}

std::pair<GtspInstance, ReductionRecord> cluster_subsample(const GtspInstance& inst,
                                                           std::size_t target_nodes,
                                                           std::uint64_t seed) {
  std::vector<std::size_t> sizes;
  for (const auto& members : inst.clusters()) sizes.push_back(members.size());
  std::sort(sizes.begin(), sizes.end());
  if (target_nodes < sizes[0] + sizes[1]) {
    throw InstanceError("target of " + std::to_string(target_nodes) +
                        " nodes is below the two smallest clusters combined (" +
                        std::to_string(sizes[0] + sizes[1]) + ")");
  }

  std::vector<std::size_t> draw_order(inst.k());
  std::iota(draw_order.begin(), draw_order.end(), 0);
  Rng rng(seed);
  portable_shuffle(draw_order.begin(), draw_order.end(), rng);

  std::vector<std::size_t> selected;
  std::size_t total = 0;
  for (std::size_t c : draw_order) {
    const std::size_t size = inst.clusters()[c].size();
    if (total + size > target_nodes && selected.size() >= 2) break;
    selected.push_back(c);
    total += size;
  }

  std::vector<NodeId> kept;
  for (std::size_t c : selected)
    kept.insert(kept.end(), inst.clusters()[c].begin(), inst.clusters()[c].end());
  std::sort(kept.begin(), kept.end());
  ReductionRecord record{inst.name(), kept, ReductionMethod::kSubsample, seed};
  auto reduced = induced_instance(inst, std::move(kept),
                                  inst.name() + "_nodes_" + std::to_string(total));
  return {std::move(reduced), std::move(record)};
}

std::string to_json(const ReductionRecord& record) {
  nlohmann::ordered_json j;
  j["original_instance_name"] = record.original_instance_name;
  j["method"] = record.method == ReductionMethod::kNn2c ? "nn2c" : "subsample";
  j["seed"] = record.seed ? nlohmann::ordered_json(*record.seed) : nlohmann::ordered_json();
  j["kept_nodes"] = record.kept_nodes;
  return j.dump(2) + "\n";
}

ReductionRecord reduction_record_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ReductionRecord r;
    r.original_instance_name = j.at("original_instance_name").get<std::string>();
    const auto method = j.at("method").get<std::string>();
    if (method == "nn2c") {
      r.method = ReductionMethod::kNn2c;
    } else if (method == "subsample") {
      r.method = ReductionMethod::kSubsample;
    } else {
      throw SchemaError("unknown reduction method '" + method + "'");
    }
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    r.kept_nodes = j.at("kept_nodes").get<std::vector<NodeId>>();
    if ((r.method == ReductionMethod::kSubsample) != r.seed.has_value()) {
      throw SchemaError("seed must be present exactly for subsample records");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("reduction record: ") + e.what());
  }
}

}  // namespace gtspq
