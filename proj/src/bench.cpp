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

#include "gtspq/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"
#include "numfmt.hpp"

namespace gtspq {

using detail::format_fixed;
using detail::format_number;

std::optional<double> approximation_ratio(double optimal, double cost) {
  if (!std::isfinite(optimal) || !std::isfinite(cost) || optimal < 0.0 || cost < 0.0) {
    throw ModelError("approximation ratio needs finite non-negative costs");
  }
  if (cost < optimal) {
    throw ModelError("cost " + format_number(cost) + " is below the optimum " +
                     format_number(optimal));
  }
  if (optimal == 0.0) return std::nullopt;
  return optimal / cost;
}

double feasibility_ratio(const SampleSet& samples, const QuboModel& model,
                         const GtspInstance& inst) {
  if (samples.failure || samples.num_reads == 0) return 0.0;
  std::uint64_t feasible = 0;
  for (const auto& e : samples.entries) {
    if (decode(model, inst, e.bits).feasible()) feasible += e.count;
  }
  return static_cast<double>(feasible) / static_cast<double>(samples.num_reads);
}

RandomBaseline random_baseline(const GtspInstance& inst, std::optional<double> optimal,
                               std::size_t samples, std::uint64_t seed, ZeroWeight zeros) {
  RandomBaseline b;
  b.samples = samples;
  const auto tours = random_tours(inst, samples, seed);
  double cost_sum = 0.0;
  double ar_sum = 0.0;
  bool ar_defined = optimal.has_value() && *optimal > 0.0;
  for (const auto& [tour, cost] : tours) {
    if (uses_missing_edge(inst, tour, zeros)) continue;
    ++b.valid;
    cost_sum += cost;
    if (ar_defined) ar_sum += *approximation_ratio(*optimal, cost);
  }
  if (b.valid > 0) {
    b.mean_cost = cost_sum / static_cast<double>(b.valid);
    if (ar_defined) b.mean_ar = ar_sum / static_cast<double>(b.valid);
  }
  return b;
}

namespace {

BackendReport backend_report(const GtspInstance& inst, const QuboModel& model,
                             const SampleSet& set, std::optional<double> optimal) {
  BackendReport r;
  r.backend = set.backend;
  r.num_reads = set.num_reads;
  r.wall_time_s = set.wall_time_s;
  r.failure = set.failure;
  if (set.failure) return r;

  std::uint64_t feasible = 0;
  double cost_sum = 0.0;
  double ar_sum = 0.0;
  std::uint64_t ar_count = 0;
  std::map<double, std::uint64_t, std::greater<>> ar_counts;
  const bool ar_defined = optimal.has_value() && *optimal > 0.0;
  for (const auto& e : set.entries) {
    const auto d = decode(model, inst, e.bits);
    if (!d.feasible()) continue;
    feasible += e.count;
    const double cost = tour_cost(inst, *d.tour);
    cost_sum += static_cast<double>(e.count) * cost;
    if (ar_defined) {
      const double ar = *approximation_ratio(*optimal, cost);
      ar_counts[ar] += e.count;
      ar_sum += static_cast<double>(e.count) * ar;
      ar_count += e.count;
    }
  }
  if (set.num_reads > 0)
    r.feasible_shot_rate = static_cast<double>(feasible) / static_cast<double>(set.num_reads);
  if (feasible == 0) {
    r.failure = Failure::kInvalidTour;
    return r;
  }
  r.mean_solver_cost = cost_sum / static_cast<double>(feasible);
  for (const auto& [ar, count] : ar_counts) r.ar_distribution.push_back({ar, count});
  if (!r.ar_distribution.empty()) {
    r.best_shot_ar = r.ar_distribution.front().ar;
    r.mean_ar = ar_sum / static_cast<double>(ar_count);
  }
  return r;
}

}  // namespace

InstanceReport build_report(const GtspInstance& inst, const QuboModel& model,
                            const std::vector<SampleSet>& sample_sets,
                            const std::optional<ExactResult>& exact,
                            const RandomBaseline& random,
                            std::optional<std::size_t> original_n) {
  InstanceReport r;
  r.name = inst.name();
  r.n = inst.n();
  r.k = inst.k();
  r.qubits = model.num_vars();
  r.original_n = original_n;
  if (exact) r.optimal_cost = exact->cost;
  r.mean_random_cost = random.mean_cost;
  r.mean_random_ar = random.mean_ar;
  for (const auto& set : sample_sets) r.backends.push_back(backend_report(inst, model, set, r.optimal_cost));
  return r;
}

namespace {

constexpr std::pair<GroupName, std::string_view> kGroupNames[] = {
    {GroupName::kSubsampleSmall, "SubsampleSmall"},
    {GroupName::kSubsampleMedium, "SubsampleMedium"},
    {GroupName::kPreprocessSmall, "PreprocessSmall"},
    {GroupName::kPreprocessMedium, "PreprocessMedium"},
    {GroupName::kCustom, "Custom"},
};

}  // namespace

std::string_view to_string(GroupName g) {
  for (const auto& [name, text] : kGroupNames)
    if (name == g) return text;
  return "Custom";
}

GroupName group_name_from_string(std::string_view s) {
  for (const auto& [name, text] : kGroupNames)
    if (text == s) return name;
  throw SchemaError("unknown experiment group '" + std::string(s) + "'");
}

Reduction reduction_from_string(std::string_view s) {
  Reduction r;
  if (s == "none") return r;
  if (s == "nn2c") {
    r.kind = Reduction::Kind::kNn2c;
    return r;
  }
  constexpr std::string_view prefix = "subsample:";
  if (s.starts_with(prefix)) {
    const auto digits = s.substr(prefix.size());
    std::size_t target = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), target);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && target > 0) {
      r.kind = Reduction::Kind::kSubsample;
      r.target_nodes = target;
      return r;
    }
  }
  throw SchemaError("reduction must be none, nn2c or subsample:<target>, got '" +
                    std::string(s) + "'");
}

std::string to_string(const Reduction& r) {
  switch (r.kind) {
    case Reduction::Kind::kNone:
      return "none";
    case Reduction::Kind::kNn2c:
      return "nn2c";
    case Reduction::Kind::kSubsample:
      return "subsample:" + std::to_string(r.target_nodes);
  }
  return "none";
}

ExperimentGroup group_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  try {
    const auto j = nlohmann::json::parse(text);
    ExperimentGroup g;
    g.name = group_name_from_string(j.at("name").get<std::string>());
    for (const auto& m : j.at("instances")) {
      GroupMember member;
      std::filesystem::path p = m.at("path").get<std::string>();
      member.path = p.is_absolute() ? p : base_dir / p;
      member.reduction = reduction_from_string(m.value("reduce", std::string("none")));
      if (m.contains("seed")) {
        if (member.reduction.kind != Reduction::Kind::kSubsample)
          throw SchemaError("only subsample members take a seed");
        member.reduction.seed = m.at("seed").get<std::uint64_t>();
      }
      g.instances.push_back(std::move(member));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("experiment group: ") + e.what());
  }
}

ExperimentGroup load_group(const std::filesystem::path& file) {
  return group_from_json(read_file(file), file.parent_path());
}

void check_membership(GroupName group, const Reduction& reduction, std::size_t original_n,
                      std::size_t reduced_n) {
  struct Rule {
    Reduction::Kind kind;
    std::size_t lo, hi;          // reduced node range
    std::size_t orig_lo, orig_hi;
  };
  Rule rule{};
  switch (group) {
    case GroupName::kCustom:
      return;
    case GroupName::kSubsampleSmall:
      rule = {Reduction::Kind::kSubsample, 3, 5, 0, SIZE_MAX};
      break;
    case GroupName::kSubsampleMedium:
      rule = {Reduction::Kind::kSubsample, 3, 20, 0, SIZE_MAX};
      break;
    case GroupName::kPreprocessSmall:
      rule = {Reduction::Kind::kNn2c, 3, 5, 14, 24};
      break;
    case GroupName::kPreprocessMedium:
      rule = {Reduction::Kind::kNn2c, 3, 20, 14, 100};
      break;
  }
  const std::string where = std::string(to_string(group)) + ": ";
  if (reduction.kind != rule.kind)
    throw InstanceError(where + "member built with '" + to_string(reduction) + "'");
  if (reduced_n < rule.lo || reduced_n > rule.hi)
    throw InstanceError(where + "reduced instance has " + std::to_string(reduced_n) + " nodes");
  if (original_n < rule.orig_lo || original_n > rule.orig_hi)
    throw InstanceError(where + "original instance has " + std::to_string(original_n) + " nodes");
}

namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

std::string opt_num(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::string to_json(const GroupReport& report) {
  ojson j;
  j["schema"] = "v1";
  j["group"] = report.group;
  j["seed"] = report.seed;
  j["instances"] = ojson::array();
  for (const auto& inst : report.instances) {
    ojson ji;
    ji["name"] = inst.name;
    ji["n"] = inst.n;
    ji["k"] = inst.k;
    ji["qubits"] = inst.qubits;
    ji["original_n"] = opt(inst.original_n);
    ji["optimal_cost"] = opt(inst.optimal_cost);
    ji["mean_random_cost"] = opt(inst.mean_random_cost);
    ji["mean_random_ar"] = opt(inst.mean_random_ar);
    ji["backends"] = ojson::array();
    for (const auto& b : inst.backends) {
      ojson jb;
      jb["backend"] = to_string(b.backend);
      jb["num_reads"] = b.num_reads;
      jb["feasible_shot_rate"] = b.feasible_shot_rate;
      jb["best_shot_ar"] = opt(b.best_shot_ar);
      jb["mean_ar"] = opt(b.mean_ar);
      jb["mean_solver_cost"] = opt(b.mean_solver_cost);
      jb["wall_time_s"] = b.wall_time_s;
      jb["failure"] = b.failure ? ojson(std::string(to_string(*b.failure))) : ojson(nullptr);
      jb["ar_distribution"] = ojson::array();
      for (const auto& p : b.ar_distribution) jb["ar_distribution"].push_back({p.ar, p.count});
      ji["backends"].push_back(std::move(jb));
    }
    j["instances"].push_back(std::move(ji));
  }
  return j.dump(2) + "\n";
}

GroupReport group_report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != "v1")
      throw SchemaError("unsupported report schema '" + j.at("schema").get<std::string>() + "'");
    GroupReport r;
    r.group = j.at("group").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& ji : j.at("instances")) {
      InstanceReport inst;
      inst.name = ji.at("name").get<std::string>();
      inst.n = ji.at("n").get<std::size_t>();
      inst.k = ji.at("k").get<std::size_t>();
      inst.qubits = ji.at("qubits").get<std::size_t>();
      inst.original_n = opt_from<std::size_t>(ji, "original_n");
      inst.optimal_cost = opt_from<double>(ji, "optimal_cost");
      inst.mean_random_cost = opt_from<double>(ji, "mean_random_cost");
      inst.mean_random_ar = opt_from<double>(ji, "mean_random_ar");
      for (const auto& jb : ji.at("backends")) {
        BackendReport b;
        b.backend = backend_from_string(jb.at("backend").get<std::string>());
        b.num_reads = jb.at("num_reads").get<std::uint64_t>();
        b.feasible_shot_rate = jb.at("feasible_shot_rate").get<double>();
        b.best_shot_ar = opt_from<double>(jb, "best_shot_ar");
        b.mean_ar = opt_from<double>(jb, "mean_ar");
        b.mean_solver_cost = opt_from<double>(jb, "mean_solver_cost");
        b.wall_time_s = jb.at("wall_time_s").get<double>();
        if (const auto f = opt_from<std::string>(jb, "failure")) b.failure = failure_from_string(*f);
        for (const auto& p : jb.at("ar_distribution"))
          b.ar_distribution.push_back({p.at(0).get<double>(), p.at(1).get<std::uint64_t>()});
        inst.backends.push_back(std::move(b));
      }
      r.instances.push_back(std::move(inst));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

std::string instances_csv(const GroupReport& report) {
  std::ostringstream out;
  out << "name,n,k,qubits,original_n\n";
  for (const auto& i : report.instances) {
    out << i.name << ',' << i.n << ',' << i.k << ',' << i.qubits << ',';
    if (i.original_n) out << *i.original_n;
    out << '\n';
  }
  return out.str();
}

std::string feasibility_csv(const GroupReport& report) {
  std::ostringstream out;
  out << "instance,backend,feasible_pct,failure\n";
  for (const auto& i : report.instances) {
    for (const auto& b : i.backends) {
      out << i.name << ',' << to_string(b.backend) << ','
          << format_fixed(100.0 * b.feasible_shot_rate, 2) << ',';
      if (b.failure) out << to_string(*b.failure);
      out << '\n';
    }
  }
  return out.str();
}

std::string ar_csv(const GroupReport& report) {
  std::ostringstream out;
  out << "instance,backend,best_shot_ar,mean_ar,mean_random_ar\n";
  for (const auto& i : report.instances) {
    for (const auto& b : i.backends) {
      out << i.name << ',' << to_string(b.backend) << ',' << opt_num(b.best_shot_ar) << ','
          << opt_num(b.mean_ar) << ',' << opt_num(i.mean_random_ar) << '\n';
    }
  }
  return out.str();
}

std::string violin_csv(const BackendReport& backend) {
  std::string out = "ar\n";
  for (const auto& p : backend.ar_distribution) {
    const std::string line = format_number(p.ar) + "\n";
    for (std::uint64_t c = 0; c < p.count; ++c) out += line;
  }
  return out;
}

void emit_report(const GroupReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "violin");
  write_file_atomic(dir / "report.json", to_json(report));
  write_file_atomic(dir / "instances.csv", instances_csv(report));
  write_file_atomic(dir / "feasibility.csv", feasibility_csv(report));
  write_file_atomic(dir / "ar.csv", ar_csv(report));
  for (const auto& i : report.instances) {
    for (const auto& b : i.backends) {
      write_file_atomic(dir / "violin" / (i.name + "_" + std::string(to_string(b.backend)) + ".csv"),
                        violin_csv(b));
    }
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gtspq
