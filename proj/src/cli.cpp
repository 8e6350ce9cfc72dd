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

#include "gtspq/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <set>
#include <string>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"
#include "gtspq/gtsplib.hpp"
#include "gtspq/pipeline.hpp"
#include "gtspq/preprocess.hpp"
#include "gtspq/qubo.hpp"
#include "numfmt.hpp"

namespace gtspq {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw flag values; an option counts as set only when given on the command line.
struct Flags {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string backends;
  std::size_t reads = 0;
  std::size_t shots = 0;
  std::size_t sweeps = 0;
  std::string grid;
  double timeout_s = 0.0;
  std::string reduce;
  std::string out;
  bool zero_is_edge = false;
  std::string config;
  std::string endpoint;
  bool record_timing = false;
  std::size_t random_samples = 0;

  std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App& cmd, Flags& f) {
  f.opts["seed"] = cmd.add_option("--seed", f.seed, "Run seed (every stochastic stage derives from it)");
  f.opts["jobs"] = cmd.add_option("--jobs", f.jobs, "Instances processed in parallel");
  f.opts["backend"] =
      cmd.add_option("--backend", f.backends, "Comma list of exhaustive,sa,qaoa,external");
  f.opts["reads"] = cmd.add_option("--reads", f.reads, "SA / external reads");
  f.opts["shots"] = cmd.add_option("--shots", f.shots, "QAOA shots per grid cell");
  f.opts["sweeps"] = cmd.add_option("--sweeps", f.sweeps, "SA sweeps per read");
  f.opts["grid"] = cmd.add_option("--grid", f.grid, "QAOA grid as GxB, e.g. 10x10");
  f.opts["timeout_s"] = cmd.add_option("--timeout-s", f.timeout_s, "QAOA grid-search timeout");
  f.opts["reduce"] = cmd.add_option("--reduce", f.reduce, "none | nn2c | subsample:TARGET");
  f.opts["out"] = cmd.add_option("--out", f.out, "Output directory");
  f.opts["zero_is_edge"] =
      cmd.add_flag("--zero-is-edge", f.zero_is_edge, "Read zero weights as zero-cost edges");
  f.opts["config"] = cmd.add_option("--config", f.config, "JSON config file (flags override it)");
  f.opts["endpoint"] = cmd.add_option("--endpoint", f.endpoint, "URL of an external sampler");
  f.opts["record_timing"] =
      cmd.add_flag("--record-timing", f.record_timing, "Keep wall times in outputs");
  f.opts["random_samples"] =
      cmd.add_option("--random-samples", f.random_samples, "Tours drawn for the random baseline");
}

bool given(const Flags& f, const char* key) { return f.opts.at(key)->count() > 0; }

std::vector<Backend> parse_backends(const std::string& list) {
  std::vector<Backend> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      const Backend b = backend_from_string(item);
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    } catch (const SchemaError&) {
      throw UsageError("unknown backend '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--backend needs at least one backend");
  return out;
}

void parse_grid(const std::string& text, GridConfig& grid) {
  const auto x = text.find('x');
  std::size_t g = 0, b = 0;
  auto parse = [](std::string_view s, std::size_t& v) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && p == s.data() + s.size() && v > 0;
  };
  if (x == std::string::npos || !parse(std::string_view(text).substr(0, x), g) ||
      !parse(std::string_view(text).substr(x + 1), b)) {
    throw UsageError("--grid expects GxB with positive integers, got '" + text + "'");
  }
  grid.gamma_steps = g;
  grid.beta_steps = b;
}

Reduction parse_reduction(const std::string& text) {
  try {
    return reduction_from_string(text);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
}

// Defaults, then the config file, then explicit flags.
RunConfig resolve_config(const Flags& f, std::optional<std::filesystem::path>* group_file) {
  RunConfig c;
  Reduction reduction;
  if (given(f, "config")) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(f.config));
      const std::filesystem::path base = std::filesystem::path(f.config).parent_path();
      if (!j.is_object()) throw UsageError("config " + f.config + " must hold a JSON object");
      static const std::set<std::string> kKeys{
          "seed",      "jobs",   "backend",      "reads",         "sweeps",         "shots",
          "grid",      "timeout_s", "reduce",    "out",           "zero_is_edge",   "endpoint",
          "record_timing", "random_samples", "group"};
      for (const auto& [key, value] : j.items())
        if (!kKeys.count(key)) throw UsageError("config " + f.config + ": unknown key '" + key + "'");
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("jobs")) c.jobs = j["jobs"].get<std::size_t>();
      if (j.contains("backend")) {
        if (j["backend"].is_array()) {
          std::string joined;
          for (const auto& b : j["backend"]) joined += b.get<std::string>() + ",";
          c.backends = parse_backends(joined);
        } else {
          c.backends = parse_backends(j["backend"].get<std::string>());
        }
      }
      if (j.contains("reads")) c.sa.reads = j["reads"].get<std::size_t>();
      if (j.contains("sweeps")) c.sa.sweeps = j["sweeps"].get<std::size_t>();
      if (j.contains("shots")) c.grid.shots = j["shots"].get<std::size_t>();
      if (j.contains("grid")) parse_grid(j["grid"].get<std::string>(), c.grid);
      if (j.contains("timeout_s")) c.grid.timeout_s = j["timeout_s"].get<double>();
      if (j.contains("reduce")) reduction = parse_reduction(j["reduce"].get<std::string>());
      if (j.contains("out")) c.out = base / j["out"].get<std::string>();
      if (j.contains("zero_is_edge") && j["zero_is_edge"].get<bool>()) c.zeros = ZeroWeight::kEdge;
      if (j.contains("endpoint")) c.endpoint = j["endpoint"].get<std::string>();
      if (j.contains("record_timing")) c.record_timing = j["record_timing"].get<bool>();
      if (j.contains("random_samples")) c.random_samples = j["random_samples"].get<std::size_t>();
      if (j.contains("group") && group_file) *group_file = base / j["group"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config " + f.config + ": " + e.what());
    }
  }
  if (given(f, "seed")) c.seed = f.seed;
  if (given(f, "jobs")) c.jobs = f.jobs;
  if (given(f, "backend")) c.backends = parse_backends(f.backends);
  if (given(f, "reads")) c.sa.reads = f.reads;
  if (given(f, "sweeps")) c.sa.sweeps = f.sweeps;
  if (given(f, "shots")) c.grid.shots = f.shots;
  if (given(f, "grid")) parse_grid(f.grid, c.grid);
  if (given(f, "timeout_s")) c.grid.timeout_s = f.timeout_s;
  if (given(f, "reduce")) reduction = parse_reduction(f.reduce);
  if (given(f, "out")) c.out = f.out;
  if (given(f, "zero_is_edge")) c.zeros = ZeroWeight::kEdge;
  if (given(f, "endpoint")) c.endpoint = f.endpoint;
  if (given(f, "record_timing")) c.record_timing = true;
  if (given(f, "random_samples")) c.random_samples = f.random_samples;
  c.group.instances.clear();
  // Stash the plain-instance reduction as a single template member.
  c.group.instances.push_back({{}, reduction});
  try {
    c.validate();
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  return c;
}

Reduction template_reduction(RunConfig& c) {
  Reduction r = c.group.instances.front().reduction;
  c.group.instances.clear();
  return r;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int summarize(const GroupReport& report, std::ostream& out) {
  bool any_ok = false;
  for (const auto& inst : report.instances) {
    out << inst.name << ": N=" << inst.n << " K=" << inst.k << " qubits=" << inst.qubits;
    if (inst.optimal_cost) out << " optimum=" << detail::format_number(*inst.optimal_cost);
    out << '\n';
    for (const auto& b : inst.backends) {
      out << "  " << to_string(b.backend) << ": feasible="
          << detail::format_fixed(100.0 * b.feasible_shot_rate, 2) << '%';
      if (b.best_shot_ar) out << " best_ar=" << detail::format_fixed(*b.best_shot_ar, 4);
      if (b.failure) out << " failure=" << to_string(*b.failure);
      out << '\n';
      if (!b.failure) any_ok = true;
    }
  }
  return any_ok || report.instances.empty() ? kExitOk : kExitAllFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"GTSP QUBO / QAOA workbench"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::vector<std::string> parse_files;
  auto* parse_cmd = app.add_subcommand("parse", "Validate GTSPLIB files and print a summary");
  parse_cmd->add_option("files", parse_files, "GTSPLIB files")->required();

  Flags reduce_flags;
  std::string reduce_file;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce an instance (nn2c | subsample:TARGET)");
  reduce_cmd->add_option("file", reduce_file, "GTSPLIB file")->required();
  add_common(*reduce_cmd, reduce_flags);

  Flags qubo_flags;
  std::string qubo_file;
  std::string qubo_format = "json";
  auto* qubo_cmd = app.add_subcommand("qubo", "Build the QUBO of an instance and export it");
  qubo_cmd->add_option("file", qubo_file, "GTSPLIB file")->required();
  qubo_cmd->add_option("--format", qubo_format, "json | coo")
      ->check(CLI::IsMember({"json", "coo"}));
  add_common(*qubo_cmd, qubo_flags);

  Flags solve_flags;
  std::vector<std::string> solve_files;
  auto* solve_cmd = app.add_subcommand("solve", "Run the selected backends on instances");
  solve_cmd->add_option("files", solve_files, "GTSPLIB files")->required();
  add_common(*solve_cmd, solve_flags);

  Flags bench_flags;
  std::string bench_group;
  auto* bench_cmd = app.add_subcommand("bench", "Run the full pipeline over an experiment group");
  bench_cmd->add_option("group", bench_group, "Experiment group JSON");
  add_common(*bench_cmd, bench_flags);

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Re-aggregate a bench directory from raw shots");
  report_cmd->add_option("dir", report_dir, "Bench output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse_cmd->parsed()) {
      for (const auto& file : parse_files) {
        const auto inst = load_gtsplib(file);
        out << inst.name() << ": N=" << inst.n() << " K=" << inst.k()
            << " symmetric=" << yes_no(inst.symmetric()) << " cluster_sizes=";
        for (std::size_t c = 0; c < inst.k(); ++c)
          out << (c ? "," : "") << inst.clusters()[c].size();
        out << '\n';
      }
      return kExitOk;
    }

    if (reduce_cmd->parsed()) {
      RunConfig c = resolve_config(reduce_flags, nullptr);
      const Reduction r = template_reduction(c);
      if (r.kind == Reduction::Kind::kNone) throw UsageError("reduce needs --reduce nn2c|subsample:T");
      const GroupMember member{reduce_file, {r.kind, r.target_nodes, c.seed}};
      const auto p = prepare_instance(member, 0, c.seed);
      const auto dir = given(reduce_flags, "out") || given(reduce_flags, "config")
                           ? c.out
                           : std::filesystem::path(".");
      std::filesystem::create_directories(dir);
      write_file_atomic(dir / (p.instance.name() + ".gtsp"), to_gtsplib(p.instance));
      write_file_atomic(dir / (p.instance.name() + ".reduction.json"), to_json(*p.record));
      out << p.instance.name() << ": N=" << p.instance.n() << " K=" << p.instance.k()
          << " original_n=" << *p.original_n << '\n';
      return kExitOk;
    }

    if (qubo_cmd->parsed()) {
      RunConfig c = resolve_config(qubo_flags, nullptr);
      const Reduction r = template_reduction(c);
      const auto p = prepare_instance({qubo_file, {r.kind, r.target_nodes, c.seed}}, 0, c.seed);
      const QuboModel model = build_qubo(p.instance, c.zeros);
      out << p.instance.name() << ": variables=" << model.num_vars()
          << " lambda=" << detail::format_number(model.lambda())
          << " linear=" << model.linear().size() << " quadratic=" << model.quadratic().size()
          << '\n';
      if (given(qubo_flags, "out")) {
        write_file_atomic(qubo_flags.out, qubo_format == "coo" ? to_coo(model) : to_json(model));
      }
      return kExitOk;
    }

    if (solve_cmd->parsed() || bench_cmd->parsed()) {
      const bool bench = bench_cmd->parsed();
      Flags& flags = bench ? bench_flags : solve_flags;
      std::optional<std::filesystem::path> group_file;
      RunConfig c = resolve_config(flags, &group_file);
      const Reduction r = template_reduction(c);
      if (bench) {
        if (!bench_group.empty()) group_file = bench_group;
        if (!group_file) throw UsageError("bench needs a group file (argument or config \"group\")");
        c.group = load_group(*group_file);
      } else {
        c.group.name = GroupName::kCustom;
        for (const auto& f : solve_files) c.group.instances.push_back({f, r});
      }
      return summarize(run_bench(c), out);
    }

    if (report_cmd->parsed()) {
      return summarize(run_report(report_dir), out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInstance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInstance;
  }
  return kExitUsage;
}

}  // namespace gtspq
