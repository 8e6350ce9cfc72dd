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

#include "gtspq/qubo.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"
#include "numfmt.hpp"

namespace gtspq {

VarId QuboLayout::var(std::size_t step, NodeId node) const {
  if (step >= k || node >= n) {
    throw ModelError("variable (" + std::to_string(step) + "," + std::to_string(node) +
                     ") outside layout " + std::to_string(k) + "x" + std::to_string(n));
  }
  return step * n + node;
}

std::string to_string(const Bitstring& b) {
  std::string s(b.size(), '0');
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) s[i] = '1';
  return s;
}

Bitstring bitstring_from_string(std::string_view s) {
  Bitstring b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') {
      throw ModelError("bitstring may only contain '0' and '1'");
    }
    b[i] = s[i] == '1';
  }
  return b;
}

QuboModel::QuboModel(QuboLayout layout, double lambda, ZeroWeight zeros)
    : layout_(layout), lambda_(lambda), zeros_(zeros) {
  if (!(lambda > 0.0)) throw ModelError("penalty weight must be positive");
}

QuboModel::QuboModel(std::size_t num_vars) : QuboModel(QuboLayout{num_vars, 1}, 1.0) {}

void QuboModel::add_linear(VarId v, double c) {
  if (v >= num_vars()) throw ModelError("variable " + std::to_string(v) + " out of range");
  linear_[v] += c;
}

void QuboModel::add_quadratic(VarId u, VarId v, double c) {
  if (u == v) {
    add_linear(u, c);
    return;
  }
  if (u >= num_vars() || v >= num_vars()) {
    throw ModelError("quadratic term references a variable out of range");
  }
  quadratic_[std::minmax(u, v)] += c;
}

double penalty_weight(const GtspInstance& inst) {
  std::vector<double> w;
  w.reserve(inst.n() * (inst.n() - 1));
  for (NodeId i = 0; i < inst.n(); ++i)
    for (NodeId j = 0; j < inst.n(); ++j)
      if (i != j) w.push_back(inst.weight(i, j));
  const std::size_t top = std::min(inst.k(), w.size());
  std::partial_sort(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(top), w.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) sum += w[i];
  return sum + 1.0;
}

namespace {

// lambda * (sum_{v in group} x_v - 1)^2 expanded with x^2 = x.
void add_one_hot_penalty(QuboModel& model, const std::vector<VarId>& group, double lambda) {
  model.add_offset(lambda);
  for (VarId v : group) model.add_linear(v, -lambda);
  for (std::size_t a = 0; a < group.size(); ++a)
    for (std::size_t b = a + 1; b < group.size(); ++b)
      model.add_quadratic(group[a], group[b], 2.0 * lambda);
}

}  // namespace

QuboModel build_qubo(const GtspInstance& inst, ZeroWeight zeros) {
  const QuboLayout layout{inst.n(), inst.k()};
  const double lambda = penalty_weight(inst);
  QuboModel model(layout, lambda, zeros);
  const std::size_t n = inst.n(), k = inst.k();

  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t next = (c + 1) % k;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) {
        const double w = inst.weight(i, j);
        if (i != j && w != 0.0) model.add_quadratic(layout.var(c, i), layout.var(next, j), w);
      }
  }

  for (std::size_t c = 0; c < k; ++c) {
    std::vector<VarId> step;
    for (NodeId i = 0; i < n; ++i) step.push_back(layout.var(c, i));
    add_one_hot_penalty(model, step, lambda);
  }

  for (const auto& members : inst.clusters()) {
    std::vector<VarId> visits;
    for (std::size_t c = 0; c < k; ++c)
      for (NodeId i : members) visits.push_back(layout.var(c, i));
    add_one_hot_penalty(model, visits, lambda);
  }

  if (zeros == ZeroWeight::kMissingEdge) {
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t next = (c + 1) % k;
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
          if (i != j && inst.weight(i, j) == 0.0)
            model.add_quadratic(layout.var(c, i), layout.var(next, j), lambda);
    }
  }
  return model;
}

double energy(const QuboModel& model, const Bitstring& b) {
  if (b.size() != model.num_vars()) {
    throw ModelError("bitstring has " + std::to_string(b.size()) + " bits, model has " +
                     std::to_string(model.num_vars()) + " variables");
  }
  double e = model.offset();
  for (const auto& [v, a] : model.linear())
    if (b[v]) e += a;
  for (const auto& [uv, q] : model.quadratic())
    if (b[uv.first] && b[uv.second]) e += q;
  return e;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kNone: return "None";
    case Violation::kStepOneHot: return "StepOneHot";
    case Violation::kClusterOneHot: return "ClusterOneHot";
    case Violation::kMissingEdge: return "MissingEdge";
  }
  return "?";
}

Decoded decode(const QuboModel& model, const GtspInstance& inst, const Bitstring& b) {
  const auto& layout = model.layout();
  if (b.size() != model.num_vars()) throw ModelError("bitstring length does not match model");
  if (layout.n != inst.n() || layout.k != inst.k()) {
    throw ModelError("model layout does not match instance");
  }
  Tour t;
  t.order.reserve(layout.k);
  for (std::size_t c = 0; c < layout.k; ++c) {
    std::size_t set = 0;
    NodeId node = 0;
    for (NodeId i = 0; i < layout.n; ++i)
      if (b[layout.var(c, i)]) {
        ++set;
        node = i;
      }
    if (set != 1) return {std::nullopt, Violation::kStepOneHot};
    t.order.push_back(node);
  }
  if (!is_feasible_tour(inst, t)) return {std::nullopt, Violation::kClusterOneHot};
  if (uses_missing_edge(inst, t, model.zero_weight())) {
    return {std::nullopt, Violation::kMissingEdge};
  }
  return {std::move(t), Violation::kNone};
}

Bitstring encode(const QuboModel& model, const Tour& t, const GtspInstance& inst) {
  if (!is_feasible_tour(inst, t)) throw InstanceError("cannot encode an infeasible tour");
  const auto& layout = model.layout();
  if (layout.n != inst.n() || layout.k != inst.k()) {
    throw ModelError("model layout does not match instance");
  }
  Bitstring b(model.num_vars(), 0);
  for (std::size_t c = 0; c < t.order.size(); ++c) b[layout.var(c, t.order[c])] = 1;
  return b;
}

IsingModel to_ising(const QuboModel& model) {
  // x = (1 - z) / 2
  IsingModel ising;
  ising.num_vars = model.num_vars();
  ising.offset = model.offset();
  for (const auto& [v, a] : model.linear()) {
    ising.h[v] -= a / 2.0;
    ising.offset += a / 2.0;
  }
  for (const auto& [uv, q] : model.quadratic()) {
    ising.j[uv] += q / 4.0;
    ising.h[uv.first] -= q / 4.0;
    ising.h[uv.second] -= q / 4.0;
    ising.offset += q / 4.0;
  }
  return ising;
}

double ising_energy(const IsingModel& model, std::span<const int> spins) {
  if (spins.size() != model.num_vars) throw ModelError("spin vector length mismatch");
  double e = model.offset;
  for (const auto& [v, h] : model.h) e += h * spins[v];
  for (const auto& [uv, j] : model.j) e += j * spins[uv.first] * spins[uv.second];
  return e;
}

std::string to_json(const QuboModel& model) {
  nlohmann::ordered_json j;
  j["n_vars"] = model.num_vars();
  j["offset"] = model.offset();
  j["lambda"] = model.lambda();
  auto linear = nlohmann::ordered_json::array();
  for (const auto& [v, a] : model.linear()) linear.push_back({v, a});
  j["linear"] = std::move(linear);
  auto quadratic = nlohmann::ordered_json::array();
  for (const auto& [uv, q] : model.quadratic()) quadratic.push_back({uv.first, uv.second, q});
  j["quadratic"] = std::move(quadratic);
  j["layout"] = {{"n", model.layout().n}, {"k", model.layout().k}};
  return j.dump();
}

std::string to_coo(const QuboModel& model) {
  std::ostringstream out;
  out << "# n_vars " << model.num_vars() << " offset " << detail::format_number(model.offset())
      << " lambda " << detail::format_number(model.lambda()) << '\n';
  for (const auto& [v, a] : model.linear())
    out << v << ' ' << v << ' ' << detail::format_number(a) << '\n';
  for (const auto& [uv, q] : model.quadratic())
    out << uv.first << ' ' << uv.second << ' ' << detail::format_number(q) << '\n';
  return out.str();
}

CompiledQubo::CompiledQubo(const QuboModel& model)
    : num_vars(model.num_vars()), offset(model.offset()), linear(model.num_vars(), 0.0) {
  for (const auto& [v, a] : model.linear()) linear[v] = a;
  std::vector<std::size_t> degree(num_vars, 0);
  for (const auto& [uv, q] : model.quadratic()) {
    ++degree[uv.first];
    ++degree[uv.second];
  }
  row_start.assign(num_vars + 1, 0);
  for (std::size_t v = 0; v < num_vars; ++v) row_start[v + 1] = row_start[v] + degree[v];
  neighbor.resize(row_start.back());
  coupling.resize(row_start.back());
  std::vector<std::size_t> fill(row_start.begin(), row_start.end() - 1);
  for (const auto& [uv, q] : model.quadratic()) {
    neighbor[fill[uv.first]] = uv.second;
    coupling[fill[uv.first]++] = q;
    neighbor[fill[uv.second]] = uv.first;
    coupling[fill[uv.second]++] = q;
  }
}

std::vector<double> CompiledQubo::local_field(const Bitstring& bits) const {
  std::vector<double> field(linear);
  for (std::size_t v = 0; v < num_vars; ++v) {
    if (!bits[v]) continue;
    for (std::size_t e = row_start[v]; e < row_start[v + 1]; ++e)
      field[neighbor[e]] += coupling[e];
  }
  return field;
}

}  // namespace gtspq
