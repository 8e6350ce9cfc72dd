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

#include "gtspq/external.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "gtspq/error.hpp"

namespace gtspq {

HttpTransport::HttpTransport(std::string url, std::chrono::seconds timeout)
    : timeout_(timeout) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    origin_ = url;
    path_ = "/";
  } else {
    origin_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
}

std::string HttpTransport::exchange(const std::string& request) {
  httplib::Client client(origin_);
  if (!client.is_valid()) throw TransportError("invalid sampler endpoint '" + origin_ + "'");
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path_, request, "application/json");
  if (!res) {
    throw TransportError("sampler endpoint " + origin_ + path_ + ": " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("sampler endpoint returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

SampleSet external_sampler_submit(const QuboModel& model, SamplerTransport& transport,
                                  std::size_t num_reads) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  nlohmann::ordered_json request;
  request["num_reads"] = num_reads;
  request["model"] = nlohmann::ordered_json::parse(to_json(model));

  std::string body;
  try {
    body = transport.exchange(request.dump());
  } catch (const TransportError&) {
    return SampleSet::failed(Backend::kExternal, Failure::kTimeout, elapsed());
  }

  try {
    const auto j = nlohmann::json::parse(body);
    const auto status = j.at("status").get<std::string>();
    if (status == "error") {
      const auto code = j.at("error").get<std::string>();
      if (code == "embedding_failed") {
        return SampleSet::failed(Backend::kExternal, Failure::kCouldNotEmbed, elapsed());
      }
      if (code == "timeout") {
        return SampleSet::failed(Backend::kExternal, Failure::kTimeout, elapsed());
      }
      throw SchemaError("unknown remote error code '" + code + "'");
    }
    if (status != "ok") throw SchemaError("unknown response status '" + status + "'");

    std::vector<std::pair<Bitstring, std::uint64_t>> counts;
    for (const auto& row : j.at("samples")) {
      auto bits = bitstring_from_string(row.at("bits").get<std::string>());
      if (bits.size() != model.num_vars()) {
        throw SchemaError("remote bitstring has " + std::to_string(bits.size()) +
                          " bits, model has " + std::to_string(model.num_vars()));
      }
      counts.emplace_back(std::move(bits), row.at("count").get<std::uint64_t>());
    }
    SampleSet s = aggregate_counts(model, counts, Backend::kExternal);
    s.wall_time_s = elapsed();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("sampler response: ") + e.what());
  } catch (const ModelError& e) {
    throw SchemaError(std::string("sampler response: ") + e.what());
  }
}

}  // namespace gtspq
