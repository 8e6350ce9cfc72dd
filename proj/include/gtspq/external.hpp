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

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "gtspq/qubo.hpp"
#include "gtspq/sample_set.hpp"

namespace gtspq {

// Raised by a transport when the remote end cannot be reached or does not
// answer in time.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request/response channel to an out-of-process sampler (annealer service,
// vendor bridge, mock).
class SamplerTransport {
 public:
  virtual ~SamplerTransport() = default;
  // Sends a JSON request body and returns the JSON response body.
  virtual std::string exchange(const std::string& request) = 0;
};

// POSTs to http://host:port/path with the given connect/read timeout.
class HttpTransport : public SamplerTransport {
 public:
  explicit HttpTransport(std::string url,
                         std::chrono::seconds timeout = std::chrono::seconds(300));

  std::string exchange(const std::string& request) override;

 private:
  std::string origin_;  // scheme://host:port
  std::string path_;
  std::chrono::seconds timeout_;
};

// Request:  {"num_reads": R, "model": <to_json(QuboModel)>}
// Response: {"status": "ok", "samples": [{"bits": "0110...", "count": c}, ...]}
//        or {"status": "error", "error": "embedding_failed" | "timeout"}
//
// Energies are always recomputed locally. Remote "embedding_failed" maps to
// Failure::kCouldNotEmbed, remote "timeout" and any TransportError to
// Failure::kTimeout. Anything else off-schema (unknown status or error code,
// wrong bitstring length) throws SchemaError.
SampleSet external_sampler_submit(const QuboModel& model, SamplerTransport& transport,
                                  std::size_t num_reads);

}  // namespace gtspq
