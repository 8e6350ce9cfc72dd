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
#include <stdexcept>
#include <string>

namespace gtspq {

// Malformed or inconsistent GTSPLIB text. Carries the 1-based line number
// when the problem can be pinned to a line (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Violated domain invariant (bad tour length, non-partition clusters, ...).
class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent model usage: layout mismatch, bitstring length, bad params.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap (exhaustive enumeration, subspace dimension, ...)
// was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Wire data that does not follow the expected JSON schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtspq
