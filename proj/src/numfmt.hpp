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

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace gtspq::detail {

// Shortest text that parses back to exactly `v`; integral values below 2^53
// print without a fractional part.
inline std::string format_number(double v) {
  if (std::trunc(v) == v && std::fabs(v) < 0x1.0p53) {
    if (v == 0.0) return "0";
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Fixed-point rendering for CSV columns.
inline std::string format_fixed(double v, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, ptr);
}

}  // namespace gtspq::detail
