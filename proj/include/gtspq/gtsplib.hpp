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

#include <filesystem>
#include <string>
#include <string_view>

#include "gtspq/instance.hpp"

namespace gtspq {

// Parses the line-oriented GTSPLIB dialect (TSPLIB header keys plus
// GTSP_SETS / GTSP_SET_SECTION). File node ids are 1-based; the returned
// instance uses 0-based ids (internal id = file id - 1).
//
// Supported EDGE_WEIGHT_TYPE values: EXPLICIT, EUC_2D, CEIL_2D, GEO, ATT.
// Coordinate distances follow the TSPLIB95 rounding rules.
// Throws ParseError on any malformed or inconsistent input.
GtspInstance parse_gtsplib(std::string_view text);

GtspInstance load_gtsplib(const std::filesystem::path& path);

// Emits EXPLICIT / FULL_MATRIX form; coordinates, when present, go to a
// DISPLAY_DATA_SECTION. Integral weights are printed without a fractional
// part, others in shortest round-trip form, so parse_gtsplib(to_gtsplib(x))
// == x.
std::string to_gtsplib(const GtspInstance& inst);

// TSPLIB95 distance functions, exposed for tests.
namespace tsplib {
double euc_2d(const NodeCoord& a, const NodeCoord& b);
double ceil_2d(const NodeCoord& a, const NodeCoord& b);
double att(const NodeCoord& a, const NodeCoord& b);
double geo(const NodeCoord& a, const NodeCoord& b);
}  // namespace tsplib

}  // namespace gtspq
