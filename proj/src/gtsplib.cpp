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

#include "gtspq/gtsplib.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "gtspq/error.hpp"
#include "numfmt.hpp"

namespace gtspq {

// ----- Distances -----
// As defined by the TSPLIB95 documentation.
namespace tsplib {

double euc_2d(const NodeCoord& a, const NodeCoord& b) {
  const double xd = a.x - b.x;
  const double yd = a.y - b.y;
  return std::floor(std::sqrt(xd * xd + yd * yd) + 0.5);
}

double ceil_2d(const NodeCoord& a, const NodeCoord& b) {
  const double xd = a.x - b.x;
  const double yd = a.y - b.y;
  return std::ceil(std::sqrt(xd * xd + yd * yd));
}

double att(const NodeCoord& a, const NodeCoord& b) {
  const double xd = a.x - b.x;
  const double yd = a.y - b.y;
  const double r = std::sqrt((xd * xd + yd * yd) / 10.0);
  const double t = std::floor(r + 0.5);
  return t < r ? t + 1.0 : t;
}

namespace {
double geo_radians(double v) {
  constexpr double kPi = 3.141592;
  const double deg = std::trunc(v);
  const double min = v - deg;
  return kPi * (deg + 5.0 * min / 3.0) / 180.0;
}
}  // namespace

double geo(const NodeCoord& a, const NodeCoord& b) {
  constexpr double kRadius = 6378.388;
  const double lat_a = geo_radians(a.x), lon_a = geo_radians(a.y);
  const double lat_b = geo_radians(b.x), lon_b = geo_radians(b.y);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  return std::trunc(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

}  // namespace tsplib

namespace {

enum class Section { kNone, kNodeCoord, kDisplayData, kEdgeWeight, kSets };

struct Token {
  std::string_view text;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void split_tokens(std::string_view s, std::size_t line, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({s.substr(i, j - i), line});
    i = j;
  }
}

double to_double(const Token& t) {
  double v = 0.0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("expected a number, got '" + std::string(t.text) + "'", t.line);
  }
  return v;
}

long long to_integer(const Token& t) {
  long long v = 0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("expected an integer, got '" + std::string(t.text) + "'", t.line);
  }
  return v;
}

std::size_t positive_size(std::string_view value, std::string_view key, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || v == 0) {
    throw ParseError(std::string(key) + " must be a positive integer, got '" +
                         std::string(value) + "'",
                     line);
  }
  return v;
}

std::optional<Section> section_keyword(std::string_view key) {
  if (key == "NODE_COORD_SECTION") return Section::kNodeCoord;
  if (key == "DISPLAY_DATA_SECTION") return Section::kDisplayData;
  if (key == "EDGE_WEIGHT_SECTION") return Section::kEdgeWeight;
  if (key == "GTSP_SET_SECTION") return Section::kSets;
  return std::nullopt;
}

struct RawFile {
  std::string name;
  std::string type;
  std::string comment;
  std::optional<std::size_t> dimension;
  std::optional<std::size_t> sets;
  std::string weight_type;
  std::string weight_format;
  std::vector<Token> coords, display, weights, set_tokens;
  bool has_coords = false, has_display = false, has_weights = false, has_sets = false;
};

RawFile scan(std::string_view text) {
  RawFile raw;
  Section section = Section::kNone;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw_line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw_line);
    if (line.empty()) continue;

    if (std::isalpha(static_cast<unsigned char>(line.front()))) {
      const auto colon = line.find(':');
      const auto key = trim(line.substr(0, colon));
      const auto value = colon == std::string_view::npos ? std::string_view{}
                                                         : trim(line.substr(colon + 1));
      if (key == "EOF") break;
      if (auto s = section_keyword(key)) {
        section = *s;
        bool* seen = nullptr;
        std::vector<Token>* dest = nullptr;
        switch (section) {
          case Section::kNodeCoord: seen = &raw.has_coords; dest = &raw.coords; break;
          case Section::kDisplayData: seen = &raw.has_display; dest = &raw.display; break;
          case Section::kEdgeWeight: seen = &raw.has_weights; dest = &raw.weights; break;
          case Section::kSets: seen = &raw.has_sets; dest = &raw.set_tokens; break;
          case Section::kNone: break;
        }
        if (*seen) throw ParseError("duplicate " + std::string(key), line_no);
        *seen = true;
        split_tokens(value, line_no, *dest);
        continue;
      }
      if (colon == std::string_view::npos) {
        throw ParseError("malformed header key '" + std::string(key) + "'", line_no);
      }
      section = Section::kNone;
      if (key == "NAME") {
        raw.name = value;
      } else if (key == "TYPE") {
        raw.type = value;
      } else if (key == "COMMENT") {
        if (!raw.comment.empty()) raw.comment += '\n';
        raw.comment += value;
      } else if (key == "DIMENSION") {
        raw.dimension = positive_size(value, key, line_no);
      } else if (key == "GTSP_SETS") {
        raw.sets = positive_size(value, key, line_no);
      } else if (key == "EDGE_WEIGHT_TYPE") {
        raw.weight_type = value;
      } else if (key == "EDGE_WEIGHT_FORMAT") {
        raw.weight_format = value;
      } else if (key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
        // Informational only.
      } else {
        throw ParseError("malformed header key '" + std::string(key) + "'", line_no);
      }
      continue;
    }

    switch (section) {
      case Section::kNodeCoord: split_tokens(line, line_no, raw.coords); break;
      case Section::kDisplayData: split_tokens(line, line_no, raw.display); break;
      case Section::kEdgeWeight: split_tokens(line, line_no, raw.weights); break;
      case Section::kSets: split_tokens(line, line_no, raw.set_tokens); break;
      case Section::kNone:
        throw ParseError("data outside of any section", line_no);
    }
  }
  return raw;
}

std::vector<NodeCoord> read_coords(const std::vector<Token>& tokens, std::size_t n,
                                   std::string_view what) {
  if (tokens.size() != 3 * n) {
    throw ParseError(std::string(what) + " has " + std::to_string(tokens.size()) +
                     " values, expected 3 per node for DIMENSION " + std::to_string(n));
  }
  std::vector<NodeCoord> coords(n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const auto id = to_integer(tokens[3 * r]);
    if (id < 1 || static_cast<std::size_t>(id) > n) {
      throw ParseError("node id " + std::to_string(id) + " outside 1.." + std::to_string(n),
                       tokens[3 * r].line);
    }
    const auto v = static_cast<std::size_t>(id - 1);
    if (seen[v]) throw ParseError("duplicate coordinates for node " + std::to_string(id),
                                  tokens[3 * r].line);
    seen[v] = true;
    coords[v] = {to_double(tokens[3 * r + 1]), to_double(tokens[3 * r + 2])};
    if (!std::isfinite(coords[v].x) || !std::isfinite(coords[v].y)) {
      throw ParseError("non-finite coordinate", tokens[3 * r].line);
    }
  }
  return coords;
}

WeightMatrix read_explicit(const std::vector<Token>& tokens, std::size_t n,
                           const std::string& format) {
  std::size_t expected = 0;
  if (format == "FULL_MATRIX") {
    expected = n * n;
  } else if (format == "UPPER_ROW" || format == "LOWER_ROW") {
    expected = n * (n - 1) / 2;
  } else if (format == "LOWER_DIAG_ROW" || format == "UPPER_DIAG_ROW") {
    expected = n * (n + 1) / 2;
  } else {
    throw ParseError("unsupported EDGE_WEIGHT_FORMAT '" + format + "'");
  }
  if (tokens.size() != expected) {
    throw ParseError("EDGE_WEIGHT_SECTION has " + std::to_string(tokens.size()) +
                     " values, expected " + std::to_string(expected) + " for " + format +
                     " with DIMENSION " + std::to_string(n));
  }
  WeightMatrix w(n);
  std::size_t t = 0;
  auto next = [&]() {
    const double v = to_double(tokens[t]);
    if (v < 0.0 || !std::isfinite(v)) {
      throw ParseError("negative or non-finite weight", tokens[t].line);
    }
    ++t;
    return v;
  };
  auto set_sym = [&](std::size_t i, std::size_t j, double v) {
    w(i, j) = v;
    w(j, i) = v;
  };
  if (format == "FULL_MATRIX") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = next();
  } else if (format == "UPPER_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) set_sym(i, j, next());
  } else if (format == "LOWER_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) set_sym(i, j, next());
  } else if (format == "UPPER_DIAG_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) set_sym(i, j, next());
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) set_sym(i, j, next());
  }
  return w;
}

std::vector<std::vector<NodeId>> read_sets(const std::vector<Token>& tokens, std::size_t n,
                                           std::size_t k) {
  std::vector<std::vector<NodeId>> clusters(k);
  std::vector<bool> set_seen(k, false);
  std::vector<long long> owner(n, 0);
  std::size_t t = 0;
  std::size_t count = 0;
  while (t < tokens.size()) {
    const auto set_id = to_integer(tokens[t]);
    if (set_id < 1 || static_cast<std::size_t>(set_id) > k) {
      throw ParseError("set id " + std::to_string(set_id) + " outside 1.." + std::to_string(k) +
                           " (GTSP_SETS)",
                       tokens[t].line);
    }
    const auto c = static_cast<std::size_t>(set_id - 1);
    if (set_seen[c]) throw ParseError("set " + std::to_string(set_id) + " listed twice",
                                      tokens[t].line);
    set_seen[c] = true;
    ++count;
    ++t;
    bool terminated = false;
    while (t < tokens.size()) {
      const auto id = to_integer(tokens[t]);
      const auto line = tokens[t].line;
      ++t;
      if (id == -1) {
        terminated = true;
        break;
      }
      if (id < 1 || static_cast<std::size_t>(id) > n) {
        throw ParseError("node id " + std::to_string(id) + " outside 1.." + std::to_string(n),
                         line);
      }
      const auto v = static_cast<std::size_t>(id - 1);
      if (owner[v] != 0) {
        throw ParseError("node " + std::to_string(id) + " appears in sets " +
                             std::to_string(owner[v]) + " and " + std::to_string(set_id),
                         line);
      }
      owner[v] = set_id;
      clusters[c].push_back(v);
    }
    if (!terminated) throw ParseError("set " + std::to_string(set_id) + " not terminated by -1");
    if (clusters[c].empty()) throw ParseError("set " + std::to_string(set_id) + " is empty");
  }
  if (count != k) {
    throw ParseError("GTSP_SET_SECTION lists " + std::to_string(count) + " sets, GTSP_SETS is " +
                     std::to_string(k));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (owner[v] == 0) throw ParseError("node " + std::to_string(v + 1) + " is in no set");
  }
  return clusters;
}

}  // namespace

GtspInstance parse_gtsplib(std::string_view text) {
  RawFile raw = scan(text);
  if (raw.type.empty()) throw ParseError("missing TYPE");
  bool symmetric = false;
  if (raw.type == "GTSP") {
    symmetric = true;
  } else if (raw.type != "AGTSP") {
    throw ParseError("unsupported TYPE '" + raw.type + "' (expected GTSP or AGTSP)");
  }
  if (!raw.dimension) throw ParseError("missing DIMENSION");
  if (!raw.sets) throw ParseError("missing GTSP_SETS");
  if (!raw.has_sets) throw ParseError("missing GTSP_SET_SECTION");
  const std::size_t n = *raw.dimension;
  const std::size_t k = *raw.sets;
  if (k > n) throw ParseError("GTSP_SETS exceeds DIMENSION");

  std::vector<NodeCoord> coords;
  WeightMatrix weights;
  if (raw.weight_type.empty()) throw ParseError("missing EDGE_WEIGHT_TYPE");
  if (raw.weight_type == "EXPLICIT") {
    if (raw.weight_format.empty()) throw ParseError("missing EDGE_WEIGHT_FORMAT");
    if (!raw.has_weights) throw ParseError("missing EDGE_WEIGHT_SECTION");
    weights = read_explicit(raw.weights, n, raw.weight_format);
    if (raw.has_display) coords = read_coords(raw.display, n, "DISPLAY_DATA_SECTION");
  } else {
    double (*metric)(const NodeCoord&, const NodeCoord&) = nullptr;
    if (raw.weight_type == "EUC_2D") {
      metric = &tsplib::euc_2d;
    } else if (raw.weight_type == "CEIL_2D") {
      metric = &tsplib::ceil_2d;
    } else if (raw.weight_type == "GEO") {
      metric = &tsplib::geo;
    } else if (raw.weight_type == "ATT") {
      metric = &tsplib::att;
    } else {
      throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + raw.weight_type + "'");
    }
    if (!raw.has_coords) throw ParseError("missing NODE_COORD_SECTION");
    if (raw.has_weights) throw ParseError("EDGE_WEIGHT_SECTION given for coordinate weights");
    coords = read_coords(raw.coords, n, "NODE_COORD_SECTION");
    weights = WeightMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) weights(i, j) = metric(coords[i], coords[j]);
  }

  if (symmetric) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (weights(i, j) != weights(j, i)) {
          throw ParseError("TYPE GTSP but weight matrix is asymmetric at (" +
                           std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
  }

  auto clusters = read_sets(raw.set_tokens, n, k);
  try {
    return GtspInstance(raw.name, std::move(clusters), std::move(weights), symmetric,
                        std::move(coords), raw.comment);
  } catch (const InstanceError& e) {
    throw ParseError(e.what());
  }
}

GtspInstance load_gtsplib(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gtsplib(ss.str());
}

std::string to_gtsplib(const GtspInstance& inst) {
  std::ostringstream out;
  out << "NAME: " << inst.name() << '\n';
  out << "TYPE: " << (inst.symmetric() ? "GTSP" : "AGTSP") << '\n';
  if (!inst.comment().empty()) {
    std::istringstream lines(inst.comment());
    for (std::string line; std::getline(lines, line);) out << "COMMENT: " << line << '\n';
  }
  out << "DIMENSION: " << inst.n() << '\n';
  out << "GTSP_SETS: " << inst.k() << '\n';
  out << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
  out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
  if (!inst.coords().empty()) out << "DISPLAY_DATA_TYPE: TWOD_DISPLAY\n";
  out << "EDGE_WEIGHT_SECTION\n";
  for (std::size_t i = 0; i < inst.n(); ++i) {
    for (std::size_t j = 0; j < inst.n(); ++j) {
      if (j) out << ' ';
      out << detail::format_number(inst.weight(i, j));
    }
    out << '\n';
  }
  if (!inst.coords().empty()) {
    out << "DISPLAY_DATA_SECTION\n";
    for (std::size_t i = 0; i < inst.n(); ++i) {
      out << i + 1 << ' ' << detail::format_number(inst.coords()[i].x) << ' '
          << detail::format_number(inst.coords()[i].y) << '\n';
    }
  }
  out << "GTSP_SET_SECTION\n";
  for (std::size_t c = 0; c < inst.k(); ++c) {
    out << c + 1;
    for (NodeId v : inst.clusters()[c]) out << ' ' << v + 1;
    out << " -1\n";
  }
  out << "EOF\n";
  return out.str();
}

}  // namespace gtspq
