#pragma once

// Serialization of results: canonical JSON (sorted keys, floats as %.12e, non-finite
// floats as null), flat CSV rows, and the boundary-data CSV reader.

#include <catenoid/geometry.hpp>
#include <catenoid/index_engine.hpp>
#include <catenoid/verification.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace catenoid {

using json = nlohmann::json;

inline std::string format_float(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace detail {

inline bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

inline void dump_canonical(const json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::null: out += "null"; return;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); return;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); return;
    case json::value_t::number_float: out += format_float(j.get<double>()); return;
    case json::value_t::string: out += j.dump(); return;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return is_scalar(x); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_canonical(x, indent, depth + 1, out);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // nlohmann::json keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump_canonical(value, indent, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    default: throw std::invalid_argument("canonical_dump: unsupported JSON value");
  }
}

}  // namespace detail

/// Deterministic text form: parsing it and dumping again reproduces it byte for byte.
inline std::string canonical_dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump_canonical(j, indent, 0, out);
  out += "\n";
  return out;
}

inline json constants_json(const CriticalParams& p) {
  return json{{"T", p.T},
              {"a", p.a},
              {"phi_star", p.phi_star},
              {"inv_sinh2_T", 1.0 / (p.sinhT * p.sinhT)},
              {"boundary_length", 4.0 * pi / p.T},
              {"total_curvature", 8.0 * pi / p.T}};
}

inline json to_json(const IndexReport& r) {
  json lowest = json::array();
  for (const auto& l : r.lowest_eigenvalues) {
    json row = json::array();
    for (double v : l) row.push_back(finite_or_null(v));
    lowest.push_back(row);
  }
  return json{{"problem", r.problem},
              {"per_mode", r.per_mode_negative},
              {"per_mode_near_zero", r.per_mode_near_zero},
              {"lowest_eigenvalues", lowest},
              {"total", r.total_index},
              {"total_near_zero", r.total_near_zero},
              {"max_mode", r.max_mode},
              {"grid_size", r.grid_size},
              {"zero_threshold", r.zero_threshold},
              {"converged", r.converged},
              {"refinement_grid_sizes", r.refinement_grid_sizes},
              {"refinement_totals", r.refinement_totals},
              {"discretization_error", r.discretization_error},
              {"tol", r.tol},
              {"resolved", r.resolved}};
}

inline json to_json(const std::vector<SteklovMode>& spectrum) {
  json out = json::array();
  for (const auto& sm : spectrum) {
    out.push_back(json{{"mode", sm.mode}, {"eigenvalues", sm.eigenvalues}, {"singular_even_channel", sm.singular_even_channel}});
  }
  return out;
}

inline json to_json(const DirichletSolution& s) {
  json modes = json::array();
  for (const auto& m : s.modes) {
    modes.push_back(json{{"mode", m.data.mode},
                         {"cos_or_sin", to_string(m.data.angular)},
                         {"value_at_plusT", m.profile.back()},
                         {"value_at_minusT", m.profile.front()},
                         {"normal_derivative_at_plusT", m.normal_plus},
                         {"normal_derivative_at_minusT", m.normal_minus},
                         {"reference_error", m.reference_error}});
  }
  return json{{"modes", modes},
              {"flux", s.flux},
              {"flux_scale", s.flux_scale},
              {"max_reference_error", s.max_reference_error},
              {"grid_size", s.nodes.size()}};
}

inline json to_json(const Check& c) {
  return json{{"name", c.name},
              {"pass", c.pass},
              {"actual", finite_or_null(c.actual)},
              {"expected", finite_or_null(c.expected)},
              {"tolerance", finite_or_null(c.tolerance)}};
}

/// Timings are left out so that equal configurations give identical documents.
inline json to_json(const VerificationReport& r) {
  json criteria = json::array();
  for (const auto& c : r.criteria) {
    json checks = json::array();
    for (const auto& k : c.checks) {
      if (k.name.find("[s]") != std::string::npos) {
        checks.push_back(json{{"name", k.name}, {"pass", k.pass}, {"tolerance", k.tolerance}});
      } else {
        checks.push_back(to_json(k));
      }
    }
    criteria.push_back(json{{"criterion", c.number},
                            {"title", c.title},
                            {"pass", c.pass()},
                            {"not_converged", c.not_converged},
                            {"checks", checks}});
  }
  return json{{"criteria", criteria},
              {"pass", r.pass()},
              {"not_converged", r.not_converged()},
              {"config",
               json{{"grid_n", r.config.grid_n}, {"modes", r.config.modes}, {"tol", r.config.tol}, {"seed", r.config.seed}}}};
}

/// Rows `mode,cos_or_sin,value_at_plusT,value_at_minusT` after a required header line.
/// Blank lines and lines starting with '#' are skipped.
inline std::vector<BoundaryMode> parse_boundary_csv(std::istream& in) {
  std::vector<BoundaryMode> out;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    const std::string where = "boundary data line " + std::to_string(line_no);
    if (!header) {
      if (cells != std::vector<std::string>{"mode", "cos_or_sin", "value_at_plusT", "value_at_minusT"}) {
        throw std::invalid_argument(where + ": expected header mode,cos_or_sin,value_at_plusT,value_at_minusT");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) throw std::invalid_argument(where + ": expected 4 fields");
    BoundaryMode bm;
    try {
      std::size_t used = 0;
      bm.mode = std::stoi(cells[0], &used);
      if (used != cells[0].size() || bm.mode < 0) throw std::invalid_argument("mode");
      bm.plus = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("value");
      bm.minus = std::stod(cells[3], &used);
      if (used != cells[3].size()) throw std::invalid_argument("value");
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": malformed number");
    }
    if (cells[1] == "cos") {
      bm.angular = Angular::cos;
    } else if (cells[1] == "sin") {
      bm.angular = Angular::sin;
    } else {
      throw std::invalid_argument(where + ": cos_or_sin must be 'cos' or 'sin'");
    }
    out.push_back(bm);
  }
  if (!header) throw std::invalid_argument("boundary data: missing header line");
  if (out.empty()) throw std::invalid_argument("boundary data: no rows");
  return out;
}

}  // namespace catenoid
