#pragma once

#include <string>
#include <vector>

#include "specshare/config_file.hpp"
#include "specshare/experiments.hpp"

namespace specshare {

/// A sweep spec file is a market config plus a [sweep] section:
///
///   [sweep]
///   axis = alpha
///   grid = 0.1:1.0:19          # start:stop:count, or an explicit list
///   outputs = x_i, w_i, cs, sw
///   seed = 42
///
/// and an optional [derived] section coupling parameters to the axis value:
///   W0 = inv:1.0     # W0 = 1.0 / axis
///   B2 = mul:2.0     # B2 = 2.0 * axis
///   d  = const:0.9   # held fixed at 0.9
inline SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec spec;
  spec.base = parse_market_config(text);
  const ParsedSections ps = parse_sections(text);

  auto sweep = ps.sections.find("sweep");
  if (sweep == ps.sections.end())
    throw ConfigError("sweep spec needs a [sweep] section");
  const auto& s = sweep->second;

  auto it = s.find("axis");
  if (it == s.end()) throw ConfigError("field 'sweep.axis' is required");
  spec.axis = it->second;

  it = s.find("grid");
  if (it == s.end()) throw ConfigError("field 'sweep.grid' is required");
  const std::string& grid = it->second;
  if (grid.find(':') != std::string::npos) {
    const auto parts = detail::split(grid, ':');
    if (parts.size() != 3)
      throw ConfigError("field 'sweep.grid': expected start:stop:count");
    const double lo = detail::parse_number(parts[0], "sweep.grid");
    const double hi = detail::parse_number(parts[1], "sweep.grid");
    const double cnt = detail::parse_number(parts[2], "sweep.grid");
    if (cnt < 1 || cnt != static_cast<double>(static_cast<long>(cnt)))
      throw ConfigError("field 'sweep.grid': count must be a positive integer");
    spec.grid = detail::linspace(lo, hi, static_cast<std::size_t>(cnt));
  } else {
    for (const auto& tok : detail::split(grid, ','))
      spec.grid.push_back(detail::parse_number(tok, "sweep.grid"));
  }

  it = s.find("outputs");
  if (it == s.end()) throw ConfigError("field 'sweep.outputs' is required");
  for (const auto& tok : detail::split(it->second, ','))
    if (!tok.empty()) spec.outputs.push_back(tok);

  it = s.find("seed");
  if (it != s.end())
    spec.seed = static_cast<std::uint64_t>(
        detail::parse_number(it->second, "sweep.seed"));

  for (const auto& [key, value] : s)
    if (key != "axis" && key != "grid" && key != "outputs" && key != "seed")
      throw ConfigError("unknown field 'sweep." + key + "'");

  auto derived = ps.sections.find("derived");
  if (derived != ps.sections.end()) {
    for (const auto& [param, rule] : derived->second) {
      const auto colon = rule.find(':');
      if (colon == std::string::npos)
        throw ConfigError("field 'derived." + param +
                          "': expected inv:<c>, mul:<c> or const:<c>");
      const std::string kind = detail::trim(rule.substr(0, colon));
      const double c =
          detail::parse_number(detail::trim(rule.substr(colon + 1)),
                               "derived." + param);
      DerivedAxis d;
      d.param = param;
      if (kind == "inv")
        d.map = [c](double v) { return c / v; };
      else if (kind == "mul")
        d.map = [c](double v) { return c * v; };
      else if (kind == "const")
        d.map = [c](double) { return c; };
      else
        throw ConfigError("field 'derived." + param + "': unknown rule '" +
                          kind + "'");
      spec.derived.push_back(std::move(d));
    }
  }
  return spec;
}

}  // namespace specshare
