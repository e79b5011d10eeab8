#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skewdim/escape.hpp"
#include "skewdim/extension.hpp"
#include "skewdim/freegroup.hpp"
#include "skewdim/poincare.hpp"
#include "skewdim/schottky.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

struct ExponentSettings {
  int n_max = 24;
  std::pair<double, double> bracket{0.5, 3.0};
  int window_lo = -1;
};

struct SeriesSettings {
  std::vector<double> p{1.0, 1.5};
  int n = 20;
};

struct MeasureSettings {
  double p = 0.6;
  int depth = 5;
  int samples = 8;
};

struct CoverSettings {
  std::vector<double> p{0.8, 1.5};
  int r = 2;
  int n = 20;
  int fit_lo = 8;
  int fit_hi = 20;
};

struct SchottkySettings {
  SchottkyConfig group;
  int target_rank = 2;
  std::map<std::string, GroupElement> images;
  BoundaryPoint x{GroupElement{}, GroupElement::generator(1, false)};
  TheoremCOptions options;
};

struct RunConfig {
  std::optional<SftSystem> system;
  std::optional<Projection> projection;
  std::optional<Involution> involution;
  std::vector<BoundaryPoint> boundary_points;
  std::vector<GroupElement> targets{GroupElement{}};
  ExponentSettings exponent;
  SeriesSettings series;
  MeasureSettings measure;
  CoverSettings cover;
  EngineLimits limits;
  EscapeOptions escape;
  std::optional<SchottkySettings> schottky;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  // Parsed document with output_dir and threads removed; hashed into every artifact header.
  nlohmann::json canonical;

  const SftSystem& require_system() const;
  const Projection& require_projection() const;
  const BoundaryPoint& require_boundary_point() const;
};

// Parses a run configuration. Syntax errors carry line and column, semantic errors the JSON path
// of the offending field. `base` resolves relative file references.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base = ".");
RunConfig load_config(const std::filesystem::path& path);

// System document: {alphabet, incidence: {mode, pairs}, potential: {depth, entries} | {constant}}.
SftSystem parse_system(const nlohmann::json& doc, const std::string& where = "system");
Projection parse_projection(const SftSystem& system, const nlohmann::json& doc,
                            const std::string& where = "projection");
SchottkyConfig parse_schottky_group(const nlohmann::json& doc, const std::string& where = "schottky");

// Lowercase hex SHA-256 of the canonical configuration.
std::string config_hash(const RunConfig& config);

}  // namespace skewdim
