#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewdim/escape.hpp"
#include "skewdim/estimator.hpp"
#include "skewdim/extension.hpp"
#include "skewdim/poincare.hpp"
#include "skewdim/schottky.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

std::string tool_version();

struct ArtifactHeader {
  std::string artifact;
  std::string config_sha256;
  std::uint64_t seed = 0;
};

// 17 significant digits, so doubles survive a round trip.
std::string format_real(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row();
  CsvTable& add(const std::string& cell);
  CsvTable& add(double value);
  CsvTable& add(std::int64_t value);
  CsvTable& add(int value) { return add(static_cast<std::int64_t>(value)); }
  CsvTable& add(std::uint64_t value);
  // Header lines prefixed with '#', then the column line and the rows.
  std::string render(const ArtifactHeader& header) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// {"header": {...}, "data": data}, pretty-printed with a trailing newline.
std::string render_json(const ArtifactHeader& header, const nlohmann::json& data);
// Creates parent directories as needed.
void write_artifact(const std::filesystem::path& path, const std::string& content);
std::string sha256_hex(const std::string& bytes);

nlohmann::json to_json(const ExponentEstimate& e);
nlohmann::json to_json(const SeriesProfile& s);
nlohmann::json to_json(const CoveringReport& c);
nlohmann::json to_json(const SymmetryReport& s);
nlohmann::json to_json(const SftSystem& system, const TransitivitySearch& t);
nlohmann::json to_json(const SftSystem& system, const DisjointTransitiveSet& d);
nlohmann::json to_json(const SftSystem& system, const DeltaLowerBound& b);
nlohmann::json to_json(const EscapeConstruction& c);
nlohmann::json to_json(const SftSystem& system, const MeasureTree& tree);
nlohmann::json to_json(const SchottkyGroup& group, const TheoremCReport& r);

}  // namespace skewdim
