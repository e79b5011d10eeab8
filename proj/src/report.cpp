#include "skewdim/report.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "skewdim/errors.hpp"

namespace skewdim {

using nlohmann::json;

std::string tool_version() { return SKEWDIM_VERSION; }

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(const std::string& cell) {
  if (rows_.empty()) row();
  // Quote cells that would break the comma layout.
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    rows_.back().push_back(q + "\"");
  } else {
    rows_.back().push_back(cell);
  }
  return *this;
}

CsvTable& CsvTable::add(double value) { return add(format_real(value)); }
CsvTable& CsvTable::add(std::int64_t value) { return add(std::to_string(value)); }
CsvTable& CsvTable::add(std::uint64_t value) { return add(std::to_string(value)); }

std::string CsvTable::render(const ArtifactHeader& header) const {
  std::string out;
  out += "# tool: skewdim " + tool_version() + "\n";
  out += "# artifact: " + header.artifact + "\n";
  out += "# config_sha256: " + header.config_sha256 + "\n";
  out += "# seed: " + std::to_string(header.seed) + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
  out += "\n";
  for (const auto& r : rows_) {
    if (r.size() != columns_.size()) throw Error("csv row width does not match the header");
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  return out;
}

std::string render_json(const ArtifactHeader& header, const json& data) {
  json doc;
  doc["header"] = {{"tool", "skewdim"},
                   {"version", tool_version()},
                   {"artifact", header.artifact},
                   {"config_sha256", header.config_sha256},
                   {"seed", header.seed}};
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

void write_artifact(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

json to_json(const ExponentEstimate& e) {
  json evals = json::array();
  for (const auto& [p, g] : e.evaluations) evals.push_back({p, g});
  return {{"estimate", e.value},
          {"ci_half_width", e.ci_width},
          {"window", {e.window_lo, e.window_hi}},
          {"lattice", {{"period", e.period}, {"residue", e.residue}, {"points", e.points}}},
          {"diagnostics",
           {{"slope_se", e.slope_se},
            {"drift", e.drift},
            {"derivative", e.derivative},
            {"ratios", e.ratios},
            {"evaluations", evals}}},
          {"n_max", e.n_max}};
}

json to_json(const SeriesProfile& s) {
  return {{"target", s.target.to_string()}, {"p", s.p}, {"n", s.max_length}, {"level_sums", s.level_sums},
          {"total", s.total()}};
}

json to_json(const CoveringReport& c) {
  return {{"p", c.p},
          {"r", c.r},
          {"n", c.n},
          {"level_sums", c.level_sums},
          {"partial_sums", c.partial_sums},
          {"fit", {c.fit_lo, c.fit_hi}},
          {"slope", c.slope}};
}

json to_json(const SymmetryReport& s) {
  return {{"max_gap", s.max_gap}, {"witness", s.witness}, {"stabilizes", s.stabilizes}};
}

json to_json(const SftSystem& system, const TransitivitySearch& t) {
  json out;
  out["conclusive"] = t.conclusive();
  json missing = json::array();
  for (auto [a, b] : t.missing) missing.push_back({system.name(a), system.name(b)});
  out["missing"] = missing;
  if (t.certificate) {
    json conn = json::array();
    for (Symbol a = 0; a < system.size(); ++a)
      for (Symbol b = 0; b < system.size(); ++b)
        conn.push_back({{"from", system.name(a)}, {"to", system.name(b)},
                        {"word", system.format(t.certificate->connector(a, b))}});
    out["connectors"] = conn;
    out["max_length"] = t.certificate->max_length;
  }
  return out;
}

json to_json(const SftSystem& system, const DisjointTransitiveSet& d) {
  json words = json::array();
  for (Symbol a = 0; a < d.words.size(); ++a)
    for (Symbol b = 0; b < d.words[a].size(); ++b)
      words.push_back({{"from", system.name(a)}, {"to", system.name(b)}, {"word", system.format(d.words[a][b])}});
  return {{"m", d.m}, {"l0", d.l0}, {"threshold", d.threshold}, {"pool_sizes", d.pool_sizes}, {"words", words}};
}

json to_json(const SftSystem& system, const DeltaLowerBound& b) {
  json tau = json::array();
  for (const Word& w : b.tau) tau.push_back(system.format(w));
  return {{"bound", b.bound},
          {"growth_exponent", b.growth_exponent},
          {"l_chi", b.l_chi},
          {"sup_norm", b.sup_norm},
          {"max_tau_length", b.max_tau_length},
          {"tau", tau}};
}

json to_json(const EscapeConstruction& c) {
  json tau = json::array();
  for (std::size_t i = 0; i < c.tau.size(); ++i) tau.push_back(c.system.format(c.tau[i]));
  json trials = json::array();
  for (const auto& [len, la] : c.trials) trials.push_back({len, la});
  return {{"p", c.p},
          {"boundary_point", {{"head", c.x.head().to_string()}, {"cycle", c.x.cycle().to_string()}}},
          {"tau", tau},
          {"connectors", to_json(c.system, c.connectors)},
          {"middle_length", c.middle_length},
          {"log_middle_mass", c.log_middle_mass},
          {"threshold", c.threshold},
          {"margin", c.margin},
          {"trials", trials},
          {"max_block_length", c.max_block_length},
          {"deviation_bound", c.deviation_bound}};
}

json to_json(const SftSystem& system, const MeasureTree& tree) {
  json levels = json::array();
  for (const TreeLevel& l : tree.levels) {
    json classes = json::array();
    for (const NodeClass& c : l.classes) {
      // Context symbols, oldest first.
      Word ctx(c.ctx_len);
      std::uint64_t code = c.ctx;
      for (int i = c.ctx_len - 1; i >= 0; --i) {
        ctx[i] = static_cast<Symbol>(code % system.size());
        code /= system.size();
      }
      classes.push_back({{"context", system.format(ctx)},
                         {"nodes", c.count},
                         {"birkhoff", c.birkhoff},
                         {"log_mass", c.log_mass},
                         {"mass", std::exp(c.log_mass)}});
    }
    levels.push_back({{"depth", l.depth},
                      {"nodes", l.node_count},
                      {"total_mass", l.total_mass},
                      {"consistency_error", l.consistency_error},
                      {"mass_ratio", l.mass_ratio},
                      {"min_local_dimension", l.min_local_dimension},
                      {"median_local_dimension", l.median_local_dimension},
                      {"classes", classes}});
  }
  return {{"p", tree.p}, {"min_block_log_mass", tree.min_block_log_mass}, {"levels", levels}};
}

json to_json(const SchottkyGroup& group, const TheoremCReport& r) {
  auto exponent = [](const SchottkyExponent& e) {
    return json{{"n", e.n},
                {"orbital", to_json(e.orbital)},
                {"geometric", to_json(e.geometric)},
                {"words", e.enumeration.words},
                {"nodes", e.enumeration.nodes}};
  };
  json cert_words = json::array();
  for (const Word& w : r.certificate.words) cert_words.push_back(group.format(w));
  json escape = json::array();
  for (const EscapeAttempt& a : r.escape)
    escape.push_back({{"p", a.p},
                      {"constructed", a.constructed},
                      {"tree_built", a.tree_built},
                      {"message", a.message},
                      {"middle_length", a.middle_length},
                      {"threshold", a.threshold},
                      {"margin", a.margin},
                      {"total_mass", a.total_mass},
                      {"mass_ratio", a.mass_ratio},
                      {"min_local_dimension", a.min_local_dimension}});
  json circles = json::array();
  for (int s = 0; s < group.size(); ++s)
    circles.push_back({{"name", group.name(s)},
                       {"center_re", group.circle(s).center.real()},
                       {"center_im", group.circle(s).center.imag()},
                       {"radius", group.circle(s).radius},
                       {"partner", group.name(group.partner(s))}});
  return {{"group", circles},
          {"generator_defect", r.generator_defect},
          {"orbital_symmetry_gap", r.orbital_symmetry_gap},
          {"gap_by_length", r.gap_by_length},
          {"gap_tail_change", r.gap_tail_change},
          {"gap_stabilizes", r.gap_stabilizes},
          {"dagger_is_inverse", r.dagger_is_inverse},
          {"potential_symmetry_bound", r.potential_symmetry_bound},
          {"kernel_certificate",
           {{"omega", group.format(r.certificate.omega)},
            {"words", cert_words},
            {"valid", r.certificate.valid},
            {"failure", r.certificate.failure}}},
          {"delta_G", exponent(r.delta_G)},
          {"delta_N", exponent(r.delta_N)},
          {"delta_G_locally_constant", to_json(r.delta_G_dp)},
          {"delta_N_locally_constant", to_json(r.delta_N_dp)},
          {"lower_margin", r.lower_margin},
          {"upper_margin", r.upper_margin},
          {"combined_ci", r.combined_ci},
          {"ordering_holds", r.ordering_holds},
          {"escape", escape},
          {"covering", r.covering ? to_json(*r.covering) : json(nullptr)},
          {"covering_message", r.covering_message}};
}

}  // namespace skewdim
