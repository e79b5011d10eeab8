#include "skewdim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "skewdim/errors.hpp"
#include "skewdim/fixtures.hpp"
#include "skewdim/report.hpp"

namespace skewdim {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InputError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError(join(path, key), "unknown field");
  }
}

const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const json* f = field(obj, key);
  if (!f) throw InputError(join(path, key), "missing field");
  return *f;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(path, "must be finite");
  return v;
}

std::int64_t as_integer(const json& j, const std::string& path, std::int64_t lo,
                        std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
  if (!j.is_number_integer()) throw InputError(path, "expected an integer");
  std::int64_t v = j.get<std::int64_t>();
  if (v < lo || v > hi)
    throw InputError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double positive(const json& j, const std::string& path) {
  double v = as_number(j, path);
  if (!(v > 0)) throw InputError(path, "must be positive");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw InputError(path, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array");
  return j;
}

std::vector<double> positive_list(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_number()) return {positive(j, path)};
  as_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(positive(j[i], index(path, i)));
  if (out.empty()) throw InputError(path, "must not be empty");
  return out;
}

GroupElement element(const json& j, const std::string& path) {
  std::string s = as_string(j, path);
  try {
    return GroupElement::parse(s);
  } catch (const InputError& e) {
    throw InputError(path, e.detail());
  }
}

BoundaryPoint boundary_point(const json& j, const std::string& path) {
  check_object(j, path, {"head", "cycle"});
  GroupElement head = field(j, "head") ? element(*field(j, "head"), join(path, "head")) : GroupElement{};
  GroupElement cycle = element(require(j, "cycle", path), join(path, "cycle"));
  try {
    return BoundaryPoint(head, cycle);
  } catch (const InputError& e) {
    throw InputError(path, e.detail());
  }
}

std::pair<double, double> bracket(const json& j, const std::string& path) {
  as_array(j, path);
  if (j.size() != 2) throw InputError(path, "expected [lo, hi]");
  double lo = positive(j[0], index(path, 0)), hi = positive(j[1], index(path, 1));
  if (!(lo < hi)) throw InputError(path, "lo must be below hi");
  return {lo, hi};
}

Word window(const SftSystem& system, const json& j, const std::string& path) {
  try {
    if (j.is_string()) return system.parse_word(j.get<std::string>());
    as_array(j, path);
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) w.push_back(system.symbol(as_string(j[i], index(path, i))));
    return w;
  } catch (const InputError& e) {
    throw InputError(path, e.detail());
  }
}

json read_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
}

std::string read_file(const std::filesystem::path& path, const std::string& where) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(where, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  SftSystem system;
  Projection projection;
  Involution involution;
};

Fixture fixture(const std::string& name, const std::string& path) {
  if (name == "f2_srw")
    return {fixtures::f2_srw_system(), fixtures::f2_srw_projection(), fixtures::f2_srw_involution()};
  if (name == "f2_constrained")
    return {fixtures::f2_constrained_system(), fixtures::f2_srw_projection(), fixtures::f2_srw_involution()};
  throw InputError(path, "unknown fixture '" + name + "' (known: f2_srw, f2_constrained)");
}

Involution parse_involution(const SftSystem& system, const json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected a map symbol -> symbol");
  std::vector<Symbol> relabel(system.size(), static_cast<Symbol>(system.size()));
  for (const auto& [key, value] : j.items()) {
    const std::string p = join(path, key);
    try {
      relabel[system.symbol(key)] = system.symbol(as_string(value, p));
    } catch (const InputError& e) {
      throw InputError(p, e.detail());
    }
  }
  for (Symbol s = 0; s < system.size(); ++s)
    if (relabel[s] == system.size()) throw InputError(join(path, system.name(s)), "missing image");
  try {
    return Involution(relabel);
  } catch (const InputError& e) {
    throw InputError(path, e.detail());
  }
}

std::map<std::string, GroupElement> sym3_images() {
  return {{"a1", GroupElement::parse("e1")}, {"a2", GroupElement::parse("e2")}, {"a3", GroupElement{}},
          {"A1", GroupElement::parse("E1")}, {"A2", GroupElement::parse("E2")}, {"A3", GroupElement{}}};
}

}  // namespace

SftSystem parse_system(const json& doc, const std::string& path) {
  check_object(doc, path, {"alphabet", "incidence", "potential"});
  const json& alpha = as_array(require(doc, "alphabet", path), join(path, "alphabet"));
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < alpha.size(); ++i) alphabet.push_back(as_string(alpha[i], index(join(path, "alphabet"), i)));
  const std::size_t q = alphabet.size();
  if (q == 0) throw InputError(join(path, "alphabet"), "must not be empty");
  auto lookup = [&](const json& j, const std::string& p) -> Symbol {
    std::string name = as_string(j, p);
    for (std::size_t i = 0; i < q; ++i)
      if (alphabet[i] == name) return static_cast<Symbol>(i);
    throw InputError(p, "unknown symbol '" + name + "'");
  };

  std::vector<std::vector<bool>> allowed(q, std::vector<bool>(q, true));
  if (const json* inc = field(doc, "incidence")) {
    const std::string ip = join(path, "incidence");
    check_object(*inc, ip, {"mode", "pairs"});
    std::string mode = field(*inc, "mode") ? as_string(*field(*inc, "mode"), join(ip, "mode")) : "forbid";
    if (mode != "allow" && mode != "forbid") throw InputError(join(ip, "mode"), "must be \"allow\" or \"forbid\"");
    const bool allow = mode == "allow";
    if (allow)
      for (auto& row : allowed) row.assign(q, false);
    const json& pairs = as_array(require(*inc, "pairs", ip), join(ip, "pairs"));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string pp = index(join(ip, "pairs"), i);
      if (!pairs[i].is_array() || pairs[i].size() != 2) throw InputError(pp, "expected [symbol, symbol]");
      allowed[lookup(pairs[i][0], index(pp, 0))][lookup(pairs[i][1], index(pp, 1))] = allow;
    }
  }

  const std::string pp = join(path, "potential");
  const json& pot = require(doc, "potential", path);
  check_object(pot, pp, {"depth", "entries", "constant"});
  PotentialSpec spec;
  if (const json* c = field(pot, "constant")) {
    if (field(pot, "entries")) throw InputError(pp, "give either constant or entries");
    int depth = field(pot, "depth") ? static_cast<int>(as_integer(*field(pot, "depth"), join(pp, "depth"), 1, 12)) : 1;
    spec = PotentialSpec::constant(positive(*c, join(pp, "constant")), depth);
  } else {
    spec.depth = static_cast<int>(as_integer(require(pot, "depth", pp), join(pp, "depth"), 1, 12));
    const json& entries = as_array(require(pot, "entries", pp), join(pp, "entries"));
    // Symbols are resolved against a provisional full shift so window parsing can be shared.
    std::optional<SftSystem> names;
    try {
      names.emplace(alphabet, std::vector<std::vector<bool>>(q, std::vector<bool>(q, true)), PotentialSpec::constant(1.0));
    } catch (const InputError& e) {
      throw InputError(join(path, e.where()), e.detail());
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string ep = index(join(pp, "entries"), i);
      if (!entries[i].is_array() || entries[i].size() != 2) throw InputError(ep, "expected [window, value]");
      Word w = window(*names, entries[i][0], index(ep, 0));
      if (static_cast<int>(w.size()) != spec.depth)
        throw InputError(index(ep, 0), "window length must equal depth " + std::to_string(spec.depth));
      if (spec.table.count(w)) throw InputError(index(ep, 0), "duplicate window");
      spec.table[w] = as_number(entries[i][1], index(ep, 1));
    }
  }
  try {
    return SftSystem(alphabet, allowed, spec);
  } catch (const InputError& e) {
    throw InputError(join(path, e.where()), e.detail());
  }
}

Projection parse_projection(const SftSystem& system, const json& doc, const std::string& path) {
  check_object(doc, path, {"rank", "images"});
  const int rank = static_cast<int>(as_integer(require(doc, "rank", path), join(path, "rank"), 1, 64));
  const json& images = require(doc, "images", path);
  const std::string ip = join(path, "images");
  if (!images.is_object()) throw InputError(ip, "expected a map symbol -> element");
  std::vector<GroupElement> img(system.size());
  std::vector<bool> seen(system.size(), false);
  for (const auto& [key, value] : images.items()) {
    Symbol s;
    try {
      s = system.symbol(key);
    } catch (const InputError& e) {
      throw InputError(join(ip, key), e.detail());
    }
    img[s] = element(value, join(ip, key));
    if (img[s].max_generator() > rank) throw InputError(join(ip, key), "uses a generator beyond the rank");
    seen[s] = true;
  }
  for (Symbol s = 0; s < system.size(); ++s)
    if (!seen[s]) throw InputError(join(ip, system.name(s)), "missing image");
  return Projection(rank, img);
}

SchottkyConfig parse_schottky_group(const json& doc, const std::string& path) {
  if (const json* preset = field(doc, "preset")) {
    std::string name = as_string(*preset, join(path, "preset"));
    if (name != "sym3") throw InputError(join(path, "preset"), "unknown preset '" + name + "' (known: sym3)");
    double hw = field(doc, "half_width_deg") ? positive(*field(doc, "half_width_deg"), join(path, "half_width_deg")) : 20.0;
    SchottkyConfig cfg = symmetric_config(3, hw);
    if (const json* t = field(doc, "tolerance")) cfg.tolerance = positive(*t, join(path, "tolerance"));
    return cfg;
  }
  SchottkyConfig cfg;
  const std::string cp = join(path, "circles");
  const json& circles = as_array(require(doc, "circles", path), cp);
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const std::string p = index(cp, i);
    const json& c = circles[i];
    check_object(c, p, {"angle", "angle_deg", "center_abs", "center_re", "center_im", "radius"});
    Circle circle;
    circle.radius = positive(require(c, "radius", p), join(p, "radius"));
    if (field(c, "center_re") || field(c, "center_im")) {
      circle.center = {as_number(require(c, "center_re", p), join(p, "center_re")),
                       as_number(require(c, "center_im", p), join(p, "center_im"))};
    } else {
      double angle;
      if (const json* a = field(c, "angle")) {
        angle = as_number(*a, join(p, "angle"));
      } else {
        angle = as_number(require(c, "angle_deg", p), join(p, "angle_deg")) * std::numbers::pi / 180;
      }
      circle.center = std::polar(positive(require(c, "center_abs", p), join(p, "center_abs")), angle);
    }
    cfg.circles.push_back(circle);
  }
  const std::string pp = join(path, "pairing");
  const json& pairing = as_array(require(doc, "pairing", path), pp);
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    const std::string p = index(pp, i);
    if (!pairing[i].is_array() || pairing[i].size() != 2) throw InputError(p, "expected [index, index]");
    cfg.pairing.emplace_back(static_cast<int>(as_integer(pairing[i][0], index(p, 0), 0, 1 << 20)),
                             static_cast<int>(as_integer(pairing[i][1], index(p, 1), 0, 1 << 20)));
  }
  if (const json* names = field(doc, "names")) {
    as_array(*names, join(path, "names"));
    for (std::size_t i = 0; i < names->size(); ++i)
      cfg.names.push_back(as_string((*names)[i], index(join(path, "names"), i)));
  }
  if (const json* t = field(doc, "tolerance")) cfg.tolerance = positive(*t, join(path, "tolerance"));
  return cfg;
}

const SftSystem& RunConfig::require_system() const {
  if (!system) throw InputError("system", "missing field");
  return *system;
}

const Projection& RunConfig::require_projection() const {
  if (!projection) throw InputError("projection", "missing field");
  return *projection;
}

const BoundaryPoint& RunConfig::require_boundary_point() const {
  if (boundary_points.empty()) throw InputError("boundary_points", "missing field");
  return boundary_points.front();
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  json doc = read_json(text, "config");
  check_object(doc, "", {"system", "projection", "involution", "boundary_points", "targets", "exponent", "series",
                         "measure", "cover", "caps", "schottky", "output_dir", "seed", "threads"});
  RunConfig cfg;

  if (const json* sys = field(doc, "system")) {
    std::optional<Fixture> fx;
    if (sys->is_object() && field(*sys, "fixture")) {
      check_object(*sys, "system", {"fixture"});
      fx.emplace(fixture(as_string(*field(*sys, "fixture"), "system.fixture"), "system.fixture"));
      cfg.system = fx->system;
    } else if (sys->is_object() && field(*sys, "file")) {
      check_object(*sys, "system", {"file"});
      std::filesystem::path p = base / as_string(*field(*sys, "file"), "system.file");
      json inner = read_json(read_file(p, "system.file"), p.string());
      cfg.system = parse_system(inner, "system.file");
    } else {
      cfg.system = parse_system(*sys, "system");
    }
    if (const json* proj = field(doc, "projection")) {
      cfg.projection = parse_projection(*cfg.system, *proj, "projection");
    } else if (fx) {
      cfg.projection = fx->projection;
    }
    if (const json* inv = field(doc, "involution")) {
      cfg.involution = parse_involution(*cfg.system, *inv, "involution");
    } else if (fx) {
      cfg.involution = fx->involution;
    }
    if (cfg.projection) {
      try {
        check_compatible(*cfg.system, *cfg.projection);
      } catch (const InputError& e) {
        throw InputError("projection", e.detail());
      }
    }
  } else {
    for (const char* k : {"projection", "involution"})
      if (field(doc, k)) throw InputError(k, "requires a system");
  }

  if (const json* bps = field(doc, "boundary_points")) {
    as_array(*bps, "boundary_points");
    for (std::size_t i = 0; i < bps->size(); ++i)
      cfg.boundary_points.push_back(boundary_point((*bps)[i], index("boundary_points", i)));
  }
  if (const json* ts = field(doc, "targets")) {
    as_array(*ts, "targets");
    cfg.targets.clear();
    for (std::size_t i = 0; i < ts->size(); ++i) cfg.targets.push_back(element((*ts)[i], index("targets", i)));
    if (cfg.targets.empty()) throw InputError("targets", "must not be empty");
  }
  if (cfg.projection) {
    for (std::size_t i = 0; i < cfg.targets.size(); ++i)
      if (cfg.targets[i].max_generator() > cfg.projection->rank())
        throw InputError(index("targets", i), "uses a generator beyond the rank");
    for (std::size_t i = 0; i < cfg.boundary_points.size(); ++i) {
      const auto& x = cfg.boundary_points[i];
      if (x.head().max_generator() > cfg.projection->rank() || x.cycle().max_generator() > cfg.projection->rank())
        throw InputError(index("boundary_points", i), "uses a generator beyond the rank");
    }
  }

  if (const json* e = field(doc, "exponent")) {
    check_object(*e, "exponent", {"n_max", "bracket", "window_lo"});
    if (const json* v = field(*e, "n_max")) cfg.exponent.n_max = static_cast<int>(as_integer(*v, "exponent.n_max", 2, 4096));
    if (const json* v = field(*e, "bracket")) cfg.exponent.bracket = bracket(*v, "exponent.bracket");
    if (const json* v = field(*e, "window_lo"))
      cfg.exponent.window_lo = static_cast<int>(as_integer(*v, "exponent.window_lo", 0, cfg.exponent.n_max - 1));
  }
  if (const json* s = field(doc, "series")) {
    check_object(*s, "series", {"p", "n"});
    if (const json* v = field(*s, "p")) cfg.series.p = positive_list(*v, "series.p");
    if (const json* v = field(*s, "n")) cfg.series.n = static_cast<int>(as_integer(*v, "series.n", 0, 4096));
  }
  if (const json* m = field(doc, "measure")) {
    check_object(*m, "measure", {"p", "depth", "samples"});
    if (const json* v = field(*m, "p")) cfg.measure.p = positive(*v, "measure.p");
    if (const json* v = field(*m, "depth")) cfg.measure.depth = static_cast<int>(as_integer(*v, "measure.depth", 1, 64));
    if (const json* v = field(*m, "samples")) cfg.measure.samples = static_cast<int>(as_integer(*v, "measure.samples", 0, 100000));
  }
  if (const json* c = field(doc, "cover")) {
    check_object(*c, "cover", {"p", "r", "n", "fit"});
    if (const json* v = field(*c, "p")) cfg.cover.p = positive_list(*v, "cover.p");
    if (const json* v = field(*c, "r")) cfg.cover.r = static_cast<int>(as_integer(*v, "cover.r", 0, 4096));
    if (const json* v = field(*c, "n")) cfg.cover.n = static_cast<int>(as_integer(*v, "cover.n", 1, 4096));
    cfg.cover.fit_lo = cfg.cover.n / 2;
    cfg.cover.fit_hi = cfg.cover.n;
    if (const json* v = field(*c, "fit")) {
      as_array(*v, "cover.fit");
      if (v->size() != 2) throw InputError("cover.fit", "expected [lo, hi]");
      cfg.cover.fit_lo = static_cast<int>(as_integer((*v)[0], "cover.fit[0]", 0, cfg.cover.n));
      cfg.cover.fit_hi = static_cast<int>(as_integer((*v)[1], "cover.fit[1]", 0, cfg.cover.n));
      if (cfg.cover.fit_lo >= cfg.cover.fit_hi) throw InputError("cover.fit", "lo must be below hi");
    }
  }
  if (const json* c = field(doc, "caps")) {
    check_object(*c, "caps", {"max_states", "max_nodes", "length_cap", "m_cap", "max_classes", "tau_search_depth",
                              "connector_search_depth"});
    if (const json* v = field(*c, "max_states")) cfg.limits.max_states = as_integer(*v, "caps.max_states", 1);
    if (const json* v = field(*c, "max_nodes")) cfg.limits.max_nodes = as_integer(*v, "caps.max_nodes", 1, 1 << 30);
    if (const json* v = field(*c, "length_cap")) cfg.escape.length_cap = static_cast<int>(as_integer(*v, "caps.length_cap", 1, 4096));
    if (const json* v = field(*c, "m_cap")) cfg.escape.m_cap = static_cast<int>(as_integer(*v, "caps.m_cap", 1, 64));
    if (const json* v = field(*c, "max_classes")) cfg.escape.max_classes = as_integer(*v, "caps.max_classes", 1);
    if (const json* v = field(*c, "tau_search_depth"))
      cfg.escape.tau_search_depth = static_cast<int>(as_integer(*v, "caps.tau_search_depth", 1, 64));
    if (const json* v = field(*c, "connector_search_depth"))
      cfg.escape.connector_search_depth = static_cast<int>(as_integer(*v, "caps.connector_search_depth", 1, 64));
  }
  cfg.escape.limits = cfg.limits;

  if (const json* s = field(doc, "schottky")) {
    const std::string sp = "schottky";
    check_object(*s, sp, {"preset", "half_width_deg", "circles", "pairing", "names", "tolerance", "projection",
                          "boundary_point", "n_max", "node_budget", "gap_length", "random_words", "potential_depth",
                          "escape_depth", "dp_n", "escape_factors", "measure_depth", "cover_factor", "cover_r",
                          "cover_n", "bin_width", "max_states"});
    SchottkySettings st;
    st.group = parse_schottky_group(*s, sp);
    if (const json* proj = field(*s, "projection")) {
      const std::string pp = "schottky.projection";
      check_object(*proj, pp, {"rank", "images"});
      st.target_rank = static_cast<int>(as_integer(require(*proj, "rank", pp), pp + ".rank", 2, 64));
      const json& images = require(*proj, "images", pp);
      if (!images.is_object()) throw InputError(pp + ".images", "expected a map symbol -> element");
      for (const auto& [key, value] : images.items()) st.images[key] = element(value, pp + ".images." + key);
    } else if (field(*s, "preset")) {
      st.images = sym3_images();
    } else {
      throw InputError("schottky.projection", "missing field");
    }
    if (const json* v = field(*s, "boundary_point")) st.x = boundary_point(*v, "schottky.boundary_point");
    TheoremCOptions& o = st.options;
    if (const json* v = field(*s, "n_max")) o.n_max = static_cast<int>(as_integer(*v, "schottky.n_max", 8, 64));
    if (const json* v = field(*s, "node_budget")) o.g_node_budget = positive(*v, "schottky.node_budget");
    if (const json* v = field(*s, "gap_length")) o.gap_length = static_cast<int>(as_integer(*v, "schottky.gap_length", 3, 20));
    if (const json* v = field(*s, "random_words")) o.random_words = static_cast<int>(as_integer(*v, "schottky.random_words", 1, 1 << 24));
    if (const json* v = field(*s, "potential_depth"))
      o.potential_depth = static_cast<int>(as_integer(*v, "schottky.potential_depth", 2, 8));
    if (const json* v = field(*s, "escape_depth")) o.escape_depth = static_cast<int>(as_integer(*v, "schottky.escape_depth", 2, 8));
    if (const json* v = field(*s, "dp_n")) o.dp_n = static_cast<int>(as_integer(*v, "schottky.dp_n", 4, 256));
    if (const json* v = field(*s, "escape_factors")) o.escape_factors = positive_list(*v, "schottky.escape_factors");
    if (const json* v = field(*s, "measure_depth")) o.measure_depth = static_cast<int>(as_integer(*v, "schottky.measure_depth", 1, 16));
    if (const json* v = field(*s, "cover_factor")) o.cover_factor = positive(*v, "schottky.cover_factor");
    if (const json* v = field(*s, "cover_r")) o.cover_r = static_cast<int>(as_integer(*v, "schottky.cover_r", 0, 64));
    if (const json* v = field(*s, "cover_n")) o.cover_n = static_cast<int>(as_integer(*v, "schottky.cover_n", 2, 256));
    if (const json* v = field(*s, "bin_width")) o.enumeration.bin_width = positive(*v, "schottky.bin_width");
    if (const json* v = field(*s, "max_states")) o.escape.limits.max_states = as_integer(*v, "schottky.max_states", 1);
    cfg.schottky = std::move(st);
  }

  if (const json* v = field(doc, "output_dir")) cfg.output_dir = as_string(*v, "output_dir");
  if (const json* v = field(doc, "seed")) cfg.seed = static_cast<std::uint64_t>(as_integer(*v, "seed", 0));
  if (const json* v = field(doc, "threads")) cfg.threads = static_cast<int>(as_integer(*v, "threads", 1, 1024));

  cfg.canonical = doc;
  cfg.canonical.erase("output_dir");
  cfg.canonical.erase("threads");
  cfg.canonical.erase("seed");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text = read_file(path, "--config");
  try {
    return parse_config(text, path.parent_path());
  } catch (const InputError& e) {
    if (e.where().rfind("config:", 0) == 0)
      throw InputError(path.string() + e.where().substr(6), e.detail());
    throw;
  }
}

std::string config_hash(const RunConfig& config) {
  json doc = config.canonical;
  doc["seed"] = config.seed;
  return sha256_hex(doc.dump());
}

}  // namespace skewdim
