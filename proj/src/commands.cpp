#include "skewdim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "skewdim/errors.hpp"
#include "skewdim/report.hpp"

namespace skewdim {

using nlohmann::json;

namespace {

ArtifactHeader header(const RunConfig& cfg, const std::string& artifact) {
  return {artifact, config_hash(cfg), cfg.seed};
}

bool wants(OutputFormat f, OutputFormat which) { return f == OutputFormat::Default || f == which; }

std::string fixed(double v, int digits = 6) {
  std::ostringstream ss;
  ss << std::setprecision(digits) << v;
  return ss.str();
}

BoundaryPoint default_point(const RunConfig& cfg) {
  if (!cfg.boundary_points.empty()) return cfg.boundary_points.front();
  return BoundaryPoint(GroupElement{}, GroupElement::generator(1, false));
}

// --- validate ---------------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  json data;
  bool inconclusive = false;
  if (cfg.system) {
    const SftSystem& s = *cfg.system;
    data["system"] = {{"alphabet", s.alphabet()},
                      {"depth", s.depth()},
                      {"sup_norm", s.sup_norm()},
                      {"min_value", s.min_value()},
                      {"distortion", s.distortion()},
                      {"transitive", true}};
    log << "system: " << s.size() << " symbols, depth " << s.depth() << ", |u| = " << fixed(s.sup_norm())
        << ", V = " << fixed(s.distortion()) << "\n";
    if (cfg.projection) {
      const Projection& chi = *cfg.projection;
      GenerationCheck gen = check_generation(chi, 4);
      data["projection"] = {{"rank", chi.rank()}, {"lambda1", chi.lambda1()}, {"generation_witnessed", gen.witnessed},
                            {"missing_generators", gen.missing}};
      TransitivitySearch t = verify_kernel_transitivity(s, chi, cfg.escape.connector_search_depth);
      data["kernel_transitivity"] = to_json(s, t);
      log << "projection: rank " << chi.rank() << ", generation " << (gen.witnessed ? "witnessed" : "NOT witnessed")
          << ", kernel transitivity " << (t.conclusive() ? "certified" : "inconclusive") << "\n";
      if (!t.conclusive() || !gen.witnessed) inconclusive = true;
      if (t.conclusive()) {
        try {
          DeltaLowerBound b = constructive_delta_lower_bound(s, chi, cfg.escape.tau_search_depth);
          data["delta_lower_bound"] = to_json(s, b);
          log << "restricted exponent >= " << fixed(b.bound) << "\n";
        } catch (const InconclusiveError& e) {
          data["delta_lower_bound"] = {{"inconclusive", e.what()}};
          inconclusive = true;
        }
      }
      if (cfg.involution) {
        SymmetryReport sym = check_symmetry(s, chi, *cfg.involution, std::min(8, 2 * s.depth() + 4));
        data["symmetry"] = to_json(sym);
        log << "symmetry: gap " << (sym.stabilizes ? "stabilizes" : "does not stabilize") << "\n";
      }
    }
  }
  if (cfg.schottky) {
    SchottkyGroup g = build_schottky(cfg.schottky->group);
    Projection chi = schottky_projection(g, cfg.schottky->target_rank, cfg.schottky->images);
    data["schottky"] = {{"symbols", g.names()},
                        {"rank", g.rank()},
                        {"generator_defect", generator_pair_defect(g)},
                        {"target_rank", chi.rank()}};
    log << "schottky: " << g.size() << " circles valid, generator defect " << generator_pair_defect(g) << "\n";
  }
  if (data.is_null()) throw InputError("system", "nothing to validate");
  write_artifact(opt.out / "validate.json", render_json(header(cfg, "validate"), data));
  return inconclusive ? kExitInconclusive : kExitOk;
}

// --- series -----------------------------------------------------------------------------------

int cmd_series(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const SftSystem& s = cfg.require_system();
  const Projection& chi = cfg.require_projection();
  CsvTable table({"target", "p", "m", "a_m", "partial_sum"});
  json profiles = json::array();
  for (const GroupElement& g : cfg.targets) {
    for (double p : cfg.series.p) {
      SeriesProfile prof = truncated_series(s, chi, g, p, cfg.series.n, cfg.limits);
      double z = 0;
      for (int m = 0; m <= cfg.series.n; ++m) {
        z += prof.level_sums[m];
        table.row().add(g.to_string()).add(p).add(m).add(prof.level_sums[m]).add(z);
      }
      profiles.push_back(to_json(prof));
      log << "Z_" << cfg.series.n << "(" << p << " | " << g.to_string() << ") = " << fixed(prof.total(), 10) << "\n";
    }
  }
  if (wants(opt.format, OutputFormat::Csv)) write_artifact(opt.out / "series.csv", table.render(header(cfg, "series")));
  if (opt.format == OutputFormat::Json) write_artifact(opt.out / "series.json", render_json(header(cfg, "series"), profiles));
  return kExitOk;
}

// --- exponent ---------------------------------------------------------------------------------

int cmd_exponent(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const SftSystem& s = cfg.require_system();
  const Projection& chi = cfg.require_projection();
  EstimatorOptions eo;
  eo.window_lo = cfg.exponent.window_lo;
  json out = json::array();
  CsvTable table({"target", "estimate", "ci_half_width", "n_max", "window_lo", "window_hi", "period", "points",
                  "slope_se", "drift", "derivative"});
  for (const GroupElement& g : cfg.targets) {
    ExponentEstimate e = exponent_estimate(s, chi, g, cfg.exponent.n_max, cfg.exponent.bracket, eo, cfg.limits);
    json j = to_json(e);
    j["target"] = g.to_string();
    out.push_back(j);
    table.row().add(g.to_string()).add(e.value).add(e.ci_width).add(e.n_max).add(e.window_lo).add(e.window_hi)
        .add(e.period).add(e.points).add(e.slope_se).add(e.drift).add(e.derivative);
    log << "delta(" << g.to_string() << ") = " << fixed(e.value) << " +- " << fixed(e.ci_width, 3) << "\n";
  }
  if (wants(opt.format, OutputFormat::Json))
    write_artifact(opt.out / "exponent.json", render_json(header(cfg, "exponent"), out));
  if (opt.format == OutputFormat::Csv) write_artifact(opt.out / "exponent.csv", table.render(header(cfg, "exponent")));
  return kExitOk;
}

// --- measure ----------------------------------------------------------------------------------

int cmd_measure(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const SftSystem& s = cfg.require_system();
  const Projection& chi = cfg.require_projection();
  const BoundaryPoint& x = cfg.require_boundary_point();
  EscapeConstruction c = build_escape_construction(s, chi, x, cfg.measure.p, cfg.escape);
  MeasureTree tree = build_measure_tree(c, cfg.measure.depth, cfg.escape);
  json samples = json::array();
  for (const SupportSample& smp : sample_support(c, cfg.measure.depth, cfg.measure.samples, cfg.seed, cfg.escape)) {
    json blocks = json::array();
    for (const Word& b : smp.blocks) blocks.push_back(s.format(b));
    samples.push_back({{"path", s.format(smp.word)},
                       {"blocks", blocks},
                       {"birkhoff", smp.birkhoff},
                       {"log_mass", smp.log_mass},
                       {"mass", std::exp(smp.log_mass)}});
  }
  log << "middle length " << c.middle_length << ", margin " << fixed(c.margin) << "\n";
  CsvTable table({"depth", "nodes", "total_mass", "mass_ratio", "min_local_dimension", "median_local_dimension"});
  for (const TreeLevel& l : tree.levels) {
    table.row().add(l.depth).add(l.node_count).add(l.total_mass).add(l.mass_ratio).add(l.min_local_dimension)
        .add(l.median_local_dimension);
    log << "depth " << l.depth << ": mass " << fixed(l.total_mass, 12) << ", ratio " << fixed(l.mass_ratio)
        << ", min local dimension " << fixed(l.min_local_dimension) << "\n";
  }
  if (wants(opt.format, OutputFormat::Json)) {
    json data = {{"construction", to_json(c)}, {"tree", to_json(s, tree)}, {"samples", samples}};
    write_artifact(opt.out / "measure.json", render_json(header(cfg, "measure"), data));
  }
  if (opt.format == OutputFormat::Csv) write_artifact(opt.out / "measure.csv", table.render(header(cfg, "measure")));
  return kExitOk;
}

// --- cover ------------------------------------------------------------------------------------

int cmd_cover(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const SftSystem& s = cfg.require_system();
  const Projection& chi = cfg.require_projection();
  const BoundaryPoint& x = cfg.require_boundary_point();
  CsvTable table({"p", "r", "m", "c_m", "partial_sum"});
  json reports = json::array();
  for (double p : cfg.cover.p) {
    CoveringReport rep = covering_sum(s, chi, x, cfg.cover.r, p, cfg.cover.n, cfg.cover.fit_lo, cfg.cover.fit_hi, cfg.limits);
    for (int m = 0; m <= rep.n; ++m)
      table.row().add(p).add(rep.r).add(m).add(rep.level_sums[m]).add(rep.partial_sums[m]);
    reports.push_back(to_json(rep));
    log << "p = " << p << ": log-slope " << fixed(rep.slope) << (rep.slope < 0 ? " (decaying)" : " (growing)") << "\n";
  }
  if (wants(opt.format, OutputFormat::Csv)) write_artifact(opt.out / "cover.csv", table.render(header(cfg, "cover")));
  if (opt.format == OutputFormat::Json) write_artifact(opt.out / "cover.json", render_json(header(cfg, "cover"), reports));
  return kExitOk;
}

// --- schottky ---------------------------------------------------------------------------------

int cmd_schottky(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  if (!cfg.schottky) throw InputError("schottky", "missing field");
  const SchottkySettings& st = *cfg.schottky;
  SchottkyGroup g = build_schottky(st.group);
  Projection chi = schottky_projection(g, st.target_rank, st.images);
  TheoremCOptions o = st.options;
  o.seed = cfg.seed;
  o.enumeration.threads = cfg.threads;
  TheoremCReport r = theorem_c_report(g, chi, st.x, o);
  log << "delta(G) = " << fixed(r.delta_G.orbital.value) << " +- " << fixed(r.delta_G.orbital.ci_width, 3)
      << " (n = " << r.delta_G.n << ")\n";
  log << "delta(N) = " << fixed(r.delta_N.orbital.value) << " +- " << fixed(r.delta_N.orbital.ci_width, 3)
      << " (n = " << r.delta_N.n << ")\n";
  log << "margins: " << fixed(r.lower_margin) << " above delta(G)/2, " << fixed(r.upper_margin)
      << " below delta(G); combined ci " << fixed(r.combined_ci, 3) << " -> "
      << (r.ordering_holds ? "ordering holds" : "ordering NOT established") << "\n";
  for (const EscapeAttempt& a : r.escape)
    log << "escape at p = " << fixed(a.p) << ": " << (a.constructed ? "threshold cleared" : "not constructed")
        << (a.tree_built ? ", tree built" : "") << " (" << a.message << ")\n";
  if (r.covering) log << "covering at p = " << fixed(r.covering->p) << ": log-slope " << fixed(r.covering->slope) << "\n";

  if (wants(opt.format, OutputFormat::Json))
    write_artifact(opt.out / "schottky.json", render_json(header(cfg, "schottky"), to_json(g, r)));
  if (wants(opt.format, OutputFormat::Csv)) {
    CsvTable table({"m", "words_G", "words_N", "a_m_G", "a_m_N", "max_gap"});
    const auto aG = r.delta_G.enumeration.level_sums(r.delta_G.orbital.value);
    const auto aN = r.delta_N.enumeration.level_sums(r.delta_N.orbital.value);
    const int top = std::max(r.delta_G.n, r.delta_N.n);
    for (int m = 0; m <= top; ++m) {
      table.row().add(m);
      if (m <= r.delta_G.n) table.add(r.delta_G.enumeration.words[m]); else table.add(std::string());
      if (m <= r.delta_N.n) table.add(r.delta_N.enumeration.words[m]); else table.add(std::string());
      if (m <= r.delta_G.n) table.add(aG[m]); else table.add(std::string());
      if (m <= r.delta_N.n) table.add(aN[m]); else table.add(std::string());
      if (m < static_cast<int>(r.gap_by_length.size())) table.add(r.gap_by_length[m]); else table.add(std::string());
    }
    write_artifact(opt.out / "schottky_levels.csv", table.render(header(cfg, "schottky_levels")));
  }
  return r.ordering_holds ? kExitOk : kExitInconclusive;
}

// --- verify -----------------------------------------------------------------------------------

// Brute-force level sums over every admissible word, for cross-checking the engine.
std::vector<double> enumerated_level_sums(const SftSystem& s, const Projection& chi, const GroupElement& target,
                                          double p, int n) {
  std::vector<double> out(n + 1, 0.0);
  if (target.length() == 0) out[0] = 1.0;
  for (int m = 1; m <= n; ++m)
    for_each_word(s, m, std::nullopt, std::nullopt, [&](const Word& w) {
      if (project(s, chi, w) == target) out[m] += std::exp(-p * birkhoff_sup(s, w));
      return true;
    });
  return out;
}

std::vector<std::uint64_t> enumerated_counts(const SftSystem& s, const Projection& chi, const GroupElement& target,
                                             int n) {
  std::vector<std::uint64_t> out(n + 1, 0);
  if (target.length() == 0) out[0] = 1;
  for (int m = 1; m <= n; ++m)
    for_each_word(s, m, std::nullopt, std::nullopt, [&](const Word& w) {
      if (project(s, chi, w) == target) ++out[m];
      return true;
    });
  return out;
}

struct Suite {
  std::vector<VerifyCheck> checks;

  void run(const std::string& name, const std::function<VerifyCheck()>& body) {
    VerifyCheck c;
    try {
      c = body();
    } catch (const InconclusiveError& e) {
      c.status = "inconclusive";
      c.detail = e.what();
    } catch (const std::exception& e) {
      c.status = "fail";
      c.detail = e.what();
    }
    c.name = name;
    checks.push_back(c);
  }
};

VerifyCheck make(bool ok, double value, double tol, std::string detail) {
  return {"", ok ? "pass" : "fail", value, tol, std::move(detail)};
}

}  // namespace

RunConfig default_verify_config() {
  return parse_config(R"({"system": {"fixture": "f2_srw"}, "boundary_points": [{"head": "1", "cycle": "e1"}]})");
}

std::vector<VerifyCheck> verify_suite(const RunConfig& cfg) {
  const SftSystem& s = cfg.require_system();
  const Projection& chi = cfg.require_projection();
  const BoundaryPoint x = default_point(cfg);
  Suite suite;

  // Largest length whose full enumeration stays small.
  int n_bf = 0;
  for (double words = s.size(); n_bf < 8 && words <= 2e6; words *= s.size()) ++n_bf;

  suite.run("kernel_counts_vs_enumeration", [&] {
    auto dp = kernel_counts(s, chi, n_bf, cfg.limits);
    auto bf = enumerated_counts(s, chi, GroupElement{}, n_bf);
    int bad = 0;
    for (int m = 0; m <= n_bf; ++m) bad += dp[m] != bf[m];
    return make(bad == 0, bad, 0, "lengths 0.." + std::to_string(n_bf));
  });

  suite.run("series_vs_enumeration", [&] {
    double worst = 0;
    const double p = cfg.series.p.front();
    std::vector<GroupElement> targets = cfg.targets;
    targets.push_back(chi.image(0));
    for (const GroupElement& g : targets) {
      auto dp = truncated_series(s, chi, g, p, n_bf, cfg.limits).level_sums;
      auto bf = enumerated_level_sums(s, chi, g, p, n_bf);
      for (int m = 0; m <= n_bf; ++m)
        if (bf[m] != 0 || dp[m] != 0) worst = std::max(worst, std::abs(dp[m] - bf[m]) / std::max(std::abs(bf[m]), 1e-300));
    }
    return make(worst <= 1e-12, worst, 1e-12, "max relative error, p = " + fixed(p));
  });

  std::optional<TransitivityCertificate> cert;
  suite.run("kernel_transitivity", [&] {
    TransitivitySearch t = verify_kernel_transitivity(s, chi, cfg.escape.connector_search_depth);
    if (!t.conclusive()) throw InconclusiveError(std::to_string(t.missing.size()) + " pairs without a connector");
    int bad = 0;
    for (Symbol a = 0; a < s.size(); ++a)
      for (Symbol b = 0; b < s.size(); ++b) {
        Word w{a};
        const Word& rho = t.certificate->connector(a, b);
        w.insert(w.end(), rho.begin(), rho.end());
        w.push_back(b);
        bad += !is_admissible(s, w) || project(s, chi, rho).length() != 0 || rho.empty();
      }
    cert = t.certificate;
    return make(bad == 0, bad, 0, "connectors up to length " + std::to_string(t.certificate->max_length));
  });

  suite.run("disjoint_transitive_set", [&] {
    if (!cert) throw InconclusiveError("no transitivity certificate");
    DisjointTransitiveSet d = build_disjoint_transitive_set(s, chi, *cert, cfg.escape.m_cap);
    std::vector<Word> all = d.flat();
    int bad = 0;
    for (Symbol a = 0; a < s.size(); ++a)
      for (Symbol b = 0; b < s.size(); ++b) {
        const Word& rho = d.words[a][b];
        Word w{a};
        w.insert(w.end(), rho.begin(), rho.end());
        w.push_back(b);
        bad += !is_admissible(s, w) || project(s, chi, rho).length() != 0;
      }
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) bad += prefix_related(all[i], all[j]);
    return make(bad == 0 && d.m <= cfg.escape.m_cap, bad, 0, "m = " + std::to_string(d.m));
  });

  if (cfg.involution) {
    suite.run("symmetry", [&] {
      SymmetryReport r = check_symmetry(s, chi, *cfg.involution, std::min(8, 2 * s.depth() + 4));
      return make(r.stabilizes, r.max_gap.back(), 0, "gap at the longest checked length");
    });
  }

  std::optional<ExponentEstimate> delta;
  EstimatorOptions eo;
  eo.window_lo = cfg.exponent.window_lo;
  suite.run("exponent_identity", [&] {
    ExponentEstimate e = exponent_estimate(s, chi, GroupElement{}, cfg.exponent.n_max, cfg.exponent.bracket, eo, cfg.limits);
    delta = e;
    bool ok = std::isfinite(e.value) && std::isfinite(e.ci_width) && e.ci_width >= 0;
    return make(ok, e.value, e.ci_width, "estimate with ci half-width as tolerance");
  });

  suite.run("exponent_target_invariance", [&] {
    if (!delta) throw InconclusiveError("no identity estimate");
    GroupElement g = boundary_prefix(x, 1);
    ExponentEstimate e = exponent_estimate(s, chi, g, cfg.exponent.n_max, cfg.exponent.bracket, eo, cfg.limits);
    double diff = std::abs(e.value - delta->value);
    double tol = e.ci_width + delta->ci_width;
    return make(diff <= tol, diff, tol, "target " + g.to_string());
  });

  suite.run("constructive_lower_bound", [&] {
    if (!delta) throw InconclusiveError("no identity estimate");
    DeltaLowerBound b = constructive_delta_lower_bound(s, chi, cfg.escape.tau_search_depth);
    return make(b.bound > 0 && b.bound <= delta->value + delta->ci_width, b.bound, delta->value + delta->ci_width,
                "bound below the estimate");
  });

  suite.run("termwise_inequality", [&] {
    if (!delta) throw InconclusiveError("no identity estimate");
    const double p = delta->value + 0.05, pp = p + 0.3;
    const int n = std::min(20, cfg.exponent.n_max);
    TermwiseReport t = termwise_decay_check(s, chi, x, p, pp, 10, n, cfg.limits);
    return make(t.all_hold && t.max_violation <= 1e-12, t.max_violation, 1e-12,
                "p = " + fixed(p) + ", p' = " + fixed(pp) + ", m <= 10, n = " + std::to_string(n));
  });

  suite.run("escape_measure", [&] {
    EscapeConstruction c = build_escape_construction(s, chi, x, cfg.measure.p, cfg.escape);
    MeasureTree tree = build_measure_tree(c, cfg.measure.depth, cfg.escape);
    double mass_err = 0, ratio_rise = 0;
    for (std::size_t i = 0; i < tree.levels.size(); ++i) {
      mass_err = std::max(mass_err, std::abs(tree.levels[i].total_mass - 1));
      if (i > 0) ratio_rise = std::max(ratio_rise, tree.levels[i].mass_ratio - tree.levels[i - 1].mass_ratio);
    }
    int unmatched = 0;
    for (const SupportSample& smp : sample_support(c, cfg.measure.depth, std::max(cfg.measure.samples, 1), cfg.seed, cfg.escape)) {
      bool found = false;
      for (const NodeClass& cl : tree.levels.back().classes)
        found = found || std::abs(cl.log_mass - smp.log_mass) <= 1e-12 * std::max(1.0, std::abs(smp.log_mass));
      unmatched += !found;
    }
    bool ok = c.margin > 0 && mass_err <= 1e-10 && ratio_rise <= 1e-10 && unmatched == 0;
    return make(ok, mass_err, 1e-10,
                "margin " + fixed(c.margin) + ", ratio rise " + fixed(ratio_rise, 3) + ", unmatched samples " +
                    std::to_string(unmatched));
  });

  suite.run("covering_bracket", [&] {
    if (!delta) throw InconclusiveError("no identity estimate");
    int bad = 0;
    std::string detail;
    for (double p : cfg.cover.p) {
      CoveringReport r = covering_sum(s, chi, x, cfg.cover.r, p, cfg.cover.n, cfg.cover.fit_lo, cfg.cover.fit_hi, cfg.limits);
      if (std::abs(p - delta->value) <= delta->ci_width) continue;
      const bool expect_decay = p > delta->value;
      bad += expect_decay ? !(r.slope < 0) : !(r.slope > 0);
      detail += (detail.empty() ? "" : ", ") + std::string("slope(") + fixed(p, 3) + ") = " + fixed(r.slope, 4);
    }
    return make(bad == 0, bad, 0, detail);
  });

  suite.run("supermultiplicativity", [&] {
    if (!cert || !delta) throw InconclusiveError("needs the certificate and the estimate");
    std::vector<int> ns;
    for (int n = 6; n <= 12; ++n) ns.push_back(n);
    SupermultiplicativityReport r = supermultiplicativity_report(s, chi, delta->value + 0.25, 2, ns, cert->max_length, 22, cfg.limits);
    return make(r.tail_change < 0.05, r.tail_change, 0.05, "relative change of the running maximum");
  });

  return suite.checks;
}

namespace {

int cmd_verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  std::vector<VerifyCheck> checks = verify_suite(cfg);
  CsvTable table({"check", "status", "value", "tolerance", "detail"});
  json arr = json::array();
  int fails = 0, inconclusive = 0;
  for (const VerifyCheck& c : checks) {
    table.row().add(c.name).add(c.status).add(c.value).add(c.tolerance).add(c.detail);
    arr.push_back({{"check", c.name}, {"status", c.status}, {"value", c.value}, {"tolerance", c.tolerance},
                   {"detail", c.detail}});
    fails += c.status == "fail";
    inconclusive += c.status == "inconclusive";
    log << std::left << std::setw(32) << c.name << std::setw(14) << c.status << c.detail << "\n";
  }
  log << checks.size() - fails - inconclusive << " passed, " << fails << " failed, " << inconclusive
      << " inconclusive\n";
  if (wants(opt.format, OutputFormat::Csv)) write_artifact(opt.out / "verify.csv", table.render(header(cfg, "verify")));
  if (wants(opt.format, OutputFormat::Json)) write_artifact(opt.out / "verify.json", render_json(header(cfg, "verify"), arr));
  if (fails) return kExitError;
  return inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "series", "exponent", "measure", "cover", "schottky", "verify"};
  return names;
}

int run_command(const std::string& name, const RunConfig& config, const CommandOptions& options, std::ostream& log,
                std::ostream& err) {
  try {
    if (name == "validate") return cmd_validate(config, options, log);
    if (name == "series") return cmd_series(config, options, log);
    if (name == "exponent") return cmd_exponent(config, options, log);
    if (name == "measure") return cmd_measure(config, options, log);
    if (name == "cover") return cmd_cover(config, options, log);
    if (name == "schottky") return cmd_schottky(config, options, log);
    if (name == "verify") return cmd_verify(config, options, log);
    err << "error: unknown command '" << name << "'\n";
    return kExitError;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace skewdim
