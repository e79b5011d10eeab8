// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "skewdim/commands.hpp"
#include "skewdim/config.hpp"
#include "skewdim/escape.hpp"
#include "skewdim/fixtures.hpp"
#include "skewdim/poincare.hpp"
#include "skewdim/report.hpp"
#include "skewdim/schottky.hpp"

using namespace skewdim;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kCountSeconds = 1.0;
constexpr double kExponentTolerance = 0.1;
constexpr double kExponentSeconds = 60.0;
constexpr double kOracleGrowthTolerance = 1e-3;
constexpr double kTermwiseSlack = 1e-12;
constexpr double kSupermultiplicativeChange = 0.05;
constexpr double kMassTolerance = 1e-10;
constexpr double kRatioSlack = 1e-10;
constexpr double kMinLocalDimension = 0.55;
constexpr double kSeriesRelError = 1e-12;
constexpr int kMCap = 12;
constexpr double kGeneratorDefect = 1e-10;
constexpr double kSymmetryGap = 1e-9;
constexpr double kSchottkySeconds = 300.0;
// Longest denominator word in the supermultiplicativity sweep; radius-4 fibers past this exhaust memory.
constexpr int kDenominatorCap = 24;

const double kTarget = std::log(2.0 * std::sqrt(3.0));

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> letters(const GroupElement& g) { return {g.letters().begin(), g.letters().end()}; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int k, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("CRITERION %2d %s  %s  [%.1f s]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const SftSystem srw = fixtures::f2_srw_system();
  const SftSystem constrained = fixtures::f2_constrained_system();
  const Projection chi = fixtures::f2_srw_projection();
  const BoundaryPoint x = BoundaryPoint::parse("", "e1");
  std::optional<ExponentEstimate> delta;

  criterion(1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = kernel_counts(srw, chi, 6);
    const double dt = seconds_since(t0);
    auto bf = oracle::fiber_counts(oracle::from_system(srw, chi), {}, 6);
    bool ok = r[2] == 4 && r[4] == 28 && r[6] == 232 && dt < kCountSeconds;
    for (int m = 0; m <= 6; ++m) ok = ok && r[m] == bf[m];
    return Outcome{ok, "r2,r4,r6 = " + std::to_string(r[2]) + "," + std::to_string(r[4]) + "," +
                           std::to_string(r[6]) + " (brute force " + std::to_string(bf[2]) + "," +
                           std::to_string(bf[4]) + "," + std::to_string(bf[6]) + "), engine " + fmt("%.3f s", dt)};
  });

  criterion(2, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    ExponentEstimate e = exponent_estimate(srw, chi, GroupElement{}, 24, {0.5, 3.0});
    const double dt = seconds_since(t0);
    delta = e;
    // Independent oracle: growth of r_{m+2}/r_m from the radial chain.
    const double oracle_delta = 0.5 * std::log(oracle::radial_growth_ratio(2, 400));
    bool ok = std::abs(e.value - kTarget) <= kExponentTolerance && dt < kExponentSeconds &&
              std::abs(oracle_delta - kTarget) <= kOracleGrowthTolerance;
    return Outcome{ok, "delta = " + fmt("%.5f", e.value) + " +- " + fmt("%.5f", e.ci_width) + ", log(2 sqrt 3) = " +
                           fmt("%.5f", kTarget) + ", oracle " + fmt("%.5f", oracle_delta) + ", " + fmt("%.1f s", dt)};
  });

  criterion(3, [&] {
    if (!delta) return Outcome{false, "criterion 2 produced no estimate"};
    bool ok = true;
    std::string detail;
    for (const char* t : {"e1", "e1 e2"}) {
      ExponentEstimate e = exponent_estimate(srw, chi, GroupElement::parse(t), 24, {0.5, 3.0});
      const double diff = std::abs(e.value - delta->value), tol = e.ci_width + delta->ci_width;
      ok = ok && diff <= tol;
      detail += std::string(detail.empty() ? "" : "; ") + "delta(" + t + ") = " + fmt("%.5f", e.value) + ", |diff| " +
                fmt("%.2e", diff) + " <= ci " + fmt("%.2e", tol);
    }
    return Outcome{ok, detail};
  });

  criterion(4, [&] {
    bool ok = true;
    double worst = 0;
    TermwiseReport last;
    for (int n = 1; n <= 20; ++n) {
      TermwiseReport t = termwise_decay_check(srw, chi, x, 1.3, 1.6, std::min(10, n), n);
      ok = ok && t.all_hold && t.max_violation <= kTermwiseSlack;
      worst = std::max(worst, t.max_violation);
      last = t;
    }
    // Increments of the ratio series at n = 20. Levels live on a period-2 lattice, so single
    // steps alternate; compare two-step geometric means over the upper half of m, and the fitted
    // log-slope, with exp(-0.3).
    const auto& f = last.increment_factors;
    double worst_factor = 0;
    for (std::size_t i = f.size() / 2; i + 1 < f.size(); ++i) worst_factor = std::max(worst_factor, std::sqrt(f[i] * f[i + 1]));
    ok = ok && worst_factor <= std::exp(-0.3) && last.decay_rate <= -0.3;
    return Outcome{ok, "max lhs/bound - 1 = " + fmt("%.2e", worst) + " over m <= 10, n <= 20; two-step factor " +
                           fmt("%.4f", worst_factor) + ", fitted rate " + fmt("%.4f", last.decay_rate) +
                           " vs exp(-0.3) = " + fmt("%.4f", std::exp(-0.3))};
  });

  criterion(5, [&] {
    std::vector<int> ns;
    for (int n = 6; n <= 16; ++n) ns.push_back(n);
    TransitivitySearch t = verify_kernel_transitivity(srw, chi, 8);
    SupermultiplicativityReport r =
        supermultiplicativity_report(srw, chi, 1.5, 2, ns, t.certificate->max_length, kDenominatorCap);
    std::string runs;
    for (const auto& row : r.rows) runs += (runs.empty() ? "" : " ") + fmt("%.4f", row.running_max);
    return Outcome{r.tail_change < kSupermultiplicativeChange,
                   "running max " + runs + "; tail change " + fmt("%.4f", r.tail_change)};
  });

  criterion(6, [&] {
    EscapeConstruction c = build_escape_construction(srw, chi, x, 0.6);
    MeasureTree t = build_measure_tree(c, 5);
    double mass_err = 0;
    for (const TreeLevel& l : t.levels) mass_err = std::max(mass_err, std::abs(l.total_mass - 1));
    auto prof = mass_ratio_profile(t);
    double rise = 0;
    for (std::size_t i = 1; i < prof.size(); ++i) rise = std::max(rise, prof[i] - prof[i - 1]);
    const double ld = t.levels.size() == 5 ? t.levels[4].min_local_dimension : 0;
    bool ok = c.margin > 0 && t.levels.size() == 5 && mass_err <= kMassTolerance && rise <= kRatioSlack &&
              ld >= kMinLocalDimension;
    return Outcome{ok, "middle length " + std::to_string(c.middle_length) + ", margin " + fmt("%.4f", c.margin) +
                           ", max |mass - 1| " + fmt("%.1e", mass_err) + ", ratio rise " + fmt("%.1e", rise) +
                           ", min local dimension at depth 5 " + fmt("%.4f", ld)};
  });

  criterion(7, [&] {
    CoveringReport hi = covering_sum(srw, chi, x, 2, 1.5, 20, 8, 20);
    CoveringReport lo = covering_sum(srw, chi, x, 2, 0.8, 20, 8, 20);
    const double d = delta ? delta->value : std::nan("");
    bool ok = hi.slope < 0 && lo.slope > 0 && 0.8 < d && d < 1.5;
    return Outcome{ok, "slope(1.5) = " + fmt("%.4f", hi.slope) + ", slope(0.8) = " + fmt("%.4f", lo.slope) +
                           ", delta = " + fmt("%.4f", d)};
  });

  criterion(8, [&] {
    double worst = 0;
    int compared = 0;
    for (const SftSystem* s : {&srw, &constrained}) {
      oracle::Shift sh = oracle::from_system(*s, chi);
      for (const char* t : {"1", "e1", "e1 e2", "E2 E2 e1"})
        for (double p : {0.8, 1.5}) {
          GroupElement g = GroupElement::parse(t);
          auto dp = truncated_series(*s, chi, g, p, 8).level_sums;
          auto bf = oracle::level_sums(sh, letters(g), p, 8);
          for (int m = 0; m <= 8; ++m) {
            if (dp[m] == bf[m]) continue;
            worst = std::max(worst, std::abs(dp[m] - bf[m]) / std::max(std::abs(dp[m]), std::abs(bf[m])));
          }
          ++compared;
        }
    }
    return Outcome{worst <= kSeriesRelError, std::to_string(compared) + " profiles, |w| <= 8, max relative error " +
                                                 fmt("%.2e", worst)};
  });

  criterion(9, [&] {
    TransitivitySearch t = verify_kernel_transitivity(srw, chi, 8);
    DisjointTransitiveSet d = build_disjoint_transitive_set(srw, chi, *t.certificate, kMCap);
    int bad = 0;
    for (Symbol a = 0; a < srw.size(); ++a)
      for (Symbol b = 0; b < srw.size(); ++b) {
        Word w{a};
        w.insert(w.end(), d.words[a][b].begin(), d.words[a][b].end());
        w.push_back(b);
        bad += !is_admissible(srw, w) || !project(srw, chi, d.words[a][b]).is_identity();
      }
    auto all = d.flat();
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j) bad += prefix_related(all[i], all[j]);
    return Outcome{bad == 0 && d.m <= kMCap && all.size() == 16,
                   "m = " + std::to_string(d.m) + ", " + std::to_string(all.size()) + " words, violations " +
                       std::to_string(bad)};
  });

  criterion(10, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = parse_config(R"({"schottky": {"preset": "sym3", "n_max": 14}})");
    const SchottkySettings& st = *cfg.schottky;
    SchottkyGroup g = build_schottky(st.group);
    Projection pchi = schottky_projection(g, 2, st.images);
    TheoremCReport r = theorem_c_report(g, pchi, st.x, st.options);
    const double dt = seconds_since(t0);
    // Oracle: distances from the direct matrix product, for each word and its inverse.
    double oracle_gap = 0;
    for (const Word& w : random_reduced_words(g, 1000, 24, 1)) {
      oracle::Mat m{1.0, 0.0, 0.0, 1.0}, mi{1.0, 0.0, 0.0, 1.0};
      for (Symbol s : w) m = oracle::mul(m, oracle::to_mat(g.generator(s)));
      for (Symbol s : g.inverse_word(w)) mi = oracle::mul(mi, oracle::to_mat(g.generator(s)));
      oracle_gap = std::max(oracle_gap, std::abs(oracle::distance_from_origin(m) - oracle::distance_from_origin(mi)));
    }
    const double dG = r.delta_G.orbital.value, dN = r.delta_N.orbital.value;
    bool ok = r.generator_defect <= kGeneratorDefect && r.orbital_symmetry_gap <= kSymmetryGap &&
              oracle_gap <= kSymmetryGap && r.gap_stabilizes && r.ordering_holds && dG / 2 < dN && dN < dG &&
              r.lower_margin > r.combined_ci && r.upper_margin > r.combined_ci && dt < kSchottkySeconds;
    return Outcome{ok, "defect " + fmt("%.1e", r.generator_defect) + ", symmetry gap " +
                           fmt("%.1e", r.orbital_symmetry_gap) + " (oracle " + fmt("%.1e", oracle_gap) +
                           "), potential gap tail change " + fmt("%.1e", r.gap_tail_change) + ", delta(G) = " +
                           fmt("%.5f", dG) + ", delta(N) = " + fmt("%.5f", dN) + ", margins " +
                           fmt("%.4f", r.lower_margin) + " / " + fmt("%.4f", r.upper_margin) + " > ci " +
                           fmt("%.4f", r.combined_ci) + ", " + fmt("%.0f s", dt)};
  });

  criterion(11, [&] {
    const fs::path base = fs::temp_directory_path() / "skewdim_acceptance_verify";
    fs::remove_all(base);
    std::vector<std::string> hashes;
    int rc_all = 0;
    for (const char* run : {"a", "b"}) {
      CommandOptions o;
      o.out = base / run;
      std::ostringstream log, err;
      int rc = run_command("verify", default_verify_config(), o, log, err);
      rc_all = std::max(rc_all, rc);
      hashes.push_back(sha256_hex(slurp(o.out / "verify.json")) + sha256_hex(slurp(o.out / "verify.csv")));
    }
    bool ok = hashes[0] == hashes[1] && rc_all == kExitOk;
    return Outcome{ok, "verify exit " + std::to_string(rc_all) + ", artifact hashes " +
                           (hashes[0] == hashes[1] ? "identical" : "differ") + " (" + hashes[0].substr(0, 16) + ")"};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
