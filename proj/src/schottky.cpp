#include "skewdim/schottky.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "fiber_dp.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/poincare.hpp"

namespace skewdim {

namespace {

constexpr double kTwo32 = 4294967296.0;

// Disk automorphism taking 0 to tanh(t/2) on the positive real axis.
Mobius translation(double t) {
  return {Complex(std::cosh(t / 2)), Complex(std::sinh(t / 2)), Complex(std::sinh(t / 2)),
          Complex(std::cosh(t / 2))};
}

Mobius rotation(double theta) {
  const Complex h = std::polar(1.0, theta / 2);
  return {h, 0.0, 0.0, std::conj(h)};
}

// Takes the right half of the disk onto the half-disk cut off by the circle.
Mobius circle_chart(const Circle& c) {
  const double r0 = std::abs(c.center) - c.radius;
  const double t = std::log((1 + r0) / (1 - r0));
  return rotation(std::arg(c.center)) * translation(t);
}

std::string pair_name(const std::vector<std::string>& names, int i, int j) {
  return "(" + names[i] + ", " + names[j] + ")";
}

double matrix_distance(const Mobius& x, const Mobius& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

}  // namespace

Mobius Mobius::operator*(const Mobius& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

double displacement(const Mobius& g) {
  return std::acosh(std::max(1.0, g.frobenius2() / 2));
}

double hyperbolic_distance(Complex z, Complex w) {
  if (!(std::abs(z) < 1) || !(std::abs(w) < 1)) throw InputError("point", "must lie in the open unit disk");
  if (z == w) return 0.0;
  // |z - w| / |1 - conj(w) z| is the pseudo-hyperbolic distance.
  const double num = std::abs(z - w);
  const double den = std::abs(Complex(1.0) - std::conj(w) * z);
  const double s = num / den;
  return std::log1p(s) - std::log1p(-s);
}

double Arc::length() const {
  double a = std::arg(end / start);
  if (a <= 0) a += 2 * std::numbers::pi;
  return a;
}

bool Arc::contains(Complex z, double tol) const {
  double a = std::arg(z / start);
  if (a < -tol) a += 2 * std::numbers::pi;
  return a >= -tol && a <= length() + tol;
}

Symbol SchottkyGroup::symbol(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Symbol>(i);
  throw InputError("symbol", "unknown symbol '" + std::string(name) + "'");
}

Mobius SchottkyGroup::word_matrix(std::span<const Symbol> word) const {
  Mobius m;
  for (Symbol s : word) m = m * generators_.at(s);
  return m;
}

bool SchottkyGroup::is_reduced(std::span<const Symbol> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= circles_.size()) return false;
    if (i > 0 && word[i] == partner_[word[i - 1]]) return false;
  }
  return true;
}

Word SchottkyGroup::inverse_word(std::span<const Symbol> word) const {
  Word out(word.rbegin(), word.rend());
  for (Symbol& s : out) s = partner_.at(s);
  return out;
}

Word SchottkyGroup::parse_word(std::string_view text) const {
  std::istringstream in{std::string(text)};
  Word w;
  std::string tok;
  while (in >> tok) w.push_back(symbol(tok));
  return w;
}

std::string SchottkyGroup::format(std::span<const Symbol> word) const {
  std::string out;
  for (Symbol s : word) {
    if (!out.empty()) out += ' ';
    out += names_.at(s);
  }
  return out;
}

SchottkyGroup build_schottky(const SchottkyConfig& config) {
  const std::size_t k = config.circles.size();
  if (k % 2 != 0) throw InputError("circles", "symbol count " + std::to_string(k) + " is odd");
  if (k < 6) throw InputError("circles", "need at least 6 circles, got " + std::to_string(k));
  const double tol = config.tolerance;

  SchottkyGroup g;
  g.tolerance_ = tol;
  g.circles_ = config.circles;
  if (config.names.empty()) {
    for (std::size_t i = 0; i < k; ++i) g.names_.push_back("s" + std::to_string(i));
  } else {
    if (config.names.size() != k) throw InputError("names", "need one name per circle");
    g.names_ = config.names;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (g.names_[i] == g.names_[j]) throw InputError("names", "duplicate name '" + g.names_[i] + "'");
  }

  g.partner_.assign(k, static_cast<Symbol>(k));
  if (config.pairing.size() != k / 2) throw InputError("pairing", "need exactly " + std::to_string(k / 2) + " pairs");
  for (std::size_t p = 0; p < config.pairing.size(); ++p) {
    auto [i, j] = config.pairing[p];
    const std::string where = "pairing[" + std::to_string(p) + "]";
    if (i < 0 || j < 0 || i >= static_cast<int>(k) || j >= static_cast<int>(k))
      throw InputError(where, "index out of range");
    if (i == j) throw InputError(where, "circle paired with itself");
    if (g.partner_[i] != k || g.partner_[j] != k) throw InputError(where, "circle paired twice");
    g.partner_[i] = static_cast<Symbol>(j);
    g.partner_[j] = static_cast<Symbol>(i);
  }

  for (std::size_t i = 0; i < k; ++i) {
    const Circle& c = g.circles_[i];
    if (!(c.radius > 0)) throw GeometryError("circle " + g.names_[i] + " has nonpositive radius");
    const double defect = std::abs(std::norm(c.center) - (1 + c.radius * c.radius));
    if (defect > tol)
      throw GeometryError("circle " + g.names_[i] + " is not orthogonal to the unit circle (defect " +
                          std::to_string(defect) + ")");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double gap = std::abs(g.circles_[i].center - g.circles_[j].center) - g.circles_[i].radius -
                         g.circles_[j].radius;
      if (gap <= tol)
        throw GeometryError("circles " + pair_name(g.names_, i, j) + " intersect inside the closed disk");
    }

  for (std::size_t i = 0; i < k; ++i) {
    const Circle& c = g.circles_[i];
    const double phi = std::atan(c.radius);
    const double theta = std::arg(c.center);
    g.arcs_.push_back({std::polar(1.0, theta - phi), std::polar(1.0, theta + phi)});
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Mobius ta = circle_chart(g.circles_[i]);
    const Mobius tb = circle_chart(g.circles_[g.partner_[i]]);
    const Mobius j{Complex(0, 1), 0.0, 0.0, Complex(0, -1)};
    g.generators_.push_back(ta * j * tb.inverse());
  }

  // a takes the circle of abar onto the circle of a, and the half-disk of abar onto the closed
  // complement of the half-disk of a.
  for (std::size_t i = 0; i < k; ++i) {
    const Symbol b = g.partner_[i];
    const Circle& src = g.circles_[b];
    const Circle& dst = g.circles_[i];
    const Mobius& gen = g.generators_[i];
    const double phi = std::atan(src.radius);
    // Points of the source circle inside the disk: angles around its center facing the origin.
    const double base = std::arg(-src.center);
    const double half = std::numbers::pi / 2 - phi;
    for (int s = 0; s <= 16; ++s) {
      const double ang = base - half + 2 * half * s / 16.0;
      const Complex z = src.center + std::polar(src.radius, ang);
      const double off = std::abs(std::abs(gen(z) - dst.center) - dst.radius);
      if (off > tol)
        throw GeometryError("generator " + g.names_[i] + " does not map circle " + g.names_[b] + " onto circle " +
                            g.names_[i] + " (off by " + std::to_string(off) + ")");
    }
    const Complex inside = src.center * ((std::abs(src.center) - src.radius / 2) / std::abs(src.center));
    if (std::abs(gen(inside) - dst.center) <= dst.radius)
      throw GeometryError("generator " + g.names_[i] + " maps the half-disk of " + g.names_[b] +
                          " into the half-disk of " + g.names_[i]);
  }
  return g;
}

double orthogonal_radius(double half_width_rad) { return std::tan(half_width_rad); }

SchottkyConfig symmetric_config(int pairs, double half_width_deg) {
  if (pairs < 3) throw InputError("pairs", "need at least 3 pairs");
  const double phi = half_width_deg * std::numbers::pi / 180;
  const double rho = orthogonal_radius(phi);
  const double s = std::sqrt(1 + rho * rho);
  SchottkyConfig cfg;
  for (int j = 0; j < 2 * pairs; ++j) {
    cfg.circles.push_back({std::polar(s, std::numbers::pi * j / pairs), rho});
    cfg.names.push_back((j < pairs ? "a" : "A") + std::to_string(j % pairs + 1));
  }
  for (int j = 0; j < pairs; ++j) cfg.pairing.emplace_back(j, j + pairs);
  return cfg;
}

double generator_pair_defect(const SchottkyGroup& group) {
  double worst = 0;
  const Mobius id;
  const Mobius neg{-1.0, 0.0, 0.0, -1.0};
  for (int a = 0; a < group.size(); ++a) {
    const Mobius m = group.generator(a) * group.generator(group.partner(a));
    worst = std::max(worst, std::min(matrix_distance(m, id), matrix_distance(m, neg)));
  }
  return worst;
}

double orbital_birkhoff(const SchottkyGroup& group, std::span<const Symbol> word) {
  if (!group.is_reduced(word)) throw InputError("word", "not reduced");
  return displacement(group.word_matrix(word));
}

Complex representative_point(const SchottkyGroup& group, std::span<const Symbol> word) {
  if (word.empty() || !group.is_reduced(word)) throw InputError("word", "must be reduced and nonempty");
  return group.word_matrix(word)(group.base_arc(group.partner(word.back())).end);
}

double log_inverse_derivative(const SchottkyGroup& group, std::span<const Symbol> word, Complex z) {
  // (omega^{-1})'(z) = 1 / (c' z + d')^2 with omega^{-1} = [[d, -b], [-c, a]].
  const Mobius m = group.word_matrix(word);
  return -std::log(std::norm(-m.c * z + m.a));
}

double geometric_birkhoff(const SchottkyGroup& group, std::span<const Symbol> word) {
  if (word.empty() || !group.is_reduced(word)) throw InputError("word", "must be reduced and nonempty");
  // -log |omega'(e)| at the base endpoint e, which omega carries to z_omega.
  const Mobius m = group.word_matrix(word);
  const Complex e = group.base_arc(group.partner(word.back())).end;
  return std::log(std::norm(m.c * e + m.d));
}

Arc cylinder_arc(const SchottkyGroup& group, std::span<const Symbol> word) {
  if (word.empty() || !group.is_reduced(word)) throw InputError("word", "must be reduced and nonempty");
  const Mobius m = group.word_matrix(word.first(word.size() - 1));
  const Arc& base = group.base_arc(word.back());
  Complex s = m(base.start), e = m(base.end);
  return {s / std::abs(s), e / std::abs(e)};
}

SftSystem coding_system(const SchottkyGroup& group, int depth) {
  if (depth < 2) throw InputError("potential_depth", "must be at least 2");
  const int k = group.size();
  std::vector<std::vector<bool>> allowed(k, std::vector<bool>(k, true));
  for (int a = 0; a < k; ++a) allowed[a][group.partner(a)] = false;
  PotentialSpec pot;
  pot.depth = depth;
  Word w;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == depth) {
      const Complex z = representative_point(group, w);
      pot.table[w] = log_inverse_derivative(group, std::span<const Symbol>(w).first(1), z);
      return;
    }
    for (int s = 0; s < k; ++s) {
      if (!w.empty() && s == group.partner(w.back())) continue;
      w.push_back(static_cast<Symbol>(s));
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return SftSystem(group.names(), allowed, pot);
}

Involution coding_involution(const SchottkyGroup& group) {
  std::vector<Symbol> relabel(group.size());
  for (int a = 0; a < group.size(); ++a) relabel[a] = group.partner(a);
  return Involution(relabel);
}

Projection schottky_projection(const SchottkyGroup& group, int target_rank,
                               const std::map<std::string, GroupElement>& images) {
  if (target_rank < 2) throw InputError("projection.rank", "target must be non-cyclic (rank >= 2)");
  if (target_rank >= group.rank())
    throw InputError("projection.rank", "target rank must be below the group rank " + std::to_string(group.rank()));
  std::vector<GroupElement> img(group.size());
  for (int a = 0; a < group.size(); ++a) {
    auto it = images.find(group.name(a));
    if (it == images.end()) throw InputError("projection." + group.name(a), "missing image");
    if (it->second.max_generator() > target_rank)
      throw InputError("projection." + group.name(a), "uses a generator beyond the target rank");
    img[a] = it->second;
  }
  for (const auto& [name, g] : images) group.symbol(name);
  for (int a = 0; a < group.size(); ++a)
    if (img[group.partner(a)] != inverse(img[a]))
      throw InputError("projection." + group.name(group.partner(a)),
                       "image must be the inverse of the image of " + group.name(a));
  Projection chi(target_rank, img);
  GenerationCheck gen = check_generation(chi, 4);
  if (!gen.witnessed) throw InputError("projection", "images do not generate the target group");
  return chi;
}

void LevelHistogram::add(double value, double width) {
  const double scaled = value / width;
  const auto bin = static_cast<std::int64_t>(std::floor(scaled));
  if (count.empty()) {
    origin = bin;
    count.assign(1, 0);
    offset_sum.assign(1, 0);
  } else if (bin < origin) {
    const std::size_t grow = static_cast<std::size_t>(origin - bin);
    count.insert(count.begin(), grow, 0);
    offset_sum.insert(offset_sum.begin(), grow, 0);
    origin = bin;
  }
  const std::size_t idx = static_cast<std::size_t>(bin - origin);
  if (idx >= count.size()) {
    count.resize(idx + 1, 0);
    offset_sum.resize(idx + 1, 0);
  }
  ++count[idx];
  offset_sum[idx] += static_cast<std::uint64_t>((scaled - static_cast<double>(bin)) * kTwo32);
}

void LevelHistogram::merge(const LevelHistogram& other) {
  if (other.count.empty()) return;
  if (count.empty()) {
    *this = other;
    return;
  }
  const std::int64_t lo = std::min(origin, other.origin);
  const std::int64_t hi = std::max(origin + static_cast<std::int64_t>(count.size()),
                                   other.origin + static_cast<std::int64_t>(other.count.size()));
  std::vector<std::uint64_t> c(hi - lo, 0), s(hi - lo, 0);
  for (std::size_t i = 0; i < count.size(); ++i) {
    c[origin - lo + i] += count[i];
    s[origin - lo + i] += offset_sum[i];
  }
  for (std::size_t i = 0; i < other.count.size(); ++i) {
    c[other.origin - lo + i] += other.count[i];
    s[other.origin - lo + i] += other.offset_sum[i];
  }
  origin = lo;
  count = std::move(c);
  offset_sum = std::move(s);
}

double LevelHistogram::laplace(double p, double width) const {
  double total = 0;
  for (std::size_t i = 0; i < count.size(); ++i) {
    if (count[i] == 0) continue;
    const double n = static_cast<double>(count[i]);
    const double mean =
        (static_cast<double>(origin + static_cast<std::int64_t>(i)) + static_cast<double>(offset_sum[i]) / kTwo32 / n) *
        width;
    total += n * std::exp(-p * mean);
  }
  return total;
}

std::vector<double> OrbitEnumeration::level_sums(double p, bool use_geometric) const {
  const auto& h = use_geometric ? geometric : orbital;
  std::vector<double> out(h.size());
  for (std::size_t m = 0; m < h.size(); ++m) out[m] = h[m].laplace(p, bin_width);
  return out;
}

double reduced_word_count(const SchottkyGroup& group, int n) {
  double total = 1, level = group.size();
  for (int m = 1; m <= n; ++m) {
    total += level;
    level *= group.size() - 1;
  }
  return total;
}

namespace {

struct OrbitWorker {
  const SchottkyGroup& group;
  const Projection* chi;
  int n;
  double width;
  std::vector<Complex> endpoint;  // per last letter
  std::optional<detail::CayleyTrie> trie;
  std::vector<LevelHistogram> orbital, geometric;
  std::vector<double> max_gap;
  std::vector<std::uint64_t> words;
  std::uint64_t nodes = 0;

  OrbitWorker(const SchottkyGroup& g, const Projection* c, int n_, double w)
      : group(g), chi(c), n(n_), width(w), orbital(n_ + 1), geometric(n_ + 1), max_gap(n_ + 1, 0.0),
        words(n_ + 1, 0) {
    for (int a = 0; a < g.size(); ++a) endpoint.push_back(g.base_arc(g.partner(a)).end);
    if (chi) trie.emplace(chi->rank(), static_cast<std::size_t>(g.size()), std::vector<int>{});
  }

  void record(int m, const Mobius& mat, int last) {
    const double orb = displacement(mat);
    double geo = 0;
    if (m > 0) {
      const Complex e = endpoint[last];
      geo = std::log(std::norm(mat.c * e + mat.d));
    }
    orbital[m].add(orb, width);
    geometric[m].add(geo, width);
    max_gap[m] = std::max(max_gap[m], std::abs(geo - orb));
    ++words[m];
  }

  // Visits every extension of the current word up to length `limit`, recording from `from` on.
  void dfs(const Mobius& mat, int m, int last, std::int32_t node, int from, int limit) {
    ++nodes;
    if (m >= from && (!chi || node == 0)) record(m, mat, last);
    if (m == limit) return;
    for (int s = 0; s < group.size(); ++s) {
      if (m > 0 && s == group.partner(last)) continue;
      std::int32_t child = 0;
      if (chi) {
        child = trie->step_symbol(node, static_cast<Symbol>(s), *chi);
        if (trie->depth(child) > chi->lambda1() * (n - m - 1)) continue;
      }
      dfs(mat * group.generator(s), m + 1, s, child, from, limit);
    }
  }

  std::int32_t node_of(const Word& w) {
    std::int32_t v = 0;
    if (chi)
      for (Symbol s : w) v = trie->step_symbol(v, s, *chi);
    return v;
  }
};

}  // namespace

OrbitEnumeration enumerate_orbits(const SchottkyGroup& group, int n, const Projection* chi,
                                  const EnumerationOptions& options) {
  if (n < 0) throw InputError("n_max", "must be nonnegative");
  if (!(options.bin_width > 0)) throw InputError("bin_width", "must be positive");
  if (chi && static_cast<int>(chi->size()) != group.size())
    throw InputError("projection", "needs one image per symbol");

  // Work is split over the reduced prefixes of length `split`.
  const int split = std::min(n, 2);
  std::vector<Word> prefixes;
  {
    Word w;
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(w.size()) == split) {
        prefixes.push_back(w);
        return;
      }
      for (int s = 0; s < group.size(); ++s) {
        if (!w.empty() && s == group.partner(w.back())) continue;
        w.push_back(static_cast<Symbol>(s));
        self(self);
        w.pop_back();
      }
    };
    rec(rec);
  }

  OrbitWorker head(group, chi, n, options.bin_width);
  if (split > 0) head.dfs(Mobius{}, 0, 0, 0, 0, split - 1);

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(prefixes.size())));
  std::vector<OrbitWorker> workers;
  for (int t = 0; t < threads; ++t) workers.emplace_back(group, chi, n, options.bin_width);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int t) {
    try {
      OrbitWorker& w = workers[t];
      for (std::size_t i = next++; i < prefixes.size(); i = next++) {
        const Word& pre = prefixes[i];
        const std::int32_t node = w.node_of(pre);
        if (chi && w.trie->depth(node) > chi->lambda1() * (n - split)) continue;
        w.dfs(group.word_matrix(pre), split, pre.empty() ? 0 : pre.back(), node, split, n);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  OrbitEnumeration out;
  out.n = n;
  out.kernel_only = chi != nullptr;
  out.bin_width = options.bin_width;
  out.orbital = std::move(head.orbital);
  out.geometric = std::move(head.geometric);
  out.max_gap = std::move(head.max_gap);
  out.words = std::move(head.words);
  out.nodes = head.nodes;
  for (auto& w : workers) {
    for (int m = 0; m <= n; ++m) {
      out.orbital[m].merge(w.orbital[m]);
      out.geometric[m].merge(w.geometric[m]);
      out.max_gap[m] = std::max(out.max_gap[m], w.max_gap[m]);
      out.words[m] += w.words[m];
    }
    out.nodes += w.nodes;
  }
  return out;
}

namespace {

SchottkyExponent estimate_from(OrbitEnumeration e) {
  SchottkyExponent out;
  out.n = e.n;
  const std::pair<double, double> bracket{0.02, 2.0};
  out.orbital = estimate_exponent([&](double p) { return e.level_sums(p, false); }, e.n, bracket);
  out.geometric = estimate_exponent([&](double p) { return e.level_sums(p, true); }, e.n, bracket);
  out.enumeration = std::move(e);
  return out;
}

}  // namespace

SchottkyExponent delta_G_estimate(const SchottkyGroup& group, int n_max, double node_budget,
                                  const EnumerationOptions& options) {
  if (n_max < 8) throw InputError("n_max", "must be at least 8");
  int n = n_max;
  while (n > 8 && reduced_word_count(group, n) > node_budget) --n;
  return estimate_from(enumerate_orbits(group, n, nullptr, options));
}

SchottkyExponent delta_N_estimate(const SchottkyGroup& group, const Projection& chi, int n_max,
                                  const EnumerationOptions& options) {
  if (n_max < 8) throw InputError("n_max", "must be at least 8");
  return estimate_from(enumerate_orbits(group, n_max, &chi, options));
}

KernelCertificate kernel_certificate(const SchottkyGroup& group, const Projection& chi, std::span<const Symbol> omega) {
  KernelCertificate cert;
  cert.omega.assign(omega.begin(), omega.end());
  if (omega.empty() || !group.is_reduced(omega)) {
    cert.failure = "kernel word must be reduced and nonempty";
    return cert;
  }
  GroupElement img;
  for (Symbol s : omega) img = img * chi.image(s);
  if (img.length() != 0) {
    cert.failure = "word " + group.format(omega) + " is not in the kernel";
    return cert;
  }
  const Symbol first_inv = group.partner(omega.front());
  const Symbol last = omega.back();
  std::vector<Symbol> heads;
  for (int a = 0; a < group.size(); ++a) {
    if (a == first_inv || a == last) continue;
    Word w{static_cast<Symbol>(a)};
    w.insert(w.end(), omega.begin(), omega.end());
    w.push_back(group.partner(a));
    cert.words.push_back(w);
    heads.push_back(static_cast<Symbol>(a));
  }
  const int k = group.size();
  cert.connectors.assign(k, std::vector<Word>(k));
  for (int b = 0; b < k; ++b)
    for (int c = 0; c < k; ++c) {
      bool found = false;
      for (std::size_t i = 0; i < cert.words.size() && !found; ++i) {
        Word full{static_cast<Symbol>(b)};
        full.insert(full.end(), cert.words[i].begin(), cert.words[i].end());
        full.push_back(static_cast<Symbol>(c));
        if (group.is_reduced(full)) {
          cert.connectors[b][c] = cert.words[i];
          found = true;
        }
      }
      if (!found) {
        cert.failure = "no connector for (" + group.name(b) + ", " + group.name(c) + ")";
        return cert;
      }
    }
  cert.valid = true;
  return cert;
}

std::vector<Word> random_reduced_words(const SchottkyGroup& group, int count, int max_length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto k = static_cast<std::uint64_t>(group.size());
  std::vector<Word> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_length));
    Word w;
    w.push_back(static_cast<Symbol>(rng() % k));
    while (static_cast<int>(w.size()) < len) {
      auto s = static_cast<Symbol>(rng() % (k - 1));
      if (s >= group.partner(w.back())) ++s;
      w.push_back(s);
    }
    out.push_back(std::move(w));
  }
  return out;
}

TheoremCReport theorem_c_report(const SchottkyGroup& group, const Projection& chi, const BoundaryPoint& x,
                                const TheoremCOptions& options) {
  TheoremCReport rep;
  rep.generator_defect = generator_pair_defect(group);

  for (const Word& w : random_reduced_words(group, options.random_words, options.random_max_length, options.seed)) {
    const double fwd = orbital_birkhoff(group, w);
    const double bwd = orbital_birkhoff(group, group.inverse_word(w));
    rep.orbital_symmetry_gap = std::max(rep.orbital_symmetry_gap, std::abs(fwd - bwd));
  }

  rep.delta_G = delta_G_estimate(group, options.n_max, options.g_node_budget, options.enumeration);
  if (rep.delta_G.n >= options.gap_length) {
    rep.gap_by_length.assign(rep.delta_G.enumeration.max_gap.begin(),
                             rep.delta_G.enumeration.max_gap.begin() + options.gap_length + 1);
  } else {
    rep.gap_by_length = enumerate_orbits(group, options.gap_length, nullptr, options.enumeration).max_gap;
  }
  {
    const int L = options.gap_length;
    const double top = rep.gap_by_length[L];
    rep.gap_tail_change = L >= 3 && top > 0 ? (top - rep.gap_by_length[L - 3]) / top : 1.0;
    rep.gap_stabilizes = rep.gap_tail_change < 0.01;
  }

  rep.potential_symmetry_bound = 2 * rep.gap_by_length.back() + rep.orbital_symmetry_gap;
  {
    const Involution dagger = coding_involution(group);
    rep.dagger_is_inverse = true;
    for (const Word& w : random_reduced_words(group, 100, 12, options.seed + 1)) {
      const Word d = dagger.apply(w);
      if (d != group.inverse_word(w) || !group.is_reduced(d)) rep.dagger_is_inverse = false;
    }
    for (int a = 0; a < group.size(); ++a)
      if (chi.image(dagger(static_cast<Symbol>(a))) != inverse(chi.image(static_cast<Symbol>(a))))
        rep.dagger_is_inverse = false;
  }

  const SftSystem system = coding_system(group, options.potential_depth);

  {
    Word omega;
    for_each_fiber_word(system, chi, GroupElement{}, 1, 6, std::nullopt, std::nullopt, [&](const Word& w) {
      omega = w;
      return false;
    });
    rep.certificate = kernel_certificate(group, chi, omega);
  }

  rep.delta_N = delta_N_estimate(group, chi, options.n_max, options.enumeration);
  rep.lower_margin = rep.delta_N.orbital.value - rep.delta_G.orbital.value / 2;
  rep.upper_margin = rep.delta_G.orbital.value - rep.delta_N.orbital.value;
  rep.combined_ci = rep.delta_G.orbital.ci_width + rep.delta_N.orbital.ci_width;
  rep.ordering_holds = rep.lower_margin > rep.combined_ci && rep.upper_margin > rep.combined_ci;

  const std::pair<double, double> bracket{0.02, 2.0};
  rep.delta_G_dp = estimate_exponent([&](double p) { return unrestricted_level_sums(system, p, options.dp_n); },
                                     options.dp_n, bracket);
  rep.delta_N_dp = exponent_estimate(system, chi, GroupElement{}, options.dp_n, bracket, {}, options.escape.limits);

  const SftSystem coarse = coding_system(group, options.escape_depth);
  const double dn = rep.delta_N.orbital.value;
  for (double f : options.escape_factors) {
    EscapeAttempt at;
    at.p = f * dn;
    try {
      EscapeConstruction c = build_escape_construction(coarse, chi, x, at.p, options.escape);
      at.constructed = true;
      at.middle_length = c.middle_length;
      at.threshold = c.threshold;
      at.margin = c.margin;
      MeasureTree tree = build_measure_tree(c, options.measure_depth, options.escape);
      for (const TreeLevel& l : tree.levels) {
        at.total_mass.push_back(l.total_mass);
        at.mass_ratio.push_back(l.mass_ratio);
        at.min_local_dimension.push_back(l.min_local_dimension);
      }
      at.tree_built = true;
      at.message = "ok";
    } catch (const Error& e) {
      at.message = e.what();
    }
    rep.escape.push_back(std::move(at));
    if (rep.escape.back().constructed) break;
  }

  try {
    const int n = options.cover_n;
    rep.covering = covering_sum(coarse, chi, x, options.cover_r, options.cover_factor * dn, n, n / 2, n,
                                options.escape.limits);
    rep.covering_message = "ok";
  } catch (const Error& e) {
    rep.covering_message = e.what();
  }
  return rep;
}

}  // namespace skewdim
