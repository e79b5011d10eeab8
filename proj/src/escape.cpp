#include "skewdim/escape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <tuple>
#include <unordered_map>

#include "fiber_dp.hpp"

namespace skewdim {

namespace {

struct Ctx {
  std::uint64_t code = 0;
  int len = 0;
};

// Context bookkeeping with window values quantized to integers, so that stored Birkhoff sums
// add exactly and compare bitwise.
class ContextTools {
 public:
  ContextTools(const SftSystem& system, double quantum) : system_(system), quantum_(quantum) {
    q_ = system.size();
    k_ = system.depth();
    s_ = system.context_length();
    for (int i = 0; i < s_; ++i) qs_ *= q_;
    for (int i = 0; i < k_ - 1; ++i) qk1_ *= q_;
    uq_.resize(qk1_ * q_, 0);
    for (std::uint64_t c = 0; c < uq_.size(); ++c) {
      double u = system.window_value(c);
      uq_[c] = std::isnan(u) ? 0 : std::llround(u / quantum);
    }
  }

  bool append(Ctx& c, Symbol a, std::int64_t& full) const {
    if (c.len > 0 && !system_.allowed(static_cast<Symbol>(c.code % q_), a)) return false;
    if (c.len >= k_ - 1) full += uq_[(c.code % qk1_) * q_ + a];
    c.code = c.len == s_ ? (c.code * q_ + a) % qs_ : c.code * q_ + a;
    c.len = std::min(c.len + 1, s_);
    return true;
  }

  bool append(Ctx& c, std::span<const Symbol> word, std::int64_t& full) const {
    for (Symbol a : word)
      if (!append(c, a, full)) return false;
    return true;
  }

  double tail(const Ctx& c) const {
    int len = std::min(c.len, k_ - 1);
    std::uint64_t mod = 1;
    for (int i = 0; i < len; ++i) mod *= q_;
    return system_.tail(len, c.code % mod);
  }

  Symbol last(const Ctx& c) const { return static_cast<Symbol>(c.code % q_); }
  double quantum() const { return quantum_; }
  std::uint64_t q() const { return q_; }

 private:
  const SftSystem& system_;
  double quantum_;
  std::uint64_t q_ = 0, qs_ = 1, qk1_ = 1;
  int k_ = 1, s_ = 1;
  std::vector<std::int64_t> uq_;
};

using DistKey = std::tuple<std::uint64_t, int, std::int64_t>;  // ctx code, ctx len, full sum
using Dist = std::map<DistKey, double>;

struct SummaryEntry {
  Ctx ctx;
  std::int64_t delta_full;
  double count;
};

double log_sum_exp(const std::vector<double>& logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logs) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0;
  for (double v : logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

// Block summaries and middle-segment transfer for one construction.
class BlockComposer {
 public:
  BlockComposer(const EscapeConstruction& c, const EscapeOptions& options)
      : c_(c), tools_(c.system, options.quantum), options_(options),
        trie_(c.chi.rank(), c.system.size(), {}, options.limits.max_nodes) {
    connectors_ = c.connectors.flat();
  }

  const ContextTools& tools() const { return tools_; }

  // Block index k uses tau(x_k) and must be followed by the first symbol of tau(x_{k+1}).
  const std::vector<SummaryEntry>& summary(int k, const Ctx& in) {
    const Word& tau = c_.tau_for(c_.x.letter(k));
    const Symbol next_first = c_.tau_for(c_.x.letter(k + 1)).front();
    auto key = std::make_tuple(tau, next_first, in.code, in.len);
    auto it = summaries_.find(key);
    if (it != summaries_.end()) return it->second;

    Dist dist{{DistKey{in.code, in.len, 0}, 1.0}};
    dist = apply_words(dist, {tau});
    dist = apply_words(dist, connectors_);
    dist = apply_middle(dist);
    std::vector<Word> closing;
    for (const Word& w : connectors_)
      if (c_.system.allowed(w.back(), next_first)) closing.push_back(w);
    dist = apply_words(dist, closing);
    std::vector<SummaryEntry> out;
    for (const auto& [k2, cnt] : dist)
      out.push_back({Ctx{std::get<0>(k2), std::get<1>(k2)}, std::get<2>(k2), cnt});
    return summaries_.emplace(key, std::move(out)).first->second;
  }

 private:
  Dist apply_words(const Dist& in, const std::vector<Word>& words) const {
    Dist out;
    for (const auto& [key, cnt] : in) {
      for (const Word& w : words) {
        Ctx c{std::get<0>(key), std::get<1>(key)};
        std::int64_t f = std::get<2>(key);
        if (!tools_.append(c, w, f)) continue;
        out[DistKey{c.code, c.len, f}] += cnt;
      }
    }
    return out;
  }

  Dist apply_middle(const Dist& in) {
    Dist out;
    for (const auto& [key, cnt] : in) {
      const auto& mid = middle(Ctx{std::get<0>(key), std::get<1>(key)});
      for (const auto& [mk, mc] : mid)
        out[DistKey{std::get<0>(mk), std::get<1>(mk), std::get<2>(key) + std::get<2>(mk)}] += cnt * mc;
    }
    return out;
  }

  // Kernel words of the middle length after context `in`: (out ctx, delta full) -> count.
  const Dist& middle(const Ctx& in) {
    auto mkey = std::make_pair(in.code, in.len);
    auto it = middles_.find(mkey);
    if (it != middles_.end()) return it->second;
    struct Key {
      std::int32_t node;
      std::uint64_t code;
      std::int64_t f;
      bool operator==(const Key&) const = default;
    };
    struct Hash {
      std::size_t operator()(const Key& k) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(k.node) * 0x9E3779B97F4A7C15ull;
        h ^= k.code + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(k.f) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
      }
    };
    const int len_total = c_.middle_length;
    const long lambda = c_.chi.lambda1();
    std::unordered_map<Key, double, Hash> cur, next;
    std::vector<Key> order, next_order;
    cur[{0, in.code, 0}] = 1.0;
    order.push_back({0, in.code, 0});
    int ctx_len = in.len;
    for (int m = 0; m < len_total; ++m) {
      next.clear();
      next_order.clear();
      int new_len = ctx_len;
      for (const Key& st : order) {
        double w = cur[st];
        for (std::uint64_t a = 0; a < tools_.q(); ++a) {
          Ctx c{st.code, ctx_len};
          std::int64_t f = st.f;
          if (!tools_.append(c, static_cast<Symbol>(a), f)) continue;
          std::int32_t nn = trie_.step_symbol(st.node, static_cast<Symbol>(a), c_.chi);
          if (trie_.depth(nn) > lambda * (len_total - m - 1)) continue;
          new_len = c.len;
          Key nk{nn, c.code, f};
          auto [pos, fresh] = next.try_emplace(nk, 0.0);
          if (fresh) next_order.push_back(nk);
          pos->second += w;
        }
      }
      if (next.size() > options_.limits.max_states)
        throw ResourceError("middle segment state cap exceeded");
      ctx_len = new_len;
      std::swap(cur, next);
      std::swap(order, next_order);
    }
    Dist out;
    for (const Key& st : order)
      if (st.node == 0) out[DistKey{st.code, ctx_len, st.f}] += cur[st];
    return middles_.emplace(mkey, std::move(out)).first->second;
  }

  const EscapeConstruction& c_;
  ContextTools tools_;
  EscapeOptions options_;
  detail::CayleyTrie trie_;
  std::vector<Word> connectors_;
  std::map<std::tuple<Word, Symbol, std::uint64_t, int>, std::vector<SummaryEntry>> summaries_;
  std::map<std::pair<std::uint64_t, int>, Dist> middles_;
};

}  // namespace

const Word& EscapeConstruction::tau_for(int letter) const { return tau.at(detail::letter_index(letter)); }

EscapeConstruction build_escape_construction(const SftSystem& system, const Projection& chi,
                                             const BoundaryPoint& x, double p, const EscapeOptions& options) {
  check_compatible(system, chi);
  if (!(p > 0)) throw InputError("p", "must be positive");
  if (x.head().max_generator() > chi.rank() || x.cycle().max_generator() > chi.rank())
    throw InputError("boundary_point", "uses a generator beyond the rank");

  TransitivitySearch search = verify_kernel_transitivity(system, chi, options.connector_search_depth);
  if (!search.conclusive())
    throw InconclusiveError("kernel transitivity not witnessed up to length " +
                            std::to_string(options.connector_search_depth));

  EscapeConstruction c{system, chi, x, p, {}, {}, 0, 0, {}, 0, 0, 0, 0};
  // One word per generator letter, pairwise prefix-incomparable.
  for (int i = 1; i <= chi.rank(); ++i) {
    for (bool inv : {false, true}) {
      GroupElement e = GroupElement::generator(i, inv);
      std::optional<Word> found;
      for_each_fiber_word(system, chi, e, 1, options.tau_search_depth, std::nullopt, std::nullopt,
                          [&](const Word& w) {
                            for (const Word& t : c.tau)
                              if (prefix_related(t, w)) return true;
                            found = w;
                            return false;
                          });
      if (!found)
        throw InconclusiveError("no prefix-free word with image " + e.to_string() + " up to length " +
                                std::to_string(options.tau_search_depth));
      c.tau.push_back(*found);
    }
  }
  c.connectors = build_disjoint_transitive_set(system, chi, *search.certificate, options.m_cap);

  int max_tau = 0;
  for (const Word& t : c.tau) max_tau = std::max(max_tau, static_cast<int>(t.size()));
  const int max_rho = c.connectors.max_length();
  c.threshold = p * system.sup_norm() * (max_tau + 2 * max_rho) + 3 * p * system.distortion();

  for (int len = 1; len <= options.length_cap; ++len) {
    SeriesProfile prof;
    try {
      prof = truncated_series(system, chi, GroupElement{}, p, len, options.limits);
    } catch (const ResourceError& e) {
      throw InconclusiveError(std::string("middle length search stopped at length ") + std::to_string(len) +
                              ": " + e.what());
    }
    double a = prof.level_sums[len];
    double la = a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    c.trials.emplace_back(len, la);
    if (la > c.threshold) {
      c.middle_length = len;
      c.log_middle_mass = la;
      c.margin = la - c.threshold;
      break;
    }
  }
  if (c.middle_length == 0)
    throw InconclusiveError("middle level sums stay below the threshold " + std::to_string(c.threshold) +
                            " up to length " + std::to_string(options.length_cap));
  c.max_block_length = max_tau + 2 * max_rho + c.middle_length;
  c.deviation_bound = chi.lambda1() * c.max_block_length;
  return c;
}

MeasureTree build_measure_tree(const EscapeConstruction& construction, int depth, const EscapeOptions& options) {
  if (depth < 1) throw InputError("depth", "must be at least 1");
  BlockComposer composer(construction, options);
  const ContextTools& tools = composer.tools();
  const double p = construction.p;
  const double quantum = tools.quantum();
  MeasureTree tree;
  tree.p = p;
  tree.min_block_log_mass = std::numeric_limits<double>::infinity();

  std::vector<NodeClass> parents{NodeClass{0, 0, 0, 0.0, 1.0, 0.0, 0.0}};
  for (int d = 1; d <= depth; ++d) {
    TreeLevel level;
    level.depth = d;
    std::map<std::tuple<std::uint64_t, int, std::int64_t, double>, double> merged;
    std::map<std::pair<std::uint64_t, int>, double> normalizers;
    for (const NodeClass& parent : parents) {
      Ctx pctx{parent.ctx, parent.ctx_len};
      const auto& entries = composer.summary(d - 1, pctx);
      if (entries.empty()) throw Error("block set is empty after context " + std::to_string(parent.ctx));
      auto nkey = std::make_pair(parent.ctx, parent.ctx_len);
      auto nit = normalizers.find(nkey);
      if (nit == normalizers.end()) {
        std::vector<double> logs;
        for (const auto& e : entries) {
          double rel = e.delta_full * quantum + tools.tail(e.ctx);
          logs.push_back(std::log(e.count) - p * rel);
        }
        double log_y = log_sum_exp(logs);
        // Each node's children must carry exactly its mass.
        double s = 0;
        for (double l : logs) s += std::exp(l - log_y);
        level.consistency_error = std::max(level.consistency_error, std::abs(s - 1));
        nit = normalizers.emplace(nkey, log_y).first;
      }
      const double log_y = nit->second;
      const double child_log_ratio = parent.log_ratio - p * tools.tail(pctx) - log_y;
      for (const auto& e : entries)
        merged[std::make_tuple(e.ctx.code, e.ctx.len, parent.full_q + e.delta_full, child_log_ratio)] +=
            parent.count * e.count;
    }
    if (merged.size() > options.max_classes)
      throw ResourceError("measure tree exceeds " + std::to_string(options.max_classes) + " classes at depth " +
                          std::to_string(d));
    std::vector<std::pair<double, double>> dims;  // (local dimension, count)
    level.mass_ratio = 0;
    level.min_local_dimension = std::numeric_limits<double>::infinity();
    for (const auto& [key, count] : merged) {
      NodeClass cl;
      cl.ctx = std::get<0>(key);
      cl.ctx_len = std::get<1>(key);
      cl.full_q = std::get<2>(key);
      cl.log_ratio = std::get<3>(key);
      cl.count = count;
      cl.birkhoff = cl.full_q * quantum + tools.tail(Ctx{cl.ctx, cl.ctx_len});
      cl.log_mass = cl.log_ratio - p * cl.birkhoff;
      level.node_count += count;
      level.total_mass += count * std::exp(cl.log_mass);
      level.mass_ratio = std::max(level.mass_ratio, std::exp(cl.log_ratio));
      double ld = -cl.log_mass / cl.birkhoff;
      level.min_local_dimension = std::min(level.min_local_dimension, ld);
      dims.emplace_back(ld, count);
      level.classes.push_back(cl);
    }
    std::sort(dims.begin(), dims.end());
    double half = level.node_count / 2, acc = 0;
    for (const auto& [ld, cnt] : dims) {
      acc += cnt;
      if (acc >= half) {
        level.median_local_dimension = ld;
        break;
      }
    }
    parents = level.classes;
    tree.levels.push_back(std::move(level));
  }
  // Each block set on its own, with no preceding context.
  for (int k = 0; k < depth; ++k) {
    std::vector<double> logs;
    for (const auto& e : composer.summary(k, Ctx{})) logs.push_back(std::log(e.count) - p * (e.delta_full * quantum + tools.tail(e.ctx)));
    tree.min_block_log_mass = std::min(tree.min_block_log_mass, log_sum_exp(logs));
  }
  return tree;
}

std::vector<double> mass_ratio_profile(const MeasureTree& tree) {
  std::vector<double> out;
  for (const auto& l : tree.levels) out.push_back(l.mass_ratio);
  return out;
}

std::vector<LocalDimensionStats> local_dimension_estimates(const MeasureTree& tree) {
  std::vector<LocalDimensionStats> out;
  for (const auto& l : tree.levels)
    out.push_back({l.depth, l.min_local_dimension, l.median_local_dimension, l.node_count});
  return out;
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
std::size_t pick_weighted(const std::vector<T>& weights, std::mt19937_64& rng) {
  double total = 0;
  for (const auto& w : weights) total += static_cast<double>(w);
  double r = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= static_cast<double>(weights[i]);
    if (r < 0) return i;
  }
  return weights.size() - 1;
}

// Uniform sampler for kernel words of a fixed length after a given symbol.
class KernelSampler {
 public:
  KernelSampler(const SftSystem& system, const Projection& chi, int length, const EngineLimits& limits)
      : system_(system), chi_(chi), length_(length), trie_(chi.rank(), system.size(), {}, limits.max_nodes) {}

  Word sample(Symbol before, std::mt19937_64& rng) {
    auto& layers = layers_for(before);
    const std::uint64_t q = system_.size();
    std::vector<std::uint64_t> finals;
    std::vector<double> weights;
    for (const auto& [key, cnt] : layers.back())
      if (key / q == 0) finals.push_back(key), weights.push_back(cnt);
    if (finals.empty()) throw InconclusiveError("no kernel word of the middle length after this symbol");
    std::uint64_t state = finals[pick_weighted(weights, rng)];
    Word w(length_);
    for (int m = length_; m >= 1; --m) {
      Symbol c = static_cast<Symbol>(state % q);
      std::int32_t node = static_cast<std::int32_t>(state / q);
      w[m - 1] = c;
      if (m == 1) break;
      std::int32_t pn = trie_.step_element(node, inverse(chi_.image(c)));
      std::vector<std::uint64_t> cands;
      std::vector<double> cw;
      for (std::uint64_t b = 0; b < q; ++b) {
        if (!system_.allowed(static_cast<Symbol>(b), c)) continue;
        auto it = layers[m - 1].find(static_cast<std::uint64_t>(pn) * q + b);
        if (it != layers[m - 1].end()) cands.push_back(it->first), cw.push_back(it->second);
      }
      state = cands[pick_weighted(cw, rng)];
    }
    return w;
  }

 private:
  std::vector<std::map<std::uint64_t, double>>& layers_for(Symbol before) {
    auto it = cache_.find(before);
    if (it != cache_.end()) return it->second;
    const std::uint64_t q = system_.size();
    const long lambda = chi_.lambda1();
    std::vector<std::map<std::uint64_t, double>> layers(length_ + 1);
    for (std::uint64_t a = 0; a < q; ++a) {
      if (!system_.allowed(before, static_cast<Symbol>(a))) continue;
      std::int32_t nn = trie_.step_symbol(0, static_cast<Symbol>(a), chi_);
      if (trie_.depth(nn) > lambda * (length_ - 1)) continue;
      layers[1][static_cast<std::uint64_t>(nn) * q + a] += 1.0;
    }
    for (int m = 1; m < length_; ++m) {
      for (const auto& [key, cnt] : layers[m]) {
        std::int32_t node = static_cast<std::int32_t>(key / q);
        Symbol c = static_cast<Symbol>(key % q);
        for (std::uint64_t a = 0; a < q; ++a) {
          if (!system_.allowed(c, static_cast<Symbol>(a))) continue;
          std::int32_t nn = trie_.step_symbol(node, static_cast<Symbol>(a), chi_);
          if (trie_.depth(nn) > lambda * (length_ - m - 1)) continue;
          layers[m + 1][static_cast<std::uint64_t>(nn) * q + a] += cnt;
        }
      }
    }
    return cache_.emplace(before, std::move(layers)).first->second;
  }

  const SftSystem& system_;
  const Projection& chi_;
  int length_;
  detail::CayleyTrie trie_;
  std::map<Symbol, std::vector<std::map<std::uint64_t, double>>> cache_;
};

}  // namespace

namespace {

// log mu and S of a node, following the recursion used by build_measure_tree.
std::pair<double, double> path_mass(BlockComposer& composer, const EscapeConstruction& c,
                                    const std::vector<Word>& blocks) {
  const ContextTools& tools = composer.tools();
  const double p = c.p;
  Ctx ctx{};
  std::int64_t full = 0;
  double log_ratio = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    std::vector<double> logs;
    for (const auto& e : composer.summary(static_cast<int>(k), ctx))
      logs.push_back(std::log(e.count) - p * (e.delta_full * tools.quantum() + tools.tail(e.ctx)));
    log_ratio = log_ratio - p * tools.tail(ctx) - log_sum_exp(logs);
    if (!tools.append(ctx, blocks[k], full)) throw InputError("blocks", "block " + std::to_string(k) + " does not join");
  }
  const double s = full * tools.quantum() + tools.tail(ctx);
  return {log_ratio - p * s, s};
}

}  // namespace

std::vector<SupportSample> sample_support(const EscapeConstruction& c, int depth, int count, std::uint64_t seed,
                                          const EscapeOptions& options) {
  std::mt19937_64 rng(seed);
  KernelSampler sampler(c.system, c.chi, c.middle_length, options.limits);
  BlockComposer composer(c, options);
  const std::vector<Word> connectors = c.connectors.flat();
  std::vector<SupportSample> out;
  for (int i = 0; i < count; ++i) {
    SupportSample sample;
    Word& w = sample.word;
    for (int k = 0; k < depth; ++k) {
      const Word& tau = c.tau_for(c.x.letter(k));
      const Symbol next_first = c.tau_for(c.x.letter(k + 1)).front();
      if (!w.empty() && !c.system.allowed(w.back(), tau.front()))
        throw Error("consecutive blocks do not join");
      Word block = tau;
      bool done = false;
      for (int attempt = 0; attempt < 1000 && !done; ++attempt) {
        std::vector<std::size_t> opening;
        for (std::size_t j = 0; j < connectors.size(); ++j)
          if (c.system.allowed(block.back(), connectors[j].front())) opening.push_back(j);
        if (opening.empty()) throw Error("no connector follows tau");
        const Word& rho = connectors[opening[rng() % opening.size()]];
        Word mid = sampler.sample(rho.back(), rng);
        std::vector<std::size_t> closing;
        for (std::size_t j = 0; j < connectors.size(); ++j)
          if (c.system.allowed(mid.back(), connectors[j].front()) &&
              c.system.allowed(connectors[j].back(), next_first))
            closing.push_back(j);
        if (closing.empty()) continue;
        const Word& rho2 = connectors[closing[rng() % closing.size()]];
        block.insert(block.end(), rho.begin(), rho.end());
        block.insert(block.end(), mid.begin(), mid.end());
        block.insert(block.end(), rho2.begin(), rho2.end());
        done = true;
      }
      if (!done) throw InconclusiveError("support sampling failed to close a block");
      w.insert(w.end(), block.begin(), block.end());
      sample.blocks.push_back(std::move(block));
    }
    std::tie(sample.log_mass, sample.birkhoff) = path_mass(composer, c, sample.blocks);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<Word> sample_support_words(const EscapeConstruction& c, int depth, int count, std::uint64_t seed,
                                       const EscapeOptions& options) {
  std::vector<Word> out;
  for (auto& s : sample_support(c, depth, count, seed, options)) out.push_back(std::move(s.word));
  return out;
}

double node_log_mass(const EscapeConstruction& c, const std::vector<Word>& blocks, const EscapeOptions& options) {
  BlockComposer composer(c, options);
  return path_mass(composer, c, blocks).first;
}

TrajectoryProfile classify_trajectory(const SftSystem& system, const Projection& chi, std::span<const Symbol> word,
                                      const BoundaryPoint& x) {
  check_compatible(system, chi);
  if (!is_admissible(system, word)) throw InputError("word", "not admissible: " + system.format(word));
  TrajectoryProfile prof;
  GroupElement g;
  for (Symbol s : word) {
    for (int l : chi.image(s).letters()) g.push_letter(l);
    int len = static_cast<int>(g.length());
    int ov = static_cast<int>(common_prefix_length(g, x));
    prof.length.push_back(len);
    prof.overlap.push_back(ov);
    prof.deviation.push_back(len - ov);
    prof.max_deviation = std::max(prof.max_deviation, len - ov);
  }
  return prof;
}

CoveringReport covering_sum(const SftSystem& system, const Projection& chi, const BoundaryPoint& x, int r, double p,
                            int n, int fit_lo, int fit_hi, const EngineLimits& limits) {
  if (fit_lo < 0 || fit_hi > n || fit_lo >= fit_hi) throw InputError("fit window", "need 0 <= lo < hi <= n");
  CoveringReport rep;
  rep.p = p;
  rep.r = r;
  rep.n = n;
  rep.fit_lo = fit_lo;
  rep.fit_hi = fit_hi;
  rep.level_sums = band_level_sums(system, chi, x, r, p, n, limits);
  double s = 0;
  for (double a : rep.level_sums) rep.partial_sums.push_back(s += a);
  std::vector<int> idx;
  for (int m = fit_lo; m <= fit_hi; ++m)
    if (rep.level_sums[m] > 0) idx.push_back(m);
  if (idx.size() < 2) throw NoDataError("covering sums vanish on the fit window");
  rep.slope = fit_log_slope(rep.level_sums, idx).slope;
  return rep;
}

}  // namespace skewdim
