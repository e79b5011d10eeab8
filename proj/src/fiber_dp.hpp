// Transfer computation over (context, group element) states shared by the series,
// counting, covering and pool-size computations.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "skewdim/errors.hpp"
#include "skewdim/extension.hpp"
#include "skewdim/freegroup.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim::detail {

inline int letter_index(int letter) { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }
inline int index_letter(int idx) { return (idx % 2 ? -1 : 1) * (idx / 2 + 1); }

// Reduced words of a free group, created on demand. Node 0 is the identity.
// Each node records its depth and common-prefix length with a fixed reference word.
class CayleyTrie {
 public:
  CayleyTrie(int rank, std::size_t num_symbols, std::vector<int> reference,
             std::size_t max_nodes = 60'000'000)
      : rank_(rank), num_symbols_(num_symbols), reference_(std::move(reference)), max_nodes_(max_nodes) {
    nodes_.push_back({-1, -1, 0, 0});
    child_.assign(2 * rank_, -1);
    symbol_cache_.assign(num_symbols_, -1);
  }

  std::int32_t size() const { return static_cast<std::int32_t>(nodes_.size()); }
  int depth(std::int32_t v) const { return nodes_[v].depth; }
  int lcp(std::int32_t v) const { return nodes_[v].lcp; }
  const std::vector<int>& reference() const { return reference_; }

  std::int32_t step_letter(std::int32_t v, int letter) {
    const int idx = letter_index(letter);
    if (v != 0 && nodes_[v].letter_idx == (idx ^ 1)) return nodes_[v].parent;
    std::int32_t& slot = child_[static_cast<std::size_t>(v) * 2 * rank_ + idx];
    if (slot >= 0) return slot;
    if (nodes_.size() >= max_nodes_)
      throw ResourceError("group element cache exceeded " + std::to_string(max_nodes_) + " nodes");
    const Node& p = nodes_[v];
    Node c{v, static_cast<std::int16_t>(idx), static_cast<std::uint16_t>(p.depth + 1), p.lcp};
    if (p.lcp == p.depth && p.depth < reference_.size() && reference_[p.depth] == letter) ++c.lcp;
    std::int32_t id = size();
    nodes_.push_back(c);
    child_.resize(child_.size() + 2 * rank_, -1);
    symbol_cache_.resize(symbol_cache_.size() + num_symbols_, -1);
    child_[static_cast<std::size_t>(v) * 2 * rank_ + idx] = id;
    return id;
  }

  std::int32_t step_element(std::int32_t v, const GroupElement& g) {
    for (int l : g.letters()) v = step_letter(v, l);
    return v;
  }

  std::int32_t step_symbol(std::int32_t v, Symbol s, const Projection& chi) {
    std::int32_t cached = symbol_cache_[static_cast<std::size_t>(v) * num_symbols_ + s];
    if (cached >= 0) return cached;
    std::int32_t w = step_element(v, chi.image(s));
    symbol_cache_[static_cast<std::size_t>(v) * num_symbols_ + s] = w;
    return w;
  }

  GroupElement element(std::int32_t v) const {
    std::vector<int> letters(nodes_[v].depth);
    for (std::int32_t u = v; u != 0; u = nodes_[u].parent)
      letters[nodes_[u].depth - 1] = index_letter(nodes_[u].letter_idx);
    return GroupElement::from_letters(letters);
  }

 private:
  struct Node {
    std::int32_t parent;
    std::int16_t letter_idx;
    std::uint16_t depth;
    std::uint16_t lcp;
  };
  int rank_;
  std::size_t num_symbols_;
  std::vector<int> reference_;
  std::size_t max_nodes_;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> child_;
  std::vector<std::int32_t> symbol_cache_;
};

// Open addressing map from 64-bit keys to additive values. Iteration order depends only on
// the insertion sequence, which keeps results bitwise reproducible.
template <class V>
class FlatMap {
 public:
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

  explicit FlatMap(std::size_t capacity = 1024) { reset(capacity); }

  void reset(std::size_t capacity) {
    std::size_t c = 16;
    while (c < 2 * capacity) c <<= 1;
    keys_.assign(c, kEmpty);
    vals_.assign(c, V{});
    order_.clear();
    mask_ = c - 1;
  }
  void clear() {
    for (std::size_t slot : order_) keys_[slot] = kEmpty, vals_[slot] = V{};
    order_.clear();
  }
  std::size_t size() const { return order_.size(); }

  void add(std::uint64_t key, V value) {
    if (2 * (order_.size() + 1) > keys_.size()) grow();
    std::size_t slot = probe(key);
    if (keys_[slot] == kEmpty) {
      keys_[slot] = key;
      vals_[slot] = value;
      order_.push_back(slot);
    } else if constexpr (std::is_integral_v<V>) {
      V sum;
      vals_[slot] = __builtin_add_overflow(vals_[slot], value, &sum) ? std::numeric_limits<V>::max() : sum;
    } else {
      vals_[slot] += value;
    }
  }

  // Visits entries in insertion order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t slot : order_) f(keys_[slot], vals_[slot]);
  }

 private:
  std::size_t probe(std::uint64_t key) const {
    std::size_t slot = (key * 0x9E3779B97F4A7C15ull >> 17) & mask_;
    while (keys_[slot] != kEmpty && keys_[slot] != key) slot = (slot + 1) & mask_;
    return slot;
  }
  void grow() {
    std::vector<std::uint64_t> keys;
    std::vector<V> vals;
    std::vector<std::size_t> order;
    keys.swap(keys_);
    vals.swap(vals_);
    order.swap(order_);
    reset(keys.size());
    for (std::size_t slot : order) add(keys[slot], vals[slot]);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<V> vals_;
  std::vector<std::size_t> order_;
  std::size_t mask_ = 0;
};

// Same interface as FlatMap, backed by an array indexed by key. Used when keys are dense.
template <class V>
class DenseMap {
 public:
  std::size_t size() const { return order_.size(); }
  void clear() {
    for (std::uint64_t key : order_) used_[key] = 0, vals_[key] = V{};
    order_.clear();
  }
  void add(std::uint64_t key, V value) {
    if (key >= vals_.size()) {
      std::size_t c = std::max<std::size_t>(1024, vals_.size());
      while (c <= key) c *= 2;
      vals_.resize(c, V{});
      used_.resize(c, 0);
    }
    if (!used_[key]) {
      used_[key] = 1;
      vals_[key] = value;
      order_.push_back(key);
    } else if constexpr (std::is_integral_v<V>) {
      V sum;
      vals_[key] = __builtin_add_overflow(vals_[key], value, &sum) ? std::numeric_limits<V>::max() : sum;
    } else {
      vals_[key] += value;
    }
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t key : order_) f(key, vals_[key]);
  }

 private:
  std::vector<V> vals_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint64_t> order_;
};

struct DpSetup {
  double p = 0;          // weight exponent; ignored for integral weights
  int max_length = 0;    // number of symbols appended
  std::size_t max_states = 40'000'000;
  Word before;           // symbols preceding the word (constrain the first step)
  bool include_empty = true;
};

// Weighted sum over admissible words w, |w| <= max_length, of exp(-p S(w)) grouped by the
// trie node of chi(w). Policy:
//   int distance(const CayleyTrie&, int32 node) const   lower bound to the target set
//   void visit(int level, int32 node, uint64 ctx, int ctx_len, W value)
// `value` includes the continuation sup factor exp(-p Tail) for floating weights.
// For depth-1 potentials `ctx` is a representative symbol, not necessarily the last one.
template <class W, class Policy>
void run_fiber_dp(const SftSystem& system, const Projection& chi, CayleyTrie& trie,
                  const DpSetup& setup, Policy& policy) {
  constexpr bool weighted = std::is_floating_point_v<W>;
  const std::uint64_t q = system.size();
  const int k = system.depth();
  const int s = system.context_length();
  std::uint64_t qs = 1, qk1 = 1;
  for (int i = 0; i < s; ++i) qs *= q;
  for (int i = 0; i < k - 1; ++i) qk1 *= q;
  const int lambda = chi.lambda1();

  std::vector<double> wexp, texp_full;
  std::vector<std::vector<double>> texp(k);
  if constexpr (weighted) {
    wexp.resize(qk1 * q);
    for (std::uint64_t c = 0; c < wexp.size(); ++c) {
      double u = system.window_value(c);
      wexp[c] = std::isnan(u) ? 0.0 : std::exp(-setup.p * u);
    }
    for (int len = 0; len < k; ++len) {
      std::uint64_t sz = 1;
      for (int i = 0; i < len; ++i) sz *= q;
      texp[len].resize(sz);
      for (std::uint64_t c = 0; c < sz; ++c) {
        double t = system.tail(len, c);
        texp[len][c] = std::isnan(t) ? 0.0 : std::exp(-setup.p * t);
      }
    }
  }
  auto tail_factor = [&](std::uint64_t ctx, int ctx_len) -> W {
    if constexpr (weighted) {
      int len = std::min(ctx_len, k - 1);
      std::uint64_t mod = 1;
      for (int i = 0; i < len; ++i) mod *= q;
      return texp[len][ctx % mod];
    } else {
      (void)ctx, (void)ctx_len;
      return W{1};
    }
  };

  // With depth-1 potentials the context only matters through its incidence row, so
  // symbols with equal rows share a context.
  std::vector<std::uint64_t> rep(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    rep[a] = a;
    if (k != 1) continue;
    for (std::uint64_t b = 0; b < a; ++b) {
      bool same = true;
      for (std::uint64_t c = 0; c < q && same; ++c)
        same = system.allowed(static_cast<Symbol>(a), static_cast<Symbol>(c)) ==
               system.allowed(static_cast<Symbol>(b), static_cast<Symbol>(c));
      if (same) {
        rep[a] = rep[b];
        break;
      }
    }
  }
  std::uint64_t ctx0 = 0;
  int ctx_len = 0;
  for (Symbol b : setup.before) {
    ctx0 = k == 1 ? rep[b] : (ctx_len == s ? (ctx0 * q + b) % qs : ctx0 * q + b);
    ctx_len = std::min(ctx_len + 1, s);
  }
  if (setup.include_empty && policy.distance(trie, 0) == 0)
    policy.visit(0, 0, ctx0, ctx_len, W{1} * tail_factor(ctx0, ctx_len));
  auto run = [&](auto& cur, auto& next) {
    cur.add(static_cast<std::uint64_t>(0) * qs + ctx0, W{1});

    for (int m = 0; m < setup.max_length; ++m) {
      const long budget = static_cast<long>(lambda) * (setup.max_length - m - 1);
      const bool window_complete = ctx_len >= k - 1;
      const int new_len = std::min(ctx_len + 1, s);
      next.clear();
      cur.for_each([&](std::uint64_t key, W w) {
        const std::int32_t node = static_cast<std::int32_t>(key / qs);
        const std::uint64_t ctx = key % qs;
        for (std::uint64_t a = 0; a < q; ++a) {
          if (ctx_len > 0 && !system.allowed(static_cast<Symbol>(ctx % q), static_cast<Symbol>(a))) continue;
          std::int32_t nn = trie.step_symbol(node, static_cast<Symbol>(a), chi);
          if (policy.distance(trie, nn) > budget) continue;
          std::uint64_t nctx = k == 1 ? rep[a] : (ctx_len == s ? (ctx * q + a) % qs : ctx * q + a);
          W w2 = w;
          if constexpr (weighted) {
            if (window_complete) w2 *= wexp[(ctx % qk1) * q + a];
          }
          next.add(static_cast<std::uint64_t>(nn) * qs + nctx, w2);
        }
      });
      ctx_len = new_len;
      if (next.size() > setup.max_states)
        throw ResourceError("state cap of " + std::to_string(setup.max_states) + " exceeded at length " +
                            std::to_string(m + 1));
      next.for_each([&](std::uint64_t key, W w) {
        const std::int32_t node = static_cast<std::int32_t>(key / qs);
        const std::uint64_t ctx = key % qs;
        policy.visit(m + 1, node, ctx, ctx_len, w * tail_factor(ctx, ctx_len));
      });
      std::swap(cur, next);
    }
  };
  if (qs <= 16) {
    DenseMap<W> a, b;
    run(a, b);
  } else {
    FlatMap<W> a(1024), b(1024);
    run(a, b);
  }
}

}  // namespace skewdim::detail
