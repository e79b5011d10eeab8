#include "skewdim/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "skewdim/errors.hpp"

namespace skewdim {

namespace {

constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 22;

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kMaxTableSize * 64) return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

}  // namespace

PotentialSpec PotentialSpec::constant(double value, int depth) {
  PotentialSpec p;
  p.depth = depth;
  p.constant_value = value;
  return p;
}

SftSystem::SftSystem(std::vector<std::string> alphabet, std::vector<std::vector<bool>> allowed,
                     PotentialSpec potential)
    : alphabet_(std::move(alphabet)), potential_(std::move(potential)) {
  const std::size_t n = alphabet_.size();
  if (n == 0) throw InputError("alphabet", "must be nonempty");
  if (n > 4096) throw InputError("alphabet", "too many symbols");
  std::set<std::string> seen;
  for (const auto& s : alphabet_) {
    if (s.empty()) throw InputError("alphabet", "empty symbol name");
    if (std::any_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      throw InputError("alphabet", "symbol name '" + s + "' contains whitespace");
    if (!seen.insert(s).second) throw InputError("alphabet", "duplicate symbol '" + s + "'");
  }
  if (allowed.size() != n) throw InputError("incidence", "matrix size does not match alphabet");
  allowed_.assign(n * n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (allowed[a].size() != n) throw InputError("incidence", "matrix is not square");
    for (std::size_t b = 0; b < n; ++b) allowed_[a * n + b] = allowed[a][b];
  }
  // Transitivity: every symbol reaches every symbol by a path of positive length.
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> reached(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t b = 0; b < n; ++b)
      if (allowed_[a * n + b] && !reached[b]) reached[b] = true, stack.push_back(b);
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < n; ++b)
        if (allowed_[c * n + b] && !reached[b]) reached[b] = true, stack.push_back(b);
    }
    for (std::size_t b = 0; b < n; ++b)
      if (!reached[b])
        throw InputError("incidence", "not transitive: no admissible path from '" + alphabet_[a] +
                                          "' to '" + alphabet_[b] + "'");
  }
  build_tables();
}

Symbol SftSystem::symbol(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<Symbol>(i);
  throw InputError("symbol", "unknown symbol '" + std::string(name) + "'");
}

std::uint64_t SftSystem::encode(std::span<const Symbol> word) const {
  std::uint64_t code = 0;
  for (Symbol s : word) code = code * size() + s;
  return code;
}

double SftSystem::window_value(std::span<const Symbol> window) const {
  if (static_cast<int>(window.size()) != depth_) throw InputError("window", "wrong length");
  return window_[encode(window)];
}

double SftSystem::tail(std::span<const Symbol> context) const {
  if (static_cast<int>(context.size()) > depth_ - 1) context = context.last(depth_ - 1);
  return tail_[context.size()][encode(context)];
}

void SftSystem::build_tables() {
  const std::size_t n = size();
  const int k = potential_.depth;
  if (k < 1) throw InputError("potential.depth", "must be at least 1");
  const std::uint64_t table_size = ipow(n, k);
  if (table_size > kMaxTableSize) throw InputError("potential.depth", "window table too large");
  depth_ = k;
  context_length_ = std::max(k - 1, 1);
  if (ipow(n, context_length_) > kMaxTableSize)
    throw InputError("potential.depth", "context table too large");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  window_.assign(table_size, nan);
  std::vector<Word> windows = enumerate_words(*this, k);
  if (potential_.constant_value) {
    if (!(*potential_.constant_value > 0))
      throw InputError("potential", "values must be positive");
    for (const Word& w : windows) window_[encode(w)] = *potential_.constant_value;
  } else {
    for (const auto& [w, v] : potential_.table) {
      std::string label = "potential.entries[" + format(w) + "]";
      if (static_cast<int>(w.size()) != k) throw InputError(label, "window length differs from depth");
      for (Symbol s : w)
        if (s >= n) throw InputError(label, "symbol out of range");
      if (!is_admissible(*this, w)) throw InputError(label, "window is not admissible");
      if (!(v > 0) || !std::isfinite(v)) throw InputError(label, "value must be positive and finite");
      window_[encode(w)] = v;
    }
    for (const Word& w : windows)
      if (std::isnan(window_[encode(w)]))
        throw InputError("potential.entries", "missing admissible window '" + format(w) + "'");
  }
  sup_norm_ = 0;
  min_value_ = std::numeric_limits<double>::infinity();
  for (const Word& w : windows) {
    double v = window_[encode(w)];
    sup_norm_ = std::max(sup_norm_, v);
    min_value_ = std::min(min_value_, v);
  }

  // Tail sups and the distortion constant: windows starting inside a context of length L,
  // ranging over admissible continuations of length k-1.
  tail_.assign(k, {});
  distortion_ = 0;
  tail_[0].assign(1, 0.0);
  for (int len = 1; len <= k - 1; ++len) {
    tail_[len].assign(ipow(n, len), nan);
    for (const Word& ctx : enumerate_words(*this, len)) {
      double hi = -std::numeric_limits<double>::infinity();
      double lo = std::numeric_limits<double>::infinity();
      Word buf = ctx;
      buf.resize(len + k - 1);
      std::function<void(int)> extend = [&](int pos) {
        if (pos == len + k - 1) {
          double s = 0;
          for (int j = 0; j < len; ++j) s += window_[encode(std::span<const Symbol>(buf).subspan(j, k))];
          hi = std::max(hi, s);
          lo = std::min(lo, s);
          return;
        }
        for (std::size_t b = 0; b < n; ++b) {
          if (!allowed(buf[pos - 1], static_cast<Symbol>(b))) continue;
          buf[pos] = static_cast<Symbol>(b);
          extend(pos + 1);
        }
      };
      extend(len);
      tail_[len][encode(ctx)] = hi;
      distortion_ = std::max(distortion_, hi - lo);
    }
  }
}

Word SftSystem::parse_word(std::string_view text) const {
  Word out;
  bool single_char = std::all_of(alphabet_.begin(), alphabet_.end(),
                                 [](const std::string& s) { return s.size() == 1; });
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view token = text.substr(i, j - i);
    bool known = std::find(alphabet_.begin(), alphabet_.end(), token) != alphabet_.end();
    if (known) {
      out.push_back(symbol(token));
    } else if (single_char) {
      for (char c : token) out.push_back(symbol(std::string_view(&c, 1)));
    } else {
      throw InputError("word", "unknown symbol '" + std::string(token) + "'");
    }
    i = j;
  }
  return out;
}

std::string SftSystem::format(std::span<const Symbol> word) const {
  bool single_char = std::all_of(alphabet_.begin(), alphabet_.end(),
                                 [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i && !single_char) out += ' ';
    out += word[i] < size() ? alphabet_[word[i]] : "?";
  }
  return out;
}

SftSystem SftSystem::scaled(double factor) const {
  PotentialSpec p = potential_;
  if (p.constant_value) *p.constant_value *= factor;
  for (auto& [w, v] : p.table) v *= factor;
  return SftSystem(alphabet_, incidence(), p);
}

std::vector<std::vector<bool>> SftSystem::incidence() const {
  std::vector<std::vector<bool>> m(size(), std::vector<bool>(size()));
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) m[a][b] = allowed_[a * size() + b];
  return m;
}

bool is_admissible(const SftSystem& system, std::span<const Symbol> word) {
  for (Symbol s : word)
    if (s >= system.size()) return false;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (!system.allowed(word[i], word[i + 1])) return false;
  return true;
}

bool is_admissible(const SftSystem& system, std::span<const std::string> names) {
  Word w;
  for (const auto& n : names) w.push_back(system.symbol(n));
  return is_admissible(system, w);
}

void for_each_word(const SftSystem& system, int n, std::optional<Symbol> first,
                   std::optional<Symbol> last, const std::function<bool(const Word&)>& visit) {
  if (n < 0) throw InputError("length", "must be nonnegative");
  if (n == 0) {
    if (!first && !last) visit(Word{});
    return;
  }
  const std::size_t q = system.size();
  Word w(n);
  bool stop = false;
  std::function<void(int)> rec = [&](int pos) {
    if (stop) return;
    if (pos == n) {
      if (!last || w[n - 1] == *last) stop = !visit(w);
      return;
    }
    for (std::size_t s = 0; s < q && !stop; ++s) {
      Symbol sym = static_cast<Symbol>(s);
      if (pos == 0 && first && sym != *first) continue;
      if (pos > 0 && !system.allowed(w[pos - 1], sym)) continue;
      if (pos == n - 1 && last && sym != *last) continue;
      w[pos] = sym;
      rec(pos + 1);
    }
  };
  rec(0);
}

std::vector<Word> enumerate_words(const SftSystem& system, int n, std::optional<Symbol> first,
                                  std::optional<Symbol> last) {
  std::vector<Word> out;
  for_each_word(system, n, first, last, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

double full_sum(const SftSystem& system, std::span<const Symbol> word) {
  const int k = system.depth();
  double s = 0;
  for (int j = 0; j + k <= static_cast<int>(word.size()); ++j)
    s += system.window_value(system.encode(word.subspan(j, k)));
  return s;
}

double birkhoff_sup(const SftSystem& system, std::span<const Symbol> word) {
  if (!is_admissible(system, word)) throw InputError("word", "not admissible: " + system.format(word));
  if (word.empty()) return 0.0;
  return full_sum(system, word) + system.tail(word);
}

double distortion_constant(const SftSystem& system) { return system.distortion(); }

std::pair<double, double> cylinder_diameter_bracket(const SftSystem& system,
                                                    std::span<const Symbol> word) {
  double s = birkhoff_sup(system, word);
  return {std::exp(-s), std::exp(-s + system.distortion())};
}

bool prefix_related(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::size_t n = std::min(a.size(), b.size());
  return std::equal(a.begin(), a.begin() + n, b.begin());
}

}  // namespace skewdim
