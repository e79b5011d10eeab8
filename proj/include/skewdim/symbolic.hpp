#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skewdim {

using Symbol = std::uint16_t;
using Word = std::vector<Symbol>;

// Locally constant potential: u(xi) = table[xi_0 .. xi_{depth-1}].
// Either `table` lists every admissible window or `constant_value` is set.
struct PotentialSpec {
  int depth = 1;
  std::map<Word, double> table;
  std::optional<double> constant_value;

  static PotentialSpec constant(double value, int depth = 1);
};

// Subshift of finite type with a locally constant potential.
// Construction validates transitivity and that the potential table covers exactly the
// admissible windows with positive values.
class SftSystem {
 public:
  SftSystem(std::vector<std::string> alphabet, std::vector<std::vector<bool>> allowed,
            PotentialSpec potential);

  std::size_t size() const { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& name(Symbol s) const { return alphabet_.at(s); }
  Symbol symbol(std::string_view name) const;
  bool allowed(Symbol a, Symbol b) const { return allowed_[a * size() + b]; }
  int depth() const { return depth_; }
  // Context length kept by transfer computations: max(depth - 1, 1).
  int context_length() const { return context_length_; }

  // Potential value of an admissible window of length depth(), by base-|A| code.
  double window_value(std::uint64_t code) const { return window_[code]; }
  double window_value(std::span<const Symbol> window) const;
  // Sup over admissible continuations of the windows starting inside `context`
  // (|context| <= depth-1). Indexed by length and base-|A| code.
  double tail(int length, std::uint64_t code) const { return tail_[length][code]; }
  double tail(std::span<const Symbol> context) const;

  double sup_norm() const { return sup_norm_; }
  double min_value() const { return min_value_; }
  double distortion() const { return distortion_; }

  Word parse_word(std::string_view text) const;
  std::string format(std::span<const Symbol> word) const;
  std::uint64_t encode(std::span<const Symbol> word) const;

  // Rebuilds the system with the table multiplied by `factor`.
  SftSystem scaled(double factor) const;
  const PotentialSpec& potential() const { return potential_; }
  std::vector<std::vector<bool>> incidence() const;

 private:
  void build_tables();

  std::vector<std::string> alphabet_;
  std::vector<bool> allowed_;
  PotentialSpec potential_;
  int depth_ = 1;
  int context_length_ = 1;
  std::vector<double> window_;
  std::vector<std::vector<double>> tail_;
  double sup_norm_ = 0, min_value_ = 0, distortion_ = 0;
};

bool is_admissible(const SftSystem& system, std::span<const Symbol> word);
// Names version: unknown names raise InputError.
bool is_admissible(const SftSystem& system, std::span<const std::string> names);

// Admissible words of length n in lexicographic order, optionally pinned at either end.
std::vector<Word> enumerate_words(const SftSystem& system, int n,
                                  std::optional<Symbol> first = std::nullopt,
                                  std::optional<Symbol> last = std::nullopt);
// Streaming form; stop by returning false from the visitor.
void for_each_word(const SftSystem& system, int n, std::optional<Symbol> first,
                   std::optional<Symbol> last, const std::function<bool(const Word&)>& visit);

// Sum over complete windows of `word` (no continuation).
double full_sum(const SftSystem& system, std::span<const Symbol> word);
// sup over the cylinder [word] of the Birkhoff sum of length |word|.
double birkhoff_sup(const SftSystem& system, std::span<const Symbol> word);
double distortion_constant(const SftSystem& system);
// [exp(-S), exp(-S + V)] for S = birkhoff_sup(word).
std::pair<double, double> cylinder_diameter_bracket(const SftSystem& system,
                                                    std::span<const Symbol> word);

bool prefix_related(std::span<const Symbol> a, std::span<const Symbol> b);

}  // namespace skewdim
