#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewdim/freegroup.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

// Symbol images in a free group of the given rank; extends to words by concatenation.
class Projection {
 public:
  Projection(int rank, std::vector<GroupElement> images);

  int rank() const { return rank_; }
  std::size_t size() const { return images_.size(); }
  const GroupElement& image(Symbol s) const { return images_.at(s); }
  // Largest image length.
  int lambda1() const { return lambda1_; }

 private:
  int rank_;
  std::vector<GroupElement> images_;
  int lambda1_ = 0;
};

// Checks that `chi` has one image per symbol.
void check_compatible(const SftSystem& system, const Projection& chi);
GroupElement project(const SftSystem& system, const Projection& chi, std::span<const Symbol> word);

// Reversal composed with a symbol relabelling.
class Involution {
 public:
  explicit Involution(std::vector<Symbol> relabel);
  Symbol operator()(Symbol s) const { return relabel_.at(s); }
  Word apply(std::span<const Symbol> word) const;
  const std::vector<Symbol>& relabel() const { return relabel_; }

 private:
  std::vector<Symbol> relabel_;
};

// connectors[a][b] = rho with chi(rho) = 1 and a rho b admissible; every rho is nonempty.
struct TransitivityCertificate {
  std::vector<std::vector<Word>> connectors;
  int max_length = 0;

  const Word& connector(Symbol a, Symbol b) const { return connectors.at(a).at(b); }
};

struct TransitivitySearch {
  std::optional<TransitivityCertificate> certificate;
  // Pairs with no connector of length <= max_depth.
  std::vector<std::pair<Symbol, Symbol>> missing;
  bool conclusive() const { return certificate.has_value(); }
};

// Shortest, then lexicographically smallest, nonempty kernel connector per ordered pair.
TransitivitySearch verify_kernel_transitivity(const SftSystem& system, const Projection& chi,
                                              int max_depth);

// Whether the images generate every e_i within `radius` products. Missing generators listed.
struct GenerationCheck {
  bool witnessed = false;
  std::vector<int> missing;
};
GenerationCheck check_generation(const Projection& chi, int radius);

// tau(h): shortlex-smallest admissible word with chi(tau) = h, for every |h| <= radius.
// tau(1) is the empty word.
struct RepresentativeTable {
  int radius = 0;
  std::map<GroupElement, Word> words;
  int max_length = 0;
};
RepresentativeTable build_representatives(const SftSystem& system, const Projection& chi,
                                          int radius, int max_word_length);

// Extends omega' to omega = omega' rho tau with chi(omega) = g. rho is empty when the junction
// is already admissible, otherwise a connector from the certificate.
Word extend_to_coset(const SftSystem& system, const Projection& chi,
                     const TransitivityCertificate& certificate, const RepresentativeTable& reps,
                     std::span<const Symbol> prefix, const GroupElement& target);
// Bound on |omega| - |omega'| for targets within `radius` of chi(omega').
int extension_length_bound(const TransitivityCertificate& certificate,
                           const RepresentativeTable& reps);

// Explicit lower bound on the restricted critical exponent and its witnesses.
struct DeltaLowerBound {
  double bound = 0;
  double growth_exponent = 0;  // log(2n - 1)
  int l_chi = 0;
  double sup_norm = 0;
  int max_tau_length = 0;
  std::vector<Symbol> witness_symbols;
  std::vector<Word> tau;  // a rho(a) a with chi(rho(a)) = chi(a)^{-2}, one per symbol
};
DeltaLowerBound constructive_delta_lower_bound(const SftSystem& system, const Projection& chi,
                                               int search_depth);

// Kernel words, one per ordered pair, pairwise prefix-incomparable.
struct DisjointTransitiveSet {
  std::vector<std::vector<Word>> words;  // words[a][b]
  int m = 0;
  int l0 = 0;
  double threshold = 0;
  std::vector<double> pool_sizes;  // min over pairs of the candidate pool, per tried m
  int max_length() const;
  std::vector<Word> flat() const;
};
DisjointTransitiveSet build_disjoint_transitive_set(const SftSystem& system, const Projection& chi,
                                                    const TransitivityCertificate& certificate,
                                                    int m_cap);

// Largest |S(w) - S(w^dagger)| per word length, after checking dagger is an admissible
// anti-automorphism compatible with chi(w^dagger) = chi(w)^{-1}.
struct SymmetryReport {
  std::vector<double> max_gap;  // index = length
  std::vector<std::string> witness;
  bool stabilizes = false;
};
SymmetryReport check_symmetry(const SftSystem& system, const Projection& chi,
                              const Involution& dagger, int depth);

// Lexicographically ordered kernel-fiber search: admissible words of length in [min_len, max_len]
// with chi(w) = target, optionally preceded by `before` and followed by `after`. Shortlex order.
// The visitor returns false to stop.
void for_each_fiber_word(const SftSystem& system, const Projection& chi, const GroupElement& target,
                         int min_len, int max_len, std::optional<Symbol> before,
                         std::optional<Symbol> after,
                         const std::function<bool(const Word&)>& visit);

}  // namespace skewdim
