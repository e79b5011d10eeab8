#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewdim/extension.hpp"
#include "skewdim/freegroup.hpp"
#include "skewdim/poincare.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

struct EscapeOptions {
  int length_cap = 24;         // longest kernel word length tried for the middle segment
  int tau_search_depth = 12;
  int connector_search_depth = 8;
  int m_cap = 12;
  std::size_t max_classes = 2'000'000;
  double quantum = 1e-12;      // resolution of stored Birkhoff sums
  EngineLimits limits;
};

// Nested block construction along a boundary point x. Block k is
//   tau(x_k) rho w rho'   with rho, rho' from the disjoint transitive set, w any kernel word of
// length `middle_length`, and rho' admissible before the first symbol of tau(x_{k+1}).
struct EscapeConstruction {
  SftSystem system;
  Projection chi;
  BoundaryPoint x;
  double p = 0;
  std::vector<Word> tau;  // per generator letter, in order e1, E1, e2, E2, ...
  DisjointTransitiveSet connectors;
  int middle_length = 0;
  double log_middle_mass = 0;  // log of the level sum at middle_length
  std::vector<std::pair<int, double>> trials;  // (length, log level sum) per length tried
  double threshold = 0;        // p |u| (max |tau| + 2 max |rho|) + 3 p V
  double margin = 0;           // log_middle_mass - threshold
  int max_block_length = 0;
  int deviation_bound = 0;     // lambda1 * max_block_length

  const Word& tau_for(int letter) const;
};

// Grows the middle length until the level sum clears the threshold. Throws InconclusiveError
// when the length cap or an engine cap is reached first.
EscapeConstruction build_escape_construction(const SftSystem& system, const Projection& chi,
                                             const BoundaryPoint& x, double p,
                                             const EscapeOptions& options = {});

// Nodes of equal context, stored Birkhoff sum and mass ratio are kept as one class.
struct NodeClass {
  std::uint64_t ctx = 0;
  int ctx_len = 0;
  std::int64_t full_q = 0;  // sum of complete windows in units of `quantum`
  double log_ratio = 0;     // log(mu / exp(-p S))
  double count = 0;         // number of nodes in the class
  double birkhoff = 0;      // S of each node
  double log_mass = 0;      // log mu of each node
};

struct TreeLevel {
  int depth = 0;  // number of blocks
  std::vector<NodeClass> classes;
  double node_count = 0;
  double total_mass = 0;
  double consistency_error = 0;  // max relative |sum children - parent| creating this level
  double mass_ratio = 0;         // max over nodes of mu / exp(-p S)
  double min_local_dimension = 0;
  double median_local_dimension = 0;
};

struct MeasureTree {
  double p = 0;
  std::vector<TreeLevel> levels;  // levels[i].depth == i + 1
  // Per block type and incoming context: log sum over blocks of exp(-p S(block)).
  double min_block_log_mass = 0;
};

MeasureTree build_measure_tree(const EscapeConstruction& construction, int depth,
                               const EscapeOptions& options = {});
std::vector<double> mass_ratio_profile(const MeasureTree& tree);

struct LocalDimensionStats {
  int depth = 0;
  double min = 0;
  double median = 0;
  double nodes = 0;
};
std::vector<LocalDimensionStats> local_dimension_estimates(const MeasureTree& tree);

// A random node of the tree: connectors drawn uniformly among those that fit, the middle word
// uniformly among kernel words of the middle length.
struct SupportSample {
  std::vector<Word> blocks;
  Word word;            // concatenation of the blocks
  double birkhoff = 0;  // S of the node, as stored in the tree
  double log_mass = 0;  // log mu of the node
};
std::vector<SupportSample> sample_support(const EscapeConstruction& construction, int depth, int count,
                                          std::uint64_t seed, const EscapeOptions& options = {});
std::vector<Word> sample_support_words(const EscapeConstruction& construction, int depth, int count,
                                       std::uint64_t seed, const EscapeOptions& options = {});
// log mu of the node spelled by consecutive blocks. Throws InputError if the blocks do not join.
double node_log_mass(const EscapeConstruction& construction, const std::vector<Word>& blocks,
                     const EscapeOptions& options = {});

struct TrajectoryProfile {
  std::vector<int> length;     // |chi(w_0..w_{m-1})|
  std::vector<int> overlap;    // |chi(...) ^ x|
  std::vector<int> deviation;  // length - overlap
  int max_deviation = 0;
};
TrajectoryProfile classify_trajectory(const SftSystem& system, const Projection& chi, std::span<const Symbol> word,
                                      const BoundaryPoint& x);

struct CoveringReport {
  double p = 0;
  int r = 0;
  int n = 0;
  std::vector<double> level_sums;  // c_m
  std::vector<double> partial_sums;
  int fit_lo = 0, fit_hi = 0;
  double slope = 0;
};
// Sums over words staying within deviation r of the ray x, with the log-slope fitted on
// [fit_lo, fit_hi].
CoveringReport covering_sum(const SftSystem& system, const Projection& chi, const BoundaryPoint& x, int r,
                            double p, int n, int fit_lo, int fit_hi, const EngineLimits& limits = {});

}  // namespace skewdim
