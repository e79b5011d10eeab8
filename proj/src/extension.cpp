#include "skewdim/extension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_set>

#include "fiber_dp.hpp"
#include "skewdim/errors.hpp"

namespace skewdim {

Projection::Projection(int rank, std::vector<GroupElement> images)
    : rank_(rank), images_(std::move(images)) {
  if (rank_ < 1) throw InputError("projection.rank", "must be positive");
  if (images_.empty()) throw InputError("projection", "no symbol images");
  for (const auto& g : images_) {
    if (g.max_generator() > rank_)
      throw InputError("projection", "image " + g.to_string() + " uses a generator beyond the rank");
    lambda1_ = std::max(lambda1_, static_cast<int>(g.length()));
  }
}

void check_compatible(const SftSystem& system, const Projection& chi) {
  if (chi.size() != system.size())
    throw InputError("projection", "expected " + std::to_string(system.size()) + " symbol images, got " +
                                       std::to_string(chi.size()));
}

GroupElement project(const SftSystem& system, const Projection& chi, std::span<const Symbol> word) {
  check_compatible(system, chi);
  if (!is_admissible(system, word)) throw InputError("word", "not admissible: " + system.format(word));
  GroupElement g;
  for (Symbol s : word)
    for (int l : chi.image(s).letters()) g.push_letter(l);
  return g;
}

Involution::Involution(std::vector<Symbol> relabel) : relabel_(std::move(relabel)) {
  std::vector<bool> hit(relabel_.size(), false);
  for (Symbol s : relabel_) {
    if (s >= relabel_.size() || hit[s]) throw InputError("involution", "relabelling is not a permutation");
    hit[s] = true;
  }
  for (std::size_t i = 0; i < relabel_.size(); ++i)
    if (relabel_[relabel_[i]] != i) throw InputError("involution", "relabelling is not an involution");
}

Word Involution::apply(std::span<const Symbol> word) const {
  Word out(word.rbegin(), word.rend());
  for (Symbol& s : out) s = relabel_.at(s);
  return out;
}

void for_each_fiber_word(const SftSystem& system, const Projection& chi, const GroupElement& target,
                         int min_len, int max_len, std::optional<Symbol> before,
                         std::optional<Symbol> after, const std::function<bool(const Word&)>& visit) {
  check_compatible(system, chi);
  const int lambda = chi.lambda1();
  const std::size_t q = system.size();
  bool stop = false;
  for (int len = std::max(min_len, 0); len <= max_len && !stop; ++len) {
    if (len == 0) {
      bool ok = target.is_identity() && !(before && after && !system.allowed(*before, *after));
      if (ok) stop = !visit(Word{});
      continue;
    }
    Word w(len);
    std::vector<GroupElement> image(len + 1);
    std::function<void(int)> rec = [&](int pos) {
      if (stop) return;
      if (pos == len) {
        if (image[len] == target && (!after || system.allowed(w[len - 1], *after))) stop = !visit(w);
        return;
      }
      for (std::size_t a = 0; a < q && !stop; ++a) {
        Symbol s = static_cast<Symbol>(a);
        if (pos == 0 ? (before && !system.allowed(*before, s)) : !system.allowed(w[pos - 1], s)) continue;
        GroupElement h = image[pos];
        for (int l : chi.image(s).letters()) h.push_letter(l);
        if (static_cast<long>(word_distance(h, target)) > static_cast<long>(lambda) * (len - pos - 1)) continue;
        w[pos] = s;
        image[pos + 1] = std::move(h);
        rec(pos + 1);
      }
    };
    rec(0);
  }
}

TransitivitySearch verify_kernel_transitivity(const SftSystem& system, const Projection& chi,
                                              int max_depth) {
  check_compatible(system, chi);
  const std::size_t q = system.size();
  TransitivitySearch result;
  TransitivityCertificate cert;
  cert.connectors.assign(q, std::vector<Word>(q));
  for (std::size_t a = 0; a < q; ++a) {
    std::vector<bool> found(q, false);
    std::size_t remaining = q;
    for_each_fiber_word(system, chi, GroupElement{}, 1, max_depth, static_cast<Symbol>(a), std::nullopt,
                        [&](const Word& rho) {
                          for (std::size_t b = 0; b < q; ++b) {
                            if (found[b] || !system.allowed(rho.back(), static_cast<Symbol>(b))) continue;
                            found[b] = true;
                            cert.connectors[a][b] = rho;
                            cert.max_length = std::max(cert.max_length, static_cast<int>(rho.size()));
                            --remaining;
                          }
                          return remaining > 0;
                        });
    for (std::size_t b = 0; b < q; ++b)
      if (!found[b]) result.missing.emplace_back(static_cast<Symbol>(a), static_cast<Symbol>(b));
  }
  if (result.missing.empty()) result.certificate = std::move(cert);
  return result;
}

GenerationCheck check_generation(const Projection& chi, int radius) {
  GenerationCheck out;
  std::unordered_set<GroupElement, GroupElementHash> seen{GroupElement{}};
  std::vector<GroupElement> frontier{GroupElement{}};
  std::vector<GroupElement> steps;
  for (std::size_t s = 0; s < chi.size(); ++s) {
    if (chi.image(static_cast<Symbol>(s)).is_identity()) continue;
    steps.push_back(chi.image(static_cast<Symbol>(s)));
    steps.push_back(inverse(chi.image(static_cast<Symbol>(s))));
  }
  constexpr std::size_t kCap = 2'000'000;
  for (int r = 0; r < radius && !frontier.empty() && seen.size() < kCap; ++r) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier)
      for (const auto& st : steps) {
        GroupElement h = g * st;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  for (int i = 1; i <= chi.rank(); ++i)
    if (!seen.count(GroupElement::generator(i))) out.missing.push_back(i);
  out.witnessed = out.missing.empty();
  return out;
}

RepresentativeTable build_representatives(const SftSystem& system, const Projection& chi, int radius,
                                          int max_word_length) {
  check_compatible(system, chi);
  RepresentativeTable table;
  table.radius = radius;
  table.words[GroupElement{}] = Word{};
  const auto targets = ball(chi.rank(), radius);
  const int lambda = chi.lambda1();
  // Breadth-first over (last symbol, image) with lexicographic expansion: the first visit of a
  // state carries its shortlex-minimal word.
  struct Entry {
    Symbol last;
    GroupElement image;
    Word word;
  };
  std::set<std::pair<Symbol, GroupElement>> seen;
  std::deque<Entry> queue;
  for (std::size_t a = 0; a < system.size(); ++a) {
    Symbol s = static_cast<Symbol>(a);
    queue.push_back({s, chi.image(s), Word{s}});
    seen.insert({s, chi.image(s)});
  }
  while (!queue.empty() && table.words.size() < targets.size()) {
    Entry e = std::move(queue.front());
    queue.pop_front();
    if (static_cast<int>(e.image.length()) <= radius && !table.words.count(e.image)) {
      table.words[e.image] = e.word;
      table.max_length = std::max(table.max_length, static_cast<int>(e.word.size()));
    }
    if (static_cast<int>(e.word.size()) >= max_word_length) continue;
    const long budget = static_cast<long>(lambda) * (max_word_length - static_cast<long>(e.word.size()) - 1);
    for (std::size_t a = 0; a < system.size(); ++a) {
      Symbol s = static_cast<Symbol>(a);
      if (!system.allowed(e.last, s)) continue;
      GroupElement h = e.image * chi.image(s);
      if (static_cast<long>(h.length()) - radius > budget) continue;
      if (!seen.insert({s, h}).second) continue;
      Word w = e.word;
      w.push_back(s);
      queue.push_back({s, std::move(h), std::move(w)});
    }
  }
  if (table.words.size() < targets.size()) {
    std::string missing;
    for (const auto& g : targets)
      if (!table.words.count(g)) {
        missing = g.to_string();
        break;
      }
    throw InconclusiveError("no representative of length <= " + std::to_string(max_word_length) +
                            " for " + missing);
  }
  return table;
}

Word extend_to_coset(const SftSystem& system, const Projection& chi,
                     const TransitivityCertificate& certificate, const RepresentativeTable& reps,
                     std::span<const Symbol> prefix, const GroupElement& target) {
  const GroupElement h = inverse(project(system, chi, prefix)) * target;
  if (static_cast<int>(h.length()) > reps.radius)
    throw InputError("target", "coset offset " + h.to_string() + " exceeds representative radius " +
                                   std::to_string(reps.radius));
  const Word& tau = reps.words.at(h);
  Word out(prefix.begin(), prefix.end());
  if (!prefix.empty() && !tau.empty() && !system.allowed(prefix.back(), tau.front())) {
    const Word& rho = certificate.connector(prefix.back(), tau.front());
    out.insert(out.end(), rho.begin(), rho.end());
  }
  out.insert(out.end(), tau.begin(), tau.end());
  return out;
}

int extension_length_bound(const TransitivityCertificate& certificate, const RepresentativeTable& reps) {
  return certificate.max_length + reps.max_length;
}

DeltaLowerBound constructive_delta_lower_bound(const SftSystem& system, const Projection& chi,
                                               int search_depth) {
  check_compatible(system, chi);
  DeltaLowerBound out;
  const std::size_t q = system.size();
  for (std::size_t a = 0; a < q; ++a) {
    Symbol s = static_cast<Symbol>(a);
    GroupElement t = inverse(chi.image(s) * chi.image(s));
    std::optional<Word> rho;
    for_each_fiber_word(system, chi, t, 0, search_depth, s, s, [&](const Word& w) {
      rho = w;
      return false;
    });
    if (!rho)
      throw InconclusiveError("no word rho with a rho a admissible and image " + t.to_string() +
                              " for symbol '" + system.name(s) + "'");
    Word tau{s};
    tau.insert(tau.end(), rho->begin(), rho->end());
    tau.push_back(s);
    out.max_tau_length = std::max(out.max_tau_length, static_cast<int>(tau.size()));
    out.witness_symbols.push_back(s);
    out.tau.push_back(std::move(tau));
  }
  // l_chi: longest shortest word reading a single generator letter after any symbol.
  out.l_chi = 0;
  for (std::size_t a = 0; a < q; ++a) {
    for (int i = 1; i <= chi.rank(); ++i) {
      for (bool inv : {false, true}) {
        GroupElement e = GroupElement::generator(i, inv);
        int best = -1;
        for_each_fiber_word(system, chi, e, 1, search_depth, static_cast<Symbol>(a), std::nullopt,
                            [&](const Word& w) {
                              best = static_cast<int>(w.size());
                              return false;
                            });
        if (best < 0)
          throw InconclusiveError("no word of length <= " + std::to_string(search_depth) + " with image " +
                                  e.to_string() + " after '" + system.name(static_cast<Symbol>(a)) + "'");
        out.l_chi = std::max(out.l_chi, best);
      }
    }
  }
  out.sup_norm = system.sup_norm();
  out.growth_exponent = std::log(2.0 * chi.rank() - 1.0);
  out.bound = out.growth_exponent / (out.l_chi * out.sup_norm * out.max_tau_length);
  return out;
}

int DisjointTransitiveSet::max_length() const {
  int m = 0;
  for (const auto& row : words)
    for (const auto& w : row) m = std::max(m, static_cast<int>(w.size()));
  return m;
}

std::vector<Word> DisjointTransitiveSet::flat() const {
  std::vector<Word> out;
  for (const auto& row : words)
    for (const auto& w : row) out.push_back(w);
  return out;
}

namespace {

// Counts kernel words by length and last symbol.
struct KernelCountPolicy {
  std::vector<std::vector<double>> counts;  // [level][last symbol]
  std::size_t q;
  int distance(const detail::CayleyTrie& t, std::int32_t v) const { return t.depth(v); }
  void visit(int level, std::int32_t v, std::uint64_t ctx, int ctx_len, std::uint64_t value) {
    if (v != 0 || ctx_len == 0) return;
    counts[level][ctx % q] += static_cast<double>(value);
  }
};

}  // namespace

DisjointTransitiveSet build_disjoint_transitive_set(const SftSystem& system, const Projection& chi,
                                                    const TransitivityCertificate& certificate, int m_cap) {
  check_compatible(system, chi);
  const std::size_t q = system.size();
  DisjointTransitiveSet out;
  out.l0 = certificate.max_length;
  const double qa = static_cast<double>(q);
  out.threshold = (qa * qa - 1) * (2 * out.l0 + 1) + (qa + 1) * (std::pow(qa, 2 * out.l0 + 1) - 1);
  const int max_len = m_cap + 2 * out.l0;

  // pool[a][b][len]
  std::vector<std::vector<std::vector<double>>> pool(q, std::vector<std::vector<double>>(q));
  for (std::size_t a = 0; a < q; ++a) {
    detail::CayleyTrie trie(chi.rank(), q, {});
    KernelCountPolicy policy{std::vector<std::vector<double>>(max_len + 1, std::vector<double>(q, 0.0)), q};
    detail::DpSetup setup;
    setup.max_length = max_len;
    setup.before = {static_cast<Symbol>(a)};
    setup.include_empty = false;
    detail::run_fiber_dp<std::uint64_t>(system, chi, trie, setup, policy);
    for (std::size_t b = 0; b < q; ++b) {
      pool[a][b].assign(max_len + 1, 0.0);
      for (int len = 1; len <= max_len; ++len)
        for (std::size_t c = 0; c < q; ++c)
          if (system.allowed(static_cast<Symbol>(c), static_cast<Symbol>(b)))
            pool[a][b][len] += policy.counts[len][c];
    }
  }
  int chosen_m = -1;
  for (int m = 1; m <= m_cap; ++m) {
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        double c = 0;
        for (int len = m; len <= m + 2 * out.l0; ++len) c += pool[a][b][len];
        smallest = std::min(smallest, c);
      }
    out.pool_sizes.push_back(smallest);
    if (smallest > out.threshold) {
      chosen_m = m;
      break;
    }
  }
  if (chosen_m < 0)
    throw InconclusiveError("candidate pools stay below " + std::to_string(out.threshold) + " for m <= " +
                            std::to_string(m_cap));
  out.m = chosen_m;
  out.words.assign(q, std::vector<Word>(q));
  std::vector<Word> chosen;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      bool placed = false;
      for_each_fiber_word(system, chi, GroupElement{}, out.m, out.m + 2 * out.l0, static_cast<Symbol>(a),
                          static_cast<Symbol>(b), [&](const Word& w) {
                            for (const Word& c : chosen)
                              if (prefix_related(c, w)) return true;
                            out.words[a][b] = w;
                            chosen.push_back(w);
                            placed = true;
                            return false;
                          });
      if (!placed) throw InconclusiveError("greedy selection failed; pool estimate inconsistent");
    }
  }
  return out;
}

SymmetryReport check_symmetry(const SftSystem& system, const Projection& chi, const Involution& dagger,
                              int depth) {
  check_compatible(system, chi);
  const std::size_t q = system.size();
  if (dagger.relabel().size() != q) throw InputError("involution", "size does not match alphabet");
  for (std::size_t a = 0; a < q; ++a) {
    Symbol s = static_cast<Symbol>(a);
    if (chi.image(dagger(s)) != inverse(chi.image(s)))
      throw SymmetryViolation(system.name(s), std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b < q; ++b) {
      Symbol t = static_cast<Symbol>(b);
      if (system.allowed(s, t) && !system.allowed(dagger(t), dagger(s)))
        throw SymmetryViolation(system.format(Word{s, t}), std::numeric_limits<double>::infinity());
    }
  }
  SymmetryReport report;
  report.max_gap.assign(depth + 1, 0.0);
  report.witness.assign(depth + 1, "");
  for (int len = 1; len <= depth; ++len) {
    for_each_word(system, len, std::nullopt, std::nullopt, [&](const Word& w) {
      Word d = dagger.apply(w);
      if (!is_admissible(system, d)) throw SymmetryViolation(system.format(w), std::numeric_limits<double>::infinity());
      if (len <= 6) {
        for (int cut = 0; cut <= len; ++cut) {
          Word left(w.begin(), w.begin() + cut), right(w.begin() + cut, w.end());
          Word composed = dagger.apply(right);
          Word l = dagger.apply(left);
          composed.insert(composed.end(), l.begin(), l.end());
          if (composed != d) throw SymmetryViolation(system.format(w), std::numeric_limits<double>::infinity());
        }
      }
      double gap = std::abs(birkhoff_sup(system, w) - birkhoff_sup(system, d));
      if (gap > report.max_gap[len]) {
        report.max_gap[len] = gap;
        report.witness[len] = system.format(w);
      }
      return true;
    });
  }
  const int half = std::max(1, (depth + 1) / 2);
  report.stabilizes = report.max_gap[depth] <= report.max_gap[half] * (1 + 1e-9) + 1e-12;
  return report;
}

}  // namespace skewdim
