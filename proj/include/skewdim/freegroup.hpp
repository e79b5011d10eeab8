#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skewdim {

// Element of a free group on generators e1..en, stored as a reduced word.
// A letter is +i for e_i and -i for its inverse. Text form: "e1 E2" (capital = inverse),
// the identity prints as "1".
class GroupElement {
 public:
  GroupElement() = default;

  // Reduces the given letter sequence.
  static GroupElement from_letters(std::span<const int> letters);
  static GroupElement generator(int index, bool inverted = false);
  static GroupElement parse(std::string_view text);

  std::span<const int> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  int letter(std::size_t i) const { return letters_[i]; }
  // Largest generator index that occurs, 0 for the identity.
  int max_generator() const;
  std::string to_string() const;

  // Appends one letter, cancelling if it inverts the last one.
  void push_letter(int letter);

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

 private:
  std::vector<int> letters_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement operator*(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);
GroupElement common_prefix(const GroupElement& a, const GroupElement& b);
// Word metric distance |a^{-1} b|.
std::size_t word_distance(const GroupElement& a, const GroupElement& b);

// Eventually periodic point of the boundary: head followed by cycle repeated forever.
// Concatenation must be reduced, including the wrap from the cycle's end to its start.
class BoundaryPoint {
 public:
  BoundaryPoint(GroupElement head, GroupElement cycle);
  static BoundaryPoint parse(std::string_view head, std::string_view cycle);

  const GroupElement& head() const { return head_; }
  const GroupElement& cycle() const { return cycle_; }
  int letter(std::size_t i) const;
  GroupElement prefix(std::size_t m) const;
  std::string to_string() const;

 private:
  GroupElement head_;
  GroupElement cycle_;
};

GroupElement boundary_prefix(const BoundaryPoint& x, std::size_t m);
// Longest common prefix of g with the ray x.
GroupElement common_prefix(const GroupElement& g, const BoundaryPoint& x);
std::size_t common_prefix_length(const GroupElement& g, const BoundaryPoint& x);

// Every element of the ball of radius r, in shortlex order.
std::vector<GroupElement> ball(int rank, int radius);

}  // namespace skewdim
