#include "skewdim/freegroup.hpp"

#include <cctype>
#include <cstdlib>

#include "skewdim/errors.hpp"

namespace skewdim {

GroupElement GroupElement::from_letters(std::span<const int> letters) {
  GroupElement g;
  for (int l : letters) {
    if (l == 0) throw InputError("group element", "letter 0 is not a generator");
    g.push_letter(l);
  }
  return g;
}

GroupElement GroupElement::generator(int index, bool inverted) {
  if (index <= 0) throw InputError("group element", "generator index must be positive");
  GroupElement g;
  g.letters_.push_back(inverted ? -index : index);
  return g;
}

void GroupElement::push_letter(int letter) {
  if (!letters_.empty() && letters_.back() == -letter)
    letters_.pop_back();
  else
    letters_.push_back(letter);
}

GroupElement GroupElement::parse(std::string_view text) {
  std::vector<int> letters;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c == '1' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      ++i;  // identity token
      continue;
    }
    if (c != 'e' && c != 'E')
      throw InputError("group element", "cannot parse '" + std::string(text) + "'");
    std::size_t j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i + 1)
      throw InputError("group element", "missing generator index in '" + std::string(text) + "'");
    int index = std::atoi(std::string(text.substr(i + 1, j - i - 1)).c_str());
    if (index <= 0) throw InputError("group element", "generator index must be positive");
    letters.push_back(c == 'e' ? index : -index);
    i = j;
  }
  return from_letters(letters);
}

int GroupElement::max_generator() const {
  int m = 0;
  for (int l : letters_) m = std::max(m, std::abs(l));
  return m;
}

std::string GroupElement::to_string() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ' ';
    out += letters_[i] > 0 ? 'e' : 'E';
    out += std::to_string(std::abs(letters_[i]));
  }
  return out;
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int l : g.letters()) {
    h ^= static_cast<std::size_t>(l + 1024);
    h *= 1099511628211ull;
  }
  return h;
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  GroupElement out = a;
  for (int l : b.letters()) out.push_letter(l);
  return out;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) { return multiply(a, b); }

GroupElement inverse(const GroupElement& g) {
  std::vector<int> letters(g.letters().rbegin(), g.letters().rend());
  for (int& l : letters) l = -l;
  return GroupElement::from_letters(letters);
}

GroupElement common_prefix(const GroupElement& a, const GroupElement& b) {
  std::size_t n = 0;
  while (n < a.length() && n < b.length() && a.letter(n) == b.letter(n)) ++n;
  return GroupElement::from_letters(a.letters().first(n));
}

std::size_t word_distance(const GroupElement& a, const GroupElement& b) {
  std::size_t n = common_prefix(a, b).length();
  return a.length() + b.length() - 2 * n;
}

BoundaryPoint::BoundaryPoint(GroupElement head, GroupElement cycle)
    : head_(std::move(head)), cycle_(std::move(cycle)) {
  if (cycle_.is_identity()) throw InputError("boundary point", "cycle must be nonempty");
  std::size_t c = cycle_.length();
  if (cycle_.letter(c - 1) == -cycle_.letter(0))
    throw InputError("boundary point", "cycle is not cyclically reduced");
  if (!head_.is_identity() && head_.letter(head_.length() - 1) == -cycle_.letter(0))
    throw InputError("boundary point", "head does not reduce against the cycle");
}

BoundaryPoint BoundaryPoint::parse(std::string_view head, std::string_view cycle) {
  return BoundaryPoint(GroupElement::parse(head), GroupElement::parse(cycle));
}

int BoundaryPoint::letter(std::size_t i) const {
  if (i < head_.length()) return head_.letter(i);
  return cycle_.letter((i - head_.length()) % cycle_.length());
}

GroupElement BoundaryPoint::prefix(std::size_t m) const {
  std::vector<int> letters(m);
  for (std::size_t i = 0; i < m; ++i) letters[i] = letter(i);
  return GroupElement::from_letters(letters);
}

std::string BoundaryPoint::to_string() const {
  return "(" + head_.to_string() + ")(" + cycle_.to_string() + ")^inf";
}

GroupElement boundary_prefix(const BoundaryPoint& x, std::size_t m) { return x.prefix(m); }

std::size_t common_prefix_length(const GroupElement& g, const BoundaryPoint& x) {
  std::size_t n = 0;
  while (n < g.length() && g.letter(n) == x.letter(n)) ++n;
  return n;
}

GroupElement common_prefix(const GroupElement& g, const BoundaryPoint& x) {
  return GroupElement::from_letters(g.letters().first(common_prefix_length(g, x)));
}

std::vector<GroupElement> ball(int rank, int radius) {
  std::vector<GroupElement> out{GroupElement{}};
  std::size_t begin = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int gen = 1; gen <= rank; ++gen) {
        for (int sign : {1, -1}) {
          int l = sign * gen;
          const GroupElement& g = out[i];
          if (!g.is_identity() && g.letter(g.length() - 1) == -l) continue;
          GroupElement h = g;
          h.push_letter(l);
          out.push_back(std::move(h));
        }
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace skewdim
