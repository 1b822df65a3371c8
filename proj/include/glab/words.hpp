#pragma once

#include <string>
#include <vector>

namespace glab {

// Letter +-(k+1) for generator k; generator 2(i-1) is a_i, 2(i-1)+1 is b_i.
using Word = std::vector<int>;

inline int gen_a(int i) { return 2 * (i - 1) + 1; }
inline int gen_b(int i) { return 2 * (i - 1) + 2; }

// "a1 B1 a2": lowercase generator, uppercase inverse. Spaces optional.
Word parse_word(const std::string& s);
std::string format_word(const Word& w);

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word concat(std::initializer_list<Word> parts);
Word power(const Word& w, int k);
Word commutator(const Word& u, const Word& v);
// Rotation by k letters to the left.
Word rotate(const Word& w, std::size_t k);
// Lexicographically least rotation of w and of its inverse; a free-group
// conjugacy invariant for cyclically reduced words.
Word cyclic_canonical(const Word& w);
// w = u^k with k >= 2 for a cyclically reduced w.
bool is_proper_power(const Word& w);
int max_generator(const Word& w);

class SurfacePresentation {
public:
  explicit SurfacePresentation(int genus);
  int genus() const { return genus_; }
  int rank() const { return 2 * genus_; }
  // prod_i [a_i, b_i]
  const Word& relator() const { return relator_; }
  // Dehn's algorithm; the standard presentation is C'(1/6) for genus >= 2.
  Word dehn_reduce(const Word& w) const;
  bool is_trivial(const Word& w) const { return dehn_reduce(w).empty(); }
  bool commute(const Word& u, const Word& v) const;
  std::vector<int> exponent_sums(const Word& w) const;
  bool homologically_trivial(const Word& w) const;
  // Every freely reduced word of length <= r, starting with the empty word.
  std::vector<Word> ball(int r) const;
  // Cyclically reduced nonempty words of length <= r, one per inverse pair.
  std::vector<Word> cyclic_words(int r) const;
  void check_word(const Word& w) const;

private:
  int genus_;
  Word relator_;
  std::vector<Word> cycles_;
};

// Cyclically reduced nonempty word standing for a free homotopy class.
struct CurveClass {
  Word word;
  CurveClass() = default;
  explicit CurveClass(const Word& w);
  explicit CurveClass(const std::string& s) : CurveClass(parse_word(s)) {}
  std::string str() const { return format_word(word); }
  bool operator==(const CurveClass& o) const { return word == o.word; }
  bool operator<(const CurveClass& o) const { return word < o.word; }
};

}  // namespace glab
