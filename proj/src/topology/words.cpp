#include "glab/words.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "glab/error.hpp"

namespace glab {

Word parse_word(const std::string& s) {
  Word w;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower != 'a' && lower != 'b') throw Error("bad letter '" + std::string(1, ch) + "' in word \"" + s + "\"");
    std::size_t j = i + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i + 1) throw Error("missing handle index in word \"" + s + "\"");
    int h = std::atoi(s.substr(i + 1, j - i - 1).c_str());
    if (h < 1) throw Error("handle index must be >= 1 in word \"" + s + "\"");
    int g = lower == 'a' ? gen_a(h) : gen_b(h);
    w.push_back(std::isupper(static_cast<unsigned char>(ch)) ? -g : g);
    i = j;
  }
  return w;
}

std::string format_word(const Word& w) {
  std::string out;
  for (int l : w) {
    int g = std::abs(l) - 1;
    char c = g % 2 == 0 ? 'a' : 'b';
    if (l < 0) c = static_cast<char>(std::toupper(c));
    if (!out.empty()) out += ' ';
    out += c;
    out += std::to_string(g / 2 + 1);
  }
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) ++i, --j;
  return Word(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& l : r) l = -l;
  return r;
}

Word concat(const Word& u, const Word& v) {
  Word r = u;
  r.insert(r.end(), v.begin(), v.end());
  return free_reduce(r);
}

Word concat(std::initializer_list<Word> parts) {
  Word r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return free_reduce(r);
}

Word power(const Word& w, int k) {
  Word base = k < 0 ? inverse(w) : w;
  Word r;
  for (int i = 0; i < std::abs(k); ++i) r.insert(r.end(), base.begin(), base.end());
  return free_reduce(r);
}

Word commutator(const Word& u, const Word& v) { return concat({u, v, inverse(u), inverse(v)}); }

Word rotate(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  Word r = w;
  std::rotate(r.begin(), r.begin() + static_cast<long>(k % w.size()), r.end());
  return r;
}

Word cyclic_canonical(const Word& w) {
  Word best = w;
  for (const Word& base : {w, inverse(w)})
    for (std::size_t k = 0; k < base.size(); ++k) best = std::min(best, rotate(base, k));
  return best;
}

bool is_proper_power(const Word& w) {
  std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = w[i] == w[i - p];
    if (periodic) return true;
  }
  return false;
}

int max_generator(const Word& w) {
  int m = 0;
  for (int l : w) m = std::max(m, std::abs(l));
  return m;
}

SurfacePresentation::SurfacePresentation(int genus) : genus_(genus) {
  if (genus < 2) throw Error("genus must be at least 2");
  for (int i = 1; i <= genus; ++i) {
    Word c = {gen_a(i), gen_b(i), -gen_a(i), -gen_b(i)};
    relator_.insert(relator_.end(), c.begin(), c.end());
  }
  for (const Word& base : {relator_, inverse(relator_)})
    for (std::size_t k = 0; k < base.size(); ++k) cycles_.push_back(rotate(base, k));
}

void SurfacePresentation::check_word(const Word& w) const {
  if (max_generator(w) > rank()) throw Error("word uses a generator beyond genus " + std::to_string(genus_));
}

Word SurfacePresentation::dehn_reduce(const Word& w0) const {
  Word w = free_reduce(w0);
  const std::size_t L = relator_.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (const Word& c : cycles_) {
        std::size_t m = 0;
        while (m < L && i + m < w.size() && w[i + m] == c[m]) ++m;
        if (2 * m <= L) continue;
        Word rest(c.begin() + static_cast<long>(m), c.end());
        Word repl = inverse(rest);
        Word nw(w.begin(), w.begin() + static_cast<long>(i));
        nw.insert(nw.end(), repl.begin(), repl.end());
        nw.insert(nw.end(), w.begin() + static_cast<long>(i + m), w.end());
        w = free_reduce(nw);
        changed = true;
        break;
      }
    }
  }
  return w;
}

bool SurfacePresentation::commute(const Word& u, const Word& v) const {
  return is_trivial(commutator(u, v));
}

std::vector<int> SurfacePresentation::exponent_sums(const Word& w) const {
  std::vector<int> e(static_cast<std::size_t>(rank()), 0);
  for (int l : w) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  return e;
}

bool SurfacePresentation::homologically_trivial(const Word& w) const {
  for (int x : exponent_sums(w))
    if (x != 0) return false;
  return true;
}

std::vector<Word> SurfacePresentation::ball(int r) const {
  std::vector<Word> out = {Word{}};
  std::size_t begin = 0;
  for (int len = 1; len <= r; ++len) {
    std::size_t end = out.size();
    for (std::size_t k = begin; k < end; ++k) {
      for (int g = 1; g <= rank(); ++g) {
        for (int l : {g, -g}) {
          if (!out[k].empty() && out[k].back() == -l) continue;
          Word w = out[k];
          w.push_back(l);
          out.push_back(std::move(w));
        }
      }
    }
    begin = end;
  }
  return out;
}

std::vector<Word> SurfacePresentation::cyclic_words(int r) const {
  std::vector<Word> out;
  for (auto& w : ball(r)) {
    if (w.empty() || (w.size() > 1 && w.front() == -w.back())) continue;
    if (w <= inverse(w)) out.push_back(std::move(w));
  }
  return out;
}

CurveClass::CurveClass(const Word& w) : word(cyclic_reduce(w)) {
  if (word.empty()) throw Error("curve word reduces to the empty word");
}

}  // namespace glab
