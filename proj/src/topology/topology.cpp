#include "glab/topology.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace glab {

namespace {

// Sign s with Tw_[a,b] conjugating the handle by [a,b]^s; fixed by the
// two-chain relation (Tw_a Tw_b)^6 = Tw_[a,b].
constexpr int kBoundarySign = -1;

enum class TwistType { a, b, boundary };

struct TwistCurve {
  TwistType type;
  int handle;
};

TwistCurve identify(const SurfacePresentation& s, const CurveClass& c) {
  Word canon = cyclic_canonical(c.word);
  for (int i = 1; i <= s.genus(); ++i) {
    if (canon == cyclic_canonical({gen_a(i)})) return {TwistType::a, i};
    if (canon == cyclic_canonical({gen_b(i)})) return {TwistType::b, i};
    if (canon == cyclic_canonical(commutator({gen_a(i)}, {gen_b(i)}))) return {TwistType::boundary, i};
  }
  throw Error("twist basis: unsupported twisting curve " + c.str());
}

// Images of generators under one twist of sign sg.
std::vector<Word> twist_images(const SurfacePresentation& s, const TwistCurve& t, int sg) {
  std::vector<Word> img;
  for (int g = 1; g <= s.rank(); ++g) img.push_back({g});
  int a = gen_a(t.handle), b = gen_b(t.handle);
  switch (t.type) {
    case TwistType::a:
      img[static_cast<std::size_t>(b - 1)] = {b, sg * a};
      break;
    case TwistType::b:
      img[static_cast<std::size_t>(a - 1)] = {a, -sg * b};
      break;
    case TwistType::boundary: {
      Word c = power(commutator({a}, {b}), sg * kBoundarySign);
      img[static_cast<std::size_t>(a - 1)] = free_reduce(concat({c, {a}, inverse(c)}));
      img[static_cast<std::size_t>(b - 1)] = free_reduce(concat({c, {b}, inverse(c)}));
      break;
    }
  }
  return img;
}

Word apply_images(const std::vector<Word>& img, const Word& w) {
  Word out;
  for (int l : w) {
    const Word& x = img[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0)
      out.insert(out.end(), x.begin(), x.end());
    else {
      Word xi = inverse(x);
      out.insert(out.end(), xi.begin(), xi.end());
    }
  }
  return free_reduce(out);
}

int pair_count(const CurveOracle& o, const CurveClass& x, const CurveClass& y) { return o.count(x, y); }

std::vector<int> homology(const SurfacePresentation& s, const Word& w) { return s.exponent_sums(w); }

// Homology up to sign, used as a cheap isotopy prefilter.
std::vector<int> unsigned_homology(const SurfacePresentation& s, const Word& w) {
  auto h = homology(s, w);
  auto n = h;
  for (auto& x : n) x = -x;
  return std::min(h, n);
}

}  // namespace

int algebraic_intersection(const SurfacePresentation& s, const Word& u, const Word& v) {
  auto hu = homology(s, u), hv = homology(s, v);
  int r = 0;
  for (int i = 0; i < s.genus(); ++i) {
    std::size_t a = static_cast<std::size_t>(2 * i), b = a + 1;
    r += hu[a] * hv[b] - hu[b] * hv[a];
  }
  return r;
}

bool twist_supported(const SurfacePresentation& s, const CurveClass& c) {
  try {
    identify(s, c);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Word twist_word(const SurfacePresentation& s, const CurveClass& c, const Word& w, int n) {
  TwistCurve t = identify(s, c);
  s.check_word(w);
  if (n == 0) return w;
  auto img = twist_images(s, t, n > 0 ? 1 : -1);
  Word out = w;
  for (int k = 0; k < std::abs(n); ++k) out = apply_images(img, out);
  return out;
}

CurveClass dehn_twist(const SurfacePresentation& s, const CurveClass& c, const CurveClass& target, int n) {
  Word w = twist_word(s, c, target.word, n);
  return CurveClass(cyclic_reduce(s.dehn_reduce(cyclic_reduce(w))));
}

bool is_simple(const CurveOracle& o, const CurveClass& c) {
  if (is_proper_power(c.word)) return false;
  if (o.surface().is_trivial(c.word)) return false;
  return o.count(c, c) == 0;
}

bool is_separating(const CurveOracle& o, const CurveClass& c) {
  return o.surface().homologically_trivial(c.word) && is_simple(o, c);
}

bool disjoint(const CurveOracle& o, const CurveClass& x, const CurveClass& y) { return pair_count(o, x, y) == 0; }

bool isotopic(const CurveOracle& o, const CurveClass& x, const CurveClass& y) {
  const auto& s = o.surface();
  if (unsigned_homology(s, x.word) != unsigned_homology(s, y.word)) return false;
  if (cyclic_canonical(x.word) == cyclic_canonical(y.word)) return true;
  return o.parallel(x, y);
}

bool DualGraph::trivalent() const {
  std::vector<int> deg(static_cast<std::size_t>(pants), 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= pants || v >= pants) return false;
    deg[static_cast<std::size_t>(u)]++;
    deg[static_cast<std::size_t>(v)]++;
  }
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 3; });
}

PantsValidation validate_pants_decomposition(const CurveOracle& o, const PantsDecomposition& p) {
  PantsValidation v;
  const int g = p.genus;
  if (g != o.surface().genus()) v.violations.push_back("genus");
  if (static_cast<int>(p.curves.size()) != 3 * (g - 1)) v.violations.push_back("count");
  if (!v.violations.empty()) return v;
  std::vector<bool> sep(p.curves.size(), false);
  for (std::size_t i = 0; i < p.curves.size(); ++i) {
    if (!is_simple(o, p.curves[i])) {
      v.violations.push_back("not simple: " + p.curves[i].str());
      continue;
    }
    sep[i] = is_separating(o, p.curves[i]);
  }
  for (std::size_t i = 0; i < p.curves.size(); ++i)
    for (std::size_t j = i + 1; j < p.curves.size(); ++j) {
      const auto& x = p.curves[i];
      const auto& y = p.curves[j];
      if (isotopic(o, x, y))
        v.violations.push_back("parallel: " + x.str() + " ~ " + y.str());
      else if (!disjoint(o, x, y))
        v.violations.push_back("intersecting: " + x.str() + " / " + y.str());
    }
  if (!v.violations.empty()) return v;
  if (g != 2) {
    v.violations.push_back("dual graph: only genus 2 is supported");
    return v;
  }
  v.graph.pants = 2;
  int nsep = static_cast<int>(std::count(sep.begin(), sep.end(), true));
  int side = 0;
  for (std::size_t i = 0; i < p.curves.size(); ++i) {
    if (nsep == 0 || sep[i])
      v.graph.edges.push_back({0, 1});
    else {
      v.graph.edges.push_back({side, side});
      side++;
    }
  }
  if (nsep > 1 || !v.graph.trivalent()) v.violations.push_back("dual graph");
  v.valid = v.violations.empty();
  return v;
}

bool same_decomposition(const CurveOracle& o, const PantsDecomposition& x, const PantsDecomposition& y) {
  if (x.curves.size() != y.curves.size()) return false;
  std::vector<bool> used(y.curves.size(), false);
  for (const auto& c : x.curves) {
    bool hit = false;
    for (std::size_t j = 0; j < y.curves.size() && !hit; ++j)
      if (!used[j] && isotopic(o, c, y.curves[j])) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

Subsurface move_region(const CurveOracle& o, const PantsDecomposition& p, std::size_t k) {
  auto val = validate_pants_decomposition(o, p);
  if (!val.valid) throw Error("invalid pants decomposition");
  if (k >= p.curves.size()) throw Error("curve index out of range");
  Subsurface r;
  const auto& e = val.graph.edges[k];
  if (e.first == e.second) {
    r.kind = MoveKind::torus;
    for (std::size_t i = 0; i < p.curves.size(); ++i) {
      const auto& f = val.graph.edges[i];
      if (i != k && f.first != f.second) r.boundary.push_back(p.curves[i]);
    }
  } else {
    r.kind = MoveKind::sphere;
    for (std::size_t i = 0; i < p.curves.size(); ++i)
      if (i != k) r.boundary.insert(r.boundary.end(), 2, p.curves[i]);
  }
  return r;
}

PantsDecomposition apply_move(const CurveOracle& o, const PantsDecomposition& p, const ElementaryMove& m) {
  PantsDecomposition q = p;
  for (auto& c : q.curves)
    if (isotopic(o, c, m.removed)) {
      c = m.added;
      return q;
    }
  throw Error("move removes a curve not in the decomposition: " + m.removed.str());
}

ElementaryMove reverse_move(const ElementaryMove& m) {
  ElementaryMove r = m;
  std::swap(r.removed, r.added);
  return r;
}

std::vector<ElementaryMove> enumerate_elementary_moves(const CurveOracle& o, const PantsDecomposition& p,
                                                       const CurveClass& l, int word_cap) {
  const auto& s = o.surface();
  std::size_t k = p.curves.size();
  for (std::size_t i = 0; i < p.curves.size(); ++i)
    if (isotopic(o, p.curves[i], l)) k = i;
  if (k == p.curves.size()) throw Error("curve " + l.str() + " is not in the decomposition");
  std::vector<ElementaryMove> out;
  if (word_cap <= 0) return out;
  Subsurface region = move_region(o, p, k);
  const int need = region.kind == MoveKind::torus ? 1 : 2;
  std::vector<CurveClass> rest;
  for (std::size_t i = 0; i < p.curves.size(); ++i)
    if (i != k) rest.push_back(p.curves[i]);
  for (const Word& w : s.cyclic_words(word_cap)) {
    if (is_proper_power(w) || s.is_trivial(w)) continue;
    int alg = algebraic_intersection(s, l.word, w);
    if (need == 1 ? std::abs(alg) != 1 : (alg % 2 != 0 || std::abs(alg) > 2)) continue;
    bool ok = true;
    for (const auto& r : rest) ok = ok && algebraic_intersection(s, r.word, w) == 0;
    if (!ok) continue;
    CurveClass m(w);
    for (const auto& r : rest) ok = ok && !isotopic(o, r, m) && disjoint(o, r, m);
    if (!ok || pair_count(o, l, m) != need || !is_simple(o, m)) continue;
    bool dup = false;
    for (const auto& mv : out) dup = dup || isotopic(o, mv.added, m);
    if (dup) continue;
    out.push_back({l, m, region.kind, region});
  }
  return out;
}

std::vector<ElementaryMove> pants_graph_path(const CurveOracle& o, const PantsDecomposition& from,
                                             const PantsDecomposition& to, const PathCaps& caps) {
  if (from.genus != to.genus) throw Error("decompositions of different genus");
  if (!validate_pants_decomposition(o, from).valid || !validate_pants_decomposition(o, to).valid)
    throw Error("invalid pants decomposition");
  if (same_decomposition(o, from, to)) return {};
  const auto& s = o.surface();
  auto signature = [&](const PantsDecomposition& p) {
    std::vector<std::vector<int>> h;
    for (const auto& c : p.curves) h.push_back(unsigned_homology(s, c.word));
    std::sort(h.begin(), h.end());
    return h;
  };
  struct Node {
    PantsDecomposition p;
    std::vector<ElementaryMove> path;
  };
  std::map<std::vector<std::vector<int>>, std::vector<PantsDecomposition>> seen;
  auto visit = [&](const PantsDecomposition& p) {
    auto& bucket = seen[signature(p)];
    for (const auto& q : bucket)
      if (same_decomposition(o, p, q)) return false;
    bucket.push_back(p);
    return true;
  };
  visit(from);
  std::deque<Node> frontier = {{from, {}}};
  for (int depth = 1; depth <= caps.depth; ++depth) {
    std::deque<Node> next;
    for (const auto& node : frontier)
      for (const auto& l : node.p.curves)
        for (const auto& mv : enumerate_elementary_moves(o, node.p, l, caps.word_cap)) {
          PantsDecomposition q = apply_move(o, node.p, mv);
          if (!visit(q)) continue;
          auto path = node.path;
          path.push_back(mv);
          if (same_decomposition(o, q, to)) return path;
          next.push_back({q, std::move(path)});
        }
    frontier = std::move(next);
  }
  std::ostringstream os;
  os << "cap exhausted: no pants-graph path within depth " << caps.depth << " and word length " << caps.word_cap;
  throw CapExhausted(os.str());
}

int TrainTrack::max_valence() const {
  std::vector<int> v(static_cast<std::size_t>(switches), 0);
  for (const auto& b : branches) {
    v[static_cast<std::size_t>(b.from)]++;
    v[static_cast<std::size_t>(b.to)]++;
  }
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

bool TrainTrack::valid() const {
  std::vector<std::array<int, 2>> ends(static_cast<std::size_t>(switches), {0, 0});
  for (const auto& b : branches) {
    if (b.from < 0 || b.to < 0 || b.from >= switches || b.to >= switches) return false;
    if ((b.from_side | b.to_side) & ~1) return false;
    ends[static_cast<std::size_t>(b.from)][static_cast<std::size_t>(b.from_side)]++;
    ends[static_cast<std::size_t>(b.to)][static_cast<std::size_t>(b.to_side)]++;
  }
  for (const auto& e : ends)
    if (e[0] == 0 || e[1] == 0) return false;
  return max_valence() <= 3;
}

TrainTrack standard_track(int genus) {
  TrainTrack t;
  t.switches = 2 * genus;
  for (int i = 1; i <= genus; ++i) {
    int s1 = 2 * (i - 1), s2 = s1 + 1;
    t.branches.push_back({s1, s2, 1, 0, {}});
    t.branches.push_back({s2, s1, 1, 0, {gen_a(i)}});
    t.branches.push_back({s2, s1, 1, 0, {gen_b(i)}});
  }
  return t;
}

bool switch_conditions_hold(const TrainTrack& t, const std::vector<long>& weights) {
  if (weights.size() != t.branches.size()) return false;
  std::vector<std::array<long, 2>> sums(static_cast<std::size_t>(t.switches), {0, 0});
  for (std::size_t k = 0; k < t.branches.size(); ++k) {
    const auto& b = t.branches[k];
    if (weights[k] < 0) return false;
    sums[static_cast<std::size_t>(b.from)][static_cast<std::size_t>(b.from_side)] += weights[k];
    sums[static_cast<std::size_t>(b.to)][static_cast<std::size_t>(b.to_side)] += weights[k];
  }
  for (const auto& s : sums)
    if (s[0] != s[1]) return false;
  return true;
}

namespace {

// Closed smooth train path whose label is the cyclic word w, as branch counts.
std::optional<std::vector<long>> trace_curve(const TrainTrack& t, const Word& w) {
  Word target = cyclic_canonical(cyclic_reduce(w));
  const std::size_t nb = t.branches.size();
  const std::size_t max_steps = 2 * w.size() + nb;
  std::vector<std::pair<std::size_t, bool>> path;
  std::optional<std::vector<long>> found;
  // Exit (switch, side) after traversing branch k in a direction.
  auto exit_of = [&](std::size_t k, bool fwd) {
    const auto& b = t.branches[k];
    return fwd ? std::make_pair(b.to, b.to_side) : std::make_pair(b.from, b.from_side);
  };
  auto entry_of = [&](std::size_t k, bool fwd) {
    const auto& b = t.branches[k];
    return fwd ? std::make_pair(b.from, b.from_side) : std::make_pair(b.to, b.to_side);
  };
  std::function<void(std::size_t)> dfs = [&](std::size_t letters) {
    if (found || path.size() > max_steps || letters > 2 * w.size() + 2) return;
    auto [sw, side] = exit_of(path.back().first, path.back().second);
    auto [s0, side0] = entry_of(path.front().first, path.front().second);
    if (sw == s0 && side == 1 - side0 && letters > 0) {
      Word label;
      for (auto [k, fwd] : path) {
        const Word& l = t.branches[k].label;
        Word x = fwd ? l : inverse(l);
        label.insert(label.end(), x.begin(), x.end());
      }
      Word r = cyclic_reduce(free_reduce(label));
      if (!r.empty() && cyclic_canonical(r) == target) {
        std::vector<long> c(nb, 0);
        for (auto [k, fwd] : path) c[k]++;
        found = c;
        return;
      }
    }
    for (std::size_t k = 0; k < nb; ++k)
      for (bool fwd : {true, false}) {
        auto [es, eside] = entry_of(k, fwd);
        if (es != sw || eside != 1 - side) continue;
        path.push_back({k, fwd});
        dfs(letters + t.branches[k].label.size());
        path.pop_back();
        if (found) return;
      }
  };
  for (std::size_t k = 0; k < nb && !found; ++k)
    for (bool fwd : {true, false}) {
      path = {{k, fwd}};
      dfs(t.branches[k].label.size());
      if (found) break;
    }
  return found;
}

}  // namespace

Carrying traintrack_carries(const TrainTrack& t, const std::vector<WeightedCurve>& m) {
  Carrying c;
  c.weights.assign(t.branches.size(), 0);
  if (!t.valid()) {
    c.failure = "invalid train track";
    return c;
  }
  for (const auto& wc : m) {
    if (wc.weight < 0) {
      c.failure = "negative weight on " + wc.curve.str();
      return c;
    }
    auto counts = trace_curve(t, wc.curve.word);
    if (!counts) {
      c.failure = "curve " + wc.curve.str() + " is not carried";
      c.weights.assign(t.branches.size(), 0);
      return c;
    }
    for (std::size_t k = 0; k < counts->size(); ++k) c.weights[k] += wc.weight * (*counts)[k];
  }
  c.carried = switch_conditions_hold(t, c.weights);
  if (!c.carried) c.failure = "switch conditions fail";
  return c;
}

}  // namespace glab
