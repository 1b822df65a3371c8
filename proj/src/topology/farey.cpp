#include "glab/farey.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace glab {

Slope::Slope(long p_, long q_) : p(p_), q(q_) {
  if (p == 0 && q == 0) throw Error("slope 0/0");
  long g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
}

Slope Slope::parse(const std::string& s) {
  if (s == "inf") return {1, 0};
  auto k = s.find('/');
  try {
    if (k == std::string::npos) return {std::stol(s), 1};
    return {std::stol(s.substr(0, k)), std::stol(s.substr(k + 1))};
  } catch (const std::logic_error&) {
    throw Error("bad slope \"" + s + "\"");
  }
}

std::string Slope::str() const {
  if (q == 0) return "inf";
  if (q == 1) return std::to_string(p);
  return std::to_string(p) + "/" + std::to_string(q);
}

long farey_det(const Slope& x, const Slope& y) { return x.p * y.q - x.q * y.p; }

bool farey_adjacent(const Slope& x, const Slope& y) { return std::labs(farey_det(x, y)) == 1; }

Slope twist_slope(const Slope& m, const Slope& v, long n) {
  long d = n * farey_det(m, v);
  return {v.p + d * m.p, v.q + d * m.q};
}

FareyTriangle::FareyTriangle(const Slope& x, const Slope& y, const Slope& z) : s{x, y, z} {
  if (!farey_adjacent(x, y) || !farey_adjacent(y, z) || !farey_adjacent(x, z))
    throw Error("not a Farey triangle: " + x.str() + ", " + y.str() + ", " + z.str());
  std::sort(s.begin(), s.end());
}

bool FareyTriangle::contains(const Slope& m) const { return std::find(s.begin(), s.end(), m) != s.end(); }

std::string FareyTriangle::str() const { return "{" + s[0].str() + ", " + s[1].str() + ", " + s[2].str() + "}"; }

namespace {

Slope third(const FareyTriangle& t, const Slope& x, const Slope& y) {
  for (const auto& v : t.s)
    if (!(v == x) && !(v == y)) return v;
  throw Error("degenerate edge");
}

FareyTriangle half_twist(const FareyTriangle& t, const Slope& m) {
  Slope o[2];
  int k = 0;
  for (const auto& v : t.s)
    if (!(v == m)) o[k++] = twist_slope(m, v);
  return {m, o[0], o[1]};
}

FareyTriangle half_twists(FareyTriangle t, const Slope& m, int n) {
  for (int k = 0; k < n; ++k) t = half_twist(t, m);
  return t;
}

}  // namespace

FareyTriangle diagonal_exchange(const FareyTriangle& t, const Slope& x, const Slope& y) {
  if (x == y || !t.contains(x) || !t.contains(y)) throw Error("edge {" + x.str() + ", " + y.str() + "} not in " + t.str());
  Slope z = third(t, x, y);
  Slope plus(x.p + y.p, x.q + y.q);
  Slope w = plus == z ? Slope(x.p - y.p, x.q - y.q) : plus;
  return {x, y, w};
}

std::vector<Exchange> twist_as_exchanges(const FareyTriangle& t, const Slope& m, int power, FareyCase kind) {
  if (power < 0) throw Error("left twists only");
  if (!t.contains(m)) throw Error("twist slope " + m.str() + " not in " + t.str());
  std::vector<Exchange> out;
  FareyTriangle cur = t;
  for (int k = 0; k < power * twist_steps(kind); ++k) {
    FareyTriangle next = half_twist(cur, m);
    Slope kept = m;
    for (const auto& v : next.s)
      if (!(v == m) && cur.contains(v)) kept = v;
    if (kept == m || !(diagonal_exchange(cur, m, kept) == next)) throw Error("twist is not a single exchange");
    out.push_back({m, kept, next});
    cur = next;
  }
  return out;
}

int twist_steps(FareyCase kind) { return kind == FareyCase::torus ? 1 : 2; }

FareyTriangle pivot_triangle(const LaminationSeqSpec& spec) {
  const Slope &x = spec.m_from, &y = spec.m_to;
  if (x == y) throw Error("interpolation ends are equal");
  if (!farey_adjacent(x, y)) throw Error("interpolation ends " + x.str() + ", " + y.str() + " are not Farey adjacent");
  std::vector<Slope> cand = {Slope(x.p + y.p, x.q + y.q), Slope(x.p - y.p, x.q - y.q)};
  std::sort(cand.begin(), cand.end());
  for (const auto& z : cand) {
    FareyTriangle t(x, y, z);
    FareyTriangle back = half_twist(t, x), fwd = half_twist(t, y);
    if (!(back == fwd) && !(back == t) && !(fwd == t)) return t;
  }
  throw Error("no non-backtracking pivot");
}

std::vector<FareyTriangle> interpolation_path(const LaminationSeqSpec& spec, int jmin, int jmax) {
  if (jmin > jmax) throw Error("empty j range");
  FareyTriangle t0 = pivot_triangle(spec);
  std::vector<FareyTriangle> out;
  for (int j = jmin; j <= jmax; ++j)
    out.push_back(j < 0 ? half_twists(t0, spec.m_from, -j) : half_twists(t0, spec.m_to, j));
  return out;
}

namespace {

struct Op {
  bool on_a;
  long n;
};

// 2x2 integer matrix in row-major order acting on (p, q).
using M2 = std::array<long, 4>;

M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

M2 op_matrix(const Op& o) { return o.on_a ? M2{1, o.n, 0, 1} : M2{1, 0, -o.n, 1}; }

Word substitute(const std::vector<Word>& img, const Word& w) {
  Word out;
  for (int l : w) {
    const Word& x = img[static_cast<std::size_t>(std::abs(l) - 1)];
    Word y = l > 0 ? x : inverse(x);
    out.insert(out.end(), y.begin(), y.end());
  }
  return free_reduce(out);
}

HandleChart from_ops(const SurfacePresentation& surf, int handle, const std::vector<Op>& ops) {
  if (handle < 1 || handle > surf.genus()) throw Error("no handle " + std::to_string(handle));
  HandleChart h;
  h.handle = handle;
  CurveClass ca(Word{gen_a(handle)}), cb(Word{gen_b(handle)});
  for (int g = 1; g <= surf.rank(); ++g) {
    Word w{g};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) w = twist_word(surf, it->on_a ? ca : cb, w, static_cast<int>(-it->n));
    h.images.push_back(w);
  }
  M2 m{1, 0, 0, 1};
  for (const auto& o : ops) m = mul(m, op_matrix({o.on_a, -o.n}));
  h.matrix = m;
  return h;
}

}  // namespace

Word HandleChart::apply(const Word& w) const { return substitute(images, w); }

Slope HandleChart::apply(const Slope& s) const {
  return {matrix[0] * s.p + matrix[1] * s.q, matrix[2] * s.p + matrix[3] * s.q};
}

namespace {

std::vector<Op> reduce_ops(const Slope& s) {
  std::vector<Op> ops;
  long p = s.p, q = s.q;
  while (q != 0) {
    if (p == 0) {
      ops.push_back({true, 1});
      p += q;
    } else if (std::labs(p) > std::labs(q)) {
      long n = -(p / q);
      ops.push_back({true, n});
      p += n * q;
    } else {
      long n = q / p;
      ops.push_back({false, n});
      q -= n * p;
    }
  }
  return ops;
}

}  // namespace

HandleChart handle_chart(const SurfacePresentation& surf, int handle, const Slope& s) {
  return from_ops(surf, handle, reduce_ops(s));
}

HandleChart triangle_chart(const SurfacePresentation& surf, int handle, const FareyTriangle& t) {
  const Slope base_third(-1, 1);
  for (int i = 0; i < 3; ++i) {
    const Slope& x = t.s[static_cast<std::size_t>(i)];
    auto ops = reduce_ops(x);
    M2 m{1, 0, 0, 1};
    for (const auto& o : ops) m = mul(m, op_matrix({o.on_a, -o.n}));
    // Columns U = M e1, V0 = M e2 with det(U, V0) = 1.
    long up = m[0], uq = m[2], vp = m[1], vq = m[3];
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const Slope& y = t.s[static_cast<std::size_t>(j)];
      long beta = up * y.q - uq * y.p;
      if (std::labs(beta) != 1) continue;
      long alpha = y.p * vq - y.q * vp;
      auto cand = ops;
      cand.push_back({true, -beta * alpha});
      HandleChart h = from_ops(surf, handle, cand);
      if (h.apply(Slope(1, 0)) == x && h.apply(Slope(0, 1)) == y && t.contains(h.apply(base_third))) return h;
    }
  }
  throw Error("no chart onto " + t.str());
}

CurveClass slope_curve(const SurfacePresentation& surf, int handle, const Slope& s) {
  HandleChart h = handle_chart(surf, handle, s);
  return CurveClass(cyclic_reduce(h.apply(Word{gen_a(handle)})));
}

MeasuredLamination CompanionMultiloop::limit() const {
  MeasuredLamination m;
  m.limit = TwistLimit{core, leaves};
  return m;
}

namespace {

Word swap_handles(const Word& w) {
  Word out;
  for (int l : w) {
    int g = std::abs(l), h = g <= 2 ? g + 2 : g - 2;
    out.push_back(l > 0 ? h : -h);
  }
  return out;
}

long arcs_of(const CurveOracle& o, const std::vector<Leaf>& n, const std::vector<CurveClass>& boundary) {
  long twice = 0;
  for (const auto& b : boundary)
    for (const auto& l : n) twice += static_cast<long>(l.weight) * o.count(l.curve, b);
  return twice / 2;
}

}  // namespace

CompanionMultiloop companion_multiloop(const CurveOracle& o, const LaminationSeqSpec& spec, int j) {
  const auto& s = o.surface();
  if (s.genus() != 2) throw Error("companion multiloop is implemented for genus 2");
  CompanionMultiloop n;
  n.inside = interpolation_path(spec, j, j).front();
  CurveClass c("a1 b1 A1 B1");
  if (spec.kind == FareyCase::sphere) {
    n.k = 2;
    for (const char* w : {"b1", "b2", "b1 b2"}) n.leaves.push_back({CurveClass(w), 2.0, false});
    n.core = {CurveClass("a1"), CurveClass("a2")};
    for (const char* a : {"a1", "a2"}) n.pants.push_back({{CurveClass(a), CurveClass(a), c}, 0});
  } else {
    if (spec.handle != 1 && spec.handle != 2) throw Error("companion multiloop needs handle 1 or 2");
    n.k = 3;
    bool sw = spec.handle == 2;
    auto fix = [&](const char* w) { return sw ? swap_handles(parse_word(w)) : parse_word(w); };
    HandleChart h = triangle_chart(s, spec.handle, n.inside);
    n.leaves.push_back({CurveClass(fix("b2")), 3.0, false});
    // Base multiloop meets the handle in one arc each of slopes 0, infinity, -1.
    for (const char* w : {"b1 b2 A1 b2", "a1 B1 B2"})
      n.leaves.push_back({CurveClass(cyclic_reduce(s.dehn_reduce(cyclic_reduce(h.apply(fix(w)))))), 1.0, false});
    CurveClass other(fix("a2"));
    n.core = {other, c};
    n.pants.push_back({{other, other, c}, 0});
  }
  for (auto& p : n.pants) p.arcs = arcs_of(o, n.leaves, p.boundary);
  for (std::size_t x = 0; x < n.leaves.size(); ++x) {
    if (!is_simple(o, n.leaves[x].curve)) throw Error("companion leaf not simple: " + n.leaves[x].curve.str());
    for (std::size_t y = x + 1; y < n.leaves.size(); ++y)
      if (!disjoint(o, n.leaves[x].curve, n.leaves[y].curve)) throw Error("companion leaves intersect");
  }
  return n;
}

}  // namespace glab
