#include "glab/pleated.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "../common/quad.hpp"

namespace glab {

using quad::Qc;
using quad::Qm;
using quad::real;

namespace {

// Half-leaves spiraling left reach a lift of their closed leaf at its
// attracting end exactly when the triangle lies on the left of the axis.
constexpr bool kLeftIsAttracting = true;

struct FixedPair {
  Qc attracting, repelling;
};

FixedPair fixed_pair(const Qm& m) {
  if (m.c.norm() == 0) throw Error("fixed point at infinity");
  Qc tr = m.trace();
  Qc s = quad::csqrt(tr * tr - Qc{4, 0});
  Qc amd = m.a - m.d;
  Qc n1 = amd + s, n2 = amd - s;
  Qc z1 = (n1.norm() >= n2.norm() ? n1 : n2) / (m.c * real(2));
  Qc z2 = (-m.b) / (m.c * z1);
  if ((m.c * z1 + m.d).norm() > 1) return {z1, z2};
  return {z2, z1};
}

Word conjugate_word(const Word& conj, const Word& core) { return free_reduce(concat({conj, core, inverse(conj)})); }

Word element(const VertexSpec& v, const Word& deck) {
  return conjugate_word(free_reduce(concat(deck, v.conj)), v.core);
}

Qc pick(const FixedPair& f, Selector s) { return s == Selector::attracting ? f.attracting : f.repelling; }

// Side of an interior point relative to the geodesic with real ends u, v.
bool inside_disk(real u, real v, const Qc& p) {
  real c = (u + v) / 2, r = (u - v) / 2;
  return (p.re - c) * (p.re - c) + p.im * p.im < r * r;
}

bool between(real u, real v, real w) { return (w - u) * (w - v) < 0; }

Qc to_q(const H2Point& p) { return {p.x, p.y}; }

struct QTriangle {
  std::array<real, 3> u;
  std::array<Qc, 3> v;
};

QTriangle triangle_points(const PleatedSurface& b, int tri, const Word& deck) {
  const auto& t = b.gallery[static_cast<std::size_t>(tri)];
  QTriangle out;
  std::array<Word, 3> el;
  for (int i = 0; i < 3; ++i) el[static_cast<std::size_t>(i)] = element(t.v[static_cast<std::size_t>(i)].spec, deck);
  for (std::size_t i = 0; i < 3; ++i) {
    Selector s = deck.empty() ? t.v[i].selector : spiral_selector(b.domain, el[i], el[(i + 1) % 3]);
    out.u[i] = pick(fixed_pair(quad::evaluate_quad(b.domain, el[i])), s).re;
    out.v[i] = pick(fixed_pair(quad::evaluate_quad(b.rho, el[i])), s);
  }
  return out;
}

// Sends z1, z2, z3 to 0, infinity, 1.
Qm normalizer(const Qc& z1, const Qc& z2, const Qc& z3) {
  Qc p = z3 - z2, q = z3 - z1;
  return {p, -(z1 * p), q, -(z2 * q)};
}

struct QPoint {
  Qc z;
  real t;
};

QPoint act(const Qm& m, const Qc& z, real t) {
  Qc czd = m.c * z + m.d;
  real den = czd.norm() + m.c.norm() * t * t;
  Qc w = ((m.a * z + m.b) * czd.conj() + m.a * m.c.conj() * (t * t)) / Qc{den, 0};
  real det = quad::qsqrt(m.det().norm());
  return {w, det * t / den};
}

H3Point image(const QTriangle& q, const H2Point& x) {
  Qm m = normalizer(q.v[0], q.v[1], q.v[2]).inverse() *
         normalizer(Qc{q.u[0], 0}, Qc{q.u[1], 0}, Qc{q.u[2], 0});
  QPoint p = act(m, Qc{x.x, 0}, x.y);
  return {static_cast<double>(p.z.re), static_cast<double>(p.z.im), static_cast<double>(p.t)};
}

bool contains(const QTriangle& q, const Qc& p) {
  for (std::size_t e = 0; e < 3; ++e) {
    real u = q.u[(e + 1) % 3], v = q.u[(e + 2) % 3];
    if (inside_disk(u, v, p) != between(u, v, q.u[e])) return false;
  }
  return true;
}

// Model ideal triangle in the disk with vertices 1, w, w^2.
std::vector<cplx> model_points() {
  std::vector<cplx> pts{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) pts.push_back(std::polar(0.25, k * std::numbers::pi / 3));
  for (double r : {0.55, 0.8})
    for (int k = 0; k < 3; ++k) pts.push_back(std::polar(r, 2 * k * std::numbers::pi / 3));
  return pts;
}

H2Point model_to_domain(const std::array<real, 3>& u, cplx w) {
  const cplx om = std::polar(1.0, 2 * std::numbers::pi / 3);
  auto q = [](cplx z) { return Qc::from(z); };
  Qm m = normalizer(Qc{u[0], 0}, Qc{u[1], 0}, Qc{u[2], 0}).inverse() * normalizer(q(1.0), q(om), q(om * om));
  Qc z = m.apply(q(w));
  return {static_cast<double>(z.re), static_cast<double>(quad::qabs(z.im))};
}

bool close(real a, real b) { return quad::qabs(a - b) < real(1e-9) * (1 + quad::qabs(a) + quad::qabs(b)); }

HandleChart compose(const SurfacePresentation& s, const HandleChart& h, int handle, bool on_a, int n) {
  HandleChart out;
  out.handle = h.handle;
  CurveClass c(Word{on_a ? gen_a(handle) : gen_b(handle)});
  for (int g = 1; g <= s.rank(); ++g) out.images.push_back(h.apply(twist_word(s, c, Word{g}, n)));
  std::array<long, 4> t = on_a ? std::array<long, 4>{1, n, 0, 1} : std::array<long, 4>{1, 0, -n, 1};
  const auto& m = h.matrix;
  out.matrix = {m[0] * t[0] + m[1] * t[2], m[0] * t[1] + m[1] * t[3], m[2] * t[0] + m[3] * t[2],
                m[2] * t[1] + m[3] * t[3]};
  return out;
}

// Real frame keeping every vertex of the standard examples finite.
MobiusMap generic_frame() { return MobiusMap(1.0, 0.3, -0.2, 1.0); }

double min_gap(const std::array<real, 3>& u) {
  double best = 2.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      real d = 2 * quad::qabs(u[i] - u[j]) / quad::qsqrt((1 + u[i] * u[i]) * (1 + u[j] * u[j]));
      best = std::min(best, static_cast<double>(d));
    }
  return best;
}

// Translate of the triangle by a power of a piece generator with the widest
// vertex spread; far translates of spiraling triangles nearly degenerate.
Word best_translate(const HolonomyRep& domain, const std::array<VertexSpec, 3>& tri, const std::array<Word, 2>& gens) {
  constexpr int kMaxShift = 64;
  std::array<real, 3> u;
  for (std::size_t i = 0; i < 3; ++i) {
    Word el = element(tri[i], {});
    Selector s = spiral_selector(domain, el, element(tri[(i + 1) % 3], {}));
    u[i] = pick(fixed_pair(quad::evaluate_quad(domain, el)), s).re;
  }
  double best = min_gap(u);
  Word out;
  for (const Word& g : {gens[0], inverse(gens[0]), gens[1], inverse(gens[1])}) {
    Qm m = quad::evaluate_quad(domain, g);
    std::array<real, 3> w = u;
    for (int n = 1; n <= kMaxShift; ++n) {
      for (auto& x : w) x = m.apply(Qc{x, 0}).re;
      double gap = min_gap(w);
      if (gap > best * (1 + 1e-9)) {
        best = gap;
        out = free_reduce(power(g, n));
      }
    }
  }
  return out;
}

Word handle_boundary(int h) { return commutator(Word{gen_a(h)}, Word{gen_b(h)}); }

LaminationPiece handle_other_pants(int other) {
  int a = gen_a(other), b = gen_b(other);
  return pants_piece(Word{a}, Word{b, -a, -b});
}

}  // namespace

std::size_t SpiralLamination::triangle_count() const {
  std::size_t n = 0;
  for (const auto& p : pieces) n += p.triangles.size();
  return n;
}

LaminationPiece pants_piece(const Word& x, const Word& y) {
  Word z = inverse(free_reduce(concat(x, y)));
  LaminationPiece p;
  p.kind = "pants";
  p.boundary = {CurveClass(x), CurveClass(y), CurveClass(cyclic_reduce(z))};
  p.gens = {x, y};
  p.triangles.push_back({VertexSpec{{}, x}, VertexSpec{{}, y}, VertexSpec{{}, z}});
  p.triangles.push_back({VertexSpec{{}, x}, VertexSpec{inverse(x), z}, VertexSpec{{}, y}});
  p.pairing = {{GalleryAdjacency{inverse(y), 1, 0}, GalleryAdjacency{x, 1, 2}, GalleryAdjacency{{}, 1, 1}},
               {GalleryAdjacency{y, 0, 0}, GalleryAdjacency{{}, 0, 2}, GalleryAdjacency{inverse(x), 0, 1}}};
  return p;
}

LaminationPiece handle_piece(const SurfacePresentation& s, int handle, const HandleChart& chart) {
  (void)s;
  int a = gen_a(handle), b = gen_b(handle);
  Word k = handle_boundary(handle);
  if (chart.apply(k) != k) throw Error("chart does not fix the handle boundary");
  LaminationPiece p;
  p.kind = "handle";
  p.boundary = {CurveClass(k)};
  p.gens = {chart.apply(Word{a}), chart.apply(Word{b})};
  Word ba = chart.apply(Word{-b, -a}), aba = chart.apply(Word{a, -b, -a}), ia = chart.apply(Word{-a});
  p.triangles.push_back({VertexSpec{ba, k}, VertexSpec{aba, k}, VertexSpec{ia, k}});
  p.triangles.push_back({VertexSpec{aba, k}, VertexSpec{{}, k}, VertexSpec{ia, k}});
  const Word &ca = p.gens[0], &cb = p.gens[1];
  p.pairing = {{GalleryAdjacency{{}, 1, 1}, GalleryAdjacency{inverse(ca), 1, 2}, GalleryAdjacency{inverse(cb), 1, 0}},
               {GalleryAdjacency{cb, 0, 2}, GalleryAdjacency{{}, 0, 0}, GalleryAdjacency{ca, 0, 1}}};
  return p;
}

LaminationPiece handle_limit_piece(const SurfacePresentation& s, int handle, const HandleChart& chart, int end) {
  (void)s;
  int a = gen_a(handle), b = gen_b(handle);
  Word k = handle_boundary(handle);
  LaminationPiece p;
  p.kind = "handle-limit";
  Word ca = chart.apply(Word{a}), cb = chart.apply(Word{b});
  p.gens = {ca, cb};
  if (end > 0) {
    Word aba = chart.apply(Word{a, -b, -a});
    p.boundary = {CurveClass(k), CurveClass(cyclic_reduce(cb))};
    p.triangles.push_back({VertexSpec{aba, k}, VertexSpec{{}, k}, VertexSpec{{}, cb}});
    p.triangles.push_back({VertexSpec{aba, k}, VertexSpec{{}, k}, VertexSpec{ca, cb}});
    Word conj_b = free_reduce(concat({ca, cb, inverse(ca)}));
    p.pairing = {{GalleryAdjacency{cb, 0, 1}, GalleryAdjacency{inverse(cb), 0, 0}, GalleryAdjacency{{}, 1, 2}},
                 {GalleryAdjacency{conj_b, 1, 1}, GalleryAdjacency{inverse(conj_b), 1, 0}, GalleryAdjacency{{}, 0, 2}}};
  } else {
    Word ia = inverse(ca);
    p.boundary = {CurveClass(k), CurveClass(cyclic_reduce(ca))};
    p.triangles.push_back({VertexSpec{{}, ca}, VertexSpec{{}, k}, VertexSpec{ia, k}});
    p.triangles.push_back({VertexSpec{ia, k}, VertexSpec{{}, k}, VertexSpec{cb, ca}});
    Word conj_a = free_reduce(concat({cb, ca, inverse(cb)}));
    p.pairing = {{GalleryAdjacency{{}, 1, 2}, GalleryAdjacency{ia, 0, 2}, GalleryAdjacency{ca, 0, 1}},
                 {GalleryAdjacency{conj_a, 1, 1}, GalleryAdjacency{inverse(conj_a), 1, 0}, GalleryAdjacency{{}, 0, 0}}};
  }
  return p;
}

SpiralLamination standard_spiral_lamination() {
  SpiralLamination nu;
  nu.closed = reference_curves();
  nu.pieces.push_back(handle_other_pants(1));
  nu.pieces.push_back(handle_other_pants(2));
  return nu;
}

HandleChart sequence_chart(const SurfacePresentation& s, const LaminationSeqSpec& spec) {
  if (spec.kind != FareyCase::torus) throw Error("realization of four-holed sphere sequences is not supported");
  if (!farey_adjacent(spec.m_from, spec.m_to)) throw Error("sequence ends are not Farey adjacent");
  HandleChart c0 = handle_chart(s, spec.handle, spec.m_from);
  const auto& m = c0.matrix;
  // m has det 1; its inverse applied to m_to is an integer slope (k, 1).
  long p = m[3] * spec.m_to.p - m[1] * spec.m_to.q, q = -m[2] * spec.m_to.p + m[0] * spec.m_to.q;
  if (q < 0) p = -p, q = -q;
  if (q != 1) throw Error("sequence chart failed");
  HandleChart c = compose(s, c0, spec.handle, true, static_cast<int>(p));
  if (!(c.apply(Slope(0, 1)) == spec.m_to) || !(c.apply(Slope(1, 0)) == spec.m_from))
    throw Error("sequence chart failed");
  return c;
}

SpiralLamination sequence_lamination(const LaminationSeqSpec& spec, int j) {
  SurfacePresentation s(2);
  HandleChart c = sequence_chart(s, spec);
  HandleChart psi = j >= 0 ? compose(s, c, spec.handle, false, j) : compose(s, c, spec.handle, true, -j);
  int other = 3 - spec.handle;
  SpiralLamination nu;
  nu.closed = {CurveClass(handle_boundary(spec.handle)), CurveClass(Word{gen_a(other)})};
  nu.pieces.push_back(handle_piece(s, spec.handle, psi));
  nu.pieces.push_back(handle_other_pants(other));
  return nu;
}

SpiralLamination sequence_limit(const LaminationSeqSpec& spec, int end) {
  SurfacePresentation s(2);
  HandleChart c = sequence_chart(s, spec);
  int other = 3 - spec.handle;
  SpiralLamination nu;
  nu.pieces.push_back(handle_limit_piece(s, spec.handle, c, end));
  nu.pieces.push_back(handle_other_pants(other));
  nu.closed = nu.pieces[0].boundary;
  nu.closed.push_back(CurveClass(Word{gen_a(other)}));
  return nu;
}

Selector spiral_selector(const HolonomyRep& domain, const Word& vertex, const Word& other) {
  FixedPair f = fixed_pair(quad::evaluate_quad(domain, vertex));
  FixedPair g = fixed_pair(quad::evaluate_quad(domain, other));
  real r = f.repelling.re, a = f.attracting.re;
  auto margin = [&](real w) { return std::min(quad::qabs(w - r), quad::qabs(w - a)); };
  real w = margin(g.attracting.re) >= margin(g.repelling.re) ? g.attracting.re : g.repelling.re;
  bool left = !between(r, a, w) != (r > a);
  return left == kLeftIsAttracting ? Selector::attracting : Selector::repelling;
}

PleatedSurface realize(const HolonomyRep& domain, const HolonomyRep& rho, const SpiralLamination& nu,
                       const LoxodromicityReport* certificate) {
  if (!domain.fuchsian()) throw Error("domain structure is not Fuchsian");
  PleatedSurface b;
  b.domain = domain.realified().conjugate(generic_frame());
  b.rho = rho.conjugate(generic_frame());
  b.lamination = nu;
  std::vector<std::size_t> local, first;
  std::vector<Word> shift;
  for (std::size_t pi = 0; pi < nu.pieces.size(); ++pi) {
    const auto& piece = nu.pieces[pi];
    if (piece.triangles.size() != 2 || piece.pairing.size() != 2)
      throw Error("each piece must carry two ideal triangles and their pairings");
    first.push_back(b.gallery.size());
    for (std::size_t t = 0; t < piece.triangles.size(); ++t) {
      const auto& tri = piece.triangles[t];
      GalleryTriangle g;
      g.piece = static_cast<int>(pi);
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& spec = tri[i];
        for (const HolonomyRep* r : {&b.domain, &b.rho}) {
          auto cls = classify(r->evaluate(spec.core));
          if (cls.type != MobiusType::loxodromic || cls.borderline)
            throw Error("vertex core " + format_word(spec.core) + " is not loxodromic");
        }
        b.longest_core = std::max(b.longest_core, static_cast<int>(spec.core.size()));
      }
      Word sh = best_translate(b.domain, tri, piece.gens);
      for (std::size_t i = 0; i < 3; ++i) g.v[i].spec = {free_reduce(concat(sh, tri[i].conj)), tri[i].core};
      for (std::size_t i = 0; i < 3; ++i)
        g.v[i].selector = spiral_selector(b.domain, element(g.v[i].spec, {}), element(g.v[(i + 1) % 3].spec, {}));
      b.gallery.push_back(g);
      local.push_back(t);
      shift.push_back(sh);
    }
  }
  if (certificate && (!certificate->certified || certificate->radius < b.longest_core))
    throw Error("insufficient certification radius: need " + std::to_string(b.longest_core));
  for (std::size_t k = 0; k < b.gallery.size(); ++k) {
    QTriangle q = triangle_points(b, static_cast<int>(k), {});
    auto& g = b.gallery[k];
    for (std::size_t i = 0; i < 3; ++i) {
      g.v[i].domain = static_cast<double>(q.u[i]);
      g.v[i].target = ExtPoint(q.v[i].to_cplx());
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        if (chordal_distance(g.v[i].target, g.v[j].target) <= 1e-8)
          throw Error("vertex collision in triangle " + std::to_string(k) +
                      ": fixed points of non-commuting loxodromics coincide");
  }
  // Pairings transported to the translated triangles, then checked numerically.
  b.adjacency.resize(b.gallery.size());
  for (std::size_t k = 0; k < b.gallery.size(); ++k) {
    const auto& piece = nu.pieces[static_cast<std::size_t>(b.gallery[k].piece)];
    QTriangle here = triangle_points(b, static_cast<int>(k), {});
    for (std::size_t e = 0; e < 3; ++e) {
      const auto& pr = piece.pairing.at(local[k])[e];
      std::size_t m = first[static_cast<std::size_t>(b.gallery[k].piece)] + static_cast<std::size_t>(pr.tri);
      Word deck = free_reduce(concat({shift[k], pr.deck, inverse(shift[m])}));
      b.adjacency[k][e] = {deck, static_cast<int>(m), pr.edge};
      QTriangle there = triangle_points(b, static_cast<int>(m), deck);
      real u = here.u[(e + 1) % 3], v = here.u[(e + 2) % 3];
      std::size_t f = static_cast<std::size_t>(pr.edge);
      real x = there.u[(f + 1) % 3], y = there.u[(f + 2) % 3];
      if (!((close(x, u) && close(y, v)) || (close(x, v) && close(y, u))))
        throw Error("gallery adjacency not closed at triangle " + std::to_string(k));
      if (between(u, v, here.u[e]) == between(u, v, there.u[f])) throw Error("adjacent triangles overlap");
    }
  }
  return b;
}

std::vector<PleatedSample> sample_battery(const PleatedSurface& b, int n, const std::vector<int>& tris) {
  std::vector<int> use = tris;
  if (use.empty())
    for (std::size_t k = 0; k < b.gallery.size(); ++k) use.push_back(static_cast<int>(k));
  auto pts = model_points();
  std::vector<PleatedSample> out;
  for (int i = 0; i < n; ++i) {
    int tri = use[static_cast<std::size_t>(i) % use.size()];
    cplx w = pts[(static_cast<std::size_t>(i) / use.size()) % pts.size()];
    QTriangle q = triangle_points(b, tri, {});
    out.push_back({tri, model_to_domain(q.u, w)});
  }
  return out;
}

H3Point evaluate(const PleatedSurface& b, int tri, const H2Point& x, const Word& deck) {
  return image(triangle_points(b, tri, free_reduce(deck)), x);
}

bool in_triangle(const PleatedSurface& b, int tri, const H2Point& x, const Word& deck) {
  return contains(triangle_points(b, tri, free_reduce(deck)), to_q(x));
}

double equivariance_residual(const PleatedSurface& b, const std::vector<PleatedSample>& samples,
                             const std::vector<Word>& gens) {
  double worst = 0.0;
  for (const auto& s : samples) {
    if (s.tri < 0 || static_cast<std::size_t>(s.tri) >= b.gallery.size() || !in_triangle(b, s.tri, s.x))
      throw Error("sample outside gallery");
    H3Point bx = evaluate(b, s.tri, s.x);
    for (const auto& g : gens) {
      H2Point gx = apply_real(b.domain.evaluate(g), s.x);
      H3Point lhs = evaluate(b, s.tri, gx, g);
      H3Point rhs = apply(b.rho.evaluate(g), bx);
      worst = std::max(worst, dist_h3(lhs, rhs));
    }
  }
  return worst;
}

std::vector<EdgeBend> bending_angles(const PleatedSurface& b) {
  std::vector<EdgeBend> out;
  for (std::size_t k = 0; k < b.gallery.size(); ++k) {
    QTriangle here = triangle_points(b, static_cast<int>(k), {});
    for (std::size_t e = 0; e < 3; ++e) {
      const auto& adj = b.adjacency[k][e];
      if (std::make_pair(static_cast<int>(k), static_cast<int>(e)) > std::make_pair(adj.tri, adj.edge)) continue;
      QTriangle there = triangle_points(b, adj.tri, adj.deck);
      auto ext = [](const Qc& z) { return ExtPoint(z.to_cplx()); };
      double angle = dihedral_angle(ext(here.v[(e + 1) % 3]), ext(here.v[(e + 2) % 3]), ext(here.v[e]),
                                    ext(there.v[static_cast<std::size_t>(adj.edge)]));
      out.push_back({static_cast<int>(k), static_cast<int>(e), adj.tri, adj.edge, adj.deck, angle});
    }
  }
  return out;
}

double stratum_isometry_defect(const PleatedSurface& b) {
  const std::array<cplx, 3> markers{cplx(0.0, 0.0), std::polar(0.5, 0.3), std::polar(0.6, 2.5)};
  double worst = 0.0;
  for (std::size_t k = 0; k < b.gallery.size(); ++k) {
    QTriangle q = triangle_points(b, static_cast<int>(k), {});
    std::array<H2Point, 3> x;
    std::array<H3Point, 3> y;
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] = model_to_domain(q.u, markers[i]);
      y[i] = image(q, x[i]);
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        worst = std::max(worst, std::abs(dist_h2(x[i], x[j]) - dist_h3(y[i], y[j])));
  }
  return worst;
}

double plane_deviation(const PleatedSurface& b, const std::vector<PleatedSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    H3Point p = evaluate(b, s.tri, s.x);
    worst = std::max(worst, std::asinh(std::abs(p.y) / p.t));
  }
  return worst;
}

Location locate(const PleatedSurface& b, const H2Point& x, int start, int max_steps) {
  QTriangle q = triangle_points(b, start, {});
  Qc p0 = to_q(model_to_domain(q.u, 0.0)), px = to_q(x);
  Location loc{{}, start, 0};
  int entry = -1;
  while (true) {
    if (contains(q, px)) return loc;
    int exit = -1;
    for (int e = 0; e < 3; ++e) {
      if (e == entry) continue;
      real u = q.u[static_cast<std::size_t>((e + 1) % 3)], v = q.u[static_cast<std::size_t>((e + 2) % 3)];
      if (inside_disk(u, v, p0) != inside_disk(u, v, px)) {
        exit = e;
        break;
      }
    }
    if (exit < 0) throw Error("point location left the lamination's region");
    const auto& adj = b.adjacency[static_cast<std::size_t>(loc.tri)][static_cast<std::size_t>(exit)];
    loc.deck = free_reduce(concat(loc.deck, adj.deck));
    loc.tri = adj.tri;
    entry = adj.edge;
    if (++loc.steps > max_steps) throw Error("point location exceeded its step cap");
    q = triangle_points(b, loc.tri, loc.deck);
  }
}

H3Point pleated_map(const PleatedSurface& b, const H2Point& x, int start) {
  Location loc = locate(b, x, start);
  return evaluate(b, loc.tri, x, loc.deck);
}

ConvergenceTable convergence_experiment(const FNCoordinates& fn, const LaminationSeqSpec& spec, int jmin, int jmax,
                                        int samples, int tail_from) {
  if (jmin > jmax) throw Error("empty j range");
  FNCoordinates flat = fn;
  std::fill(flat.bends.begin(), flat.bends.end(), 0.0);
  HolonomyRep domain = build_from_fn(flat);
  HolonomyRep rho = build_from_fn(fn);
  std::optional<PleatedSurface> plus, minus;
  std::vector<PleatedSample> sp, sm;
  if (jmax >= 0) {
    plus = realize(domain, rho, sequence_limit(spec, 1));
    sp = sample_battery(*plus, samples, {0, 1});
  }
  if (jmin < 0) {
    minus = realize(domain, rho, sequence_limit(spec, -1));
    sm = sample_battery(*minus, samples, {0, 1});
  }
  auto row = [&](int j) {
    ConvergenceRow r;
    r.j = j;
    try {
      PleatedSurface b = realize(domain, rho, sequence_lamination(spec, j));
      const PleatedSurface& target = j >= 0 ? *plus : *minus;
      const auto& ss = j >= 0 ? sp : sm;
      for (const auto& s : ss)
        r.distance = std::max(r.distance, dist_h3(pleated_map(b, s.x), evaluate(target, s.tri, s.x)));
    } catch (const Error& e) {
      r.ok = false;
      r.failure = e.what();
    }
    return r;
  };
  std::vector<std::future<ConvergenceRow>> jobs;
  for (int j = jmin; j <= jmax; ++j) jobs.push_back(std::async(std::launch::async, row, j));
  ConvergenceTable t;
  t.tail_from = tail_from;
  for (auto& f : jobs) t.rows.push_back(f.get());
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const auto& p = t.rows[k - 1];
    const auto& c = t.rows[k];
    if (p.j >= tail_from && (!c.ok || !p.ok || c.distance > p.distance)) t.forward_nonincreasing = false;
    if (c.j <= -std::max(tail_from, 1) && (!c.ok || !p.ok || p.distance > c.distance)) t.backward_nonincreasing = false;
  }
  if (jmax >= 0) t.forward_final = t.rows.back().distance;
  if (jmin < 0) t.backward_final = t.rows.front().distance;
  return t;
}

}  // namespace glab
