#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "glab/pleated.hpp"

using namespace glab;

namespace {

const std::vector<Word> kGens{parse_word("a1"), parse_word("b1"), parse_word("a2"), parse_word("b2")};

FNCoordinates bent(double eps, int curve = 0) {
  FNCoordinates f;
  f.bends = {0.0, 0.0, 0.0};
  f.bends[static_cast<std::size_t>(curve)] = eps;
  return f;
}

LaminationSeqSpec handle_one() {
  LaminationSeqSpec s;
  s.m_from = Slope(1, 0);
  s.m_to = Slope(0, 1);
  return s;
}

PleatedSurface flipped(PleatedSurface b, int tri, int v) {
  auto& s = b.gallery[static_cast<std::size_t>(tri)].v[static_cast<std::size_t>(v)].selector;
  s = s == Selector::attracting ? Selector::repelling : Selector::attracting;
  return b;
}

// Brute-force point location: every translate by a word of the handle group
// up to length r, every triangle.
std::optional<H3Point> brute_map(const PleatedSurface& b, const H2Point& x, int r) {
  std::vector<Word> words{{}};
  for (std::size_t lo = 0, hi = 1, len = 0; len < static_cast<std::size_t>(r); ++len, lo = hi, hi = words.size())
    for (std::size_t k = lo; k < hi; ++k)
      for (int g : {1, -1, 2, -2})
        if (words[k].empty() || words[k].back() != -g) {
          Word w = words[k];
          w.push_back(g);
          words.push_back(w);
        }
  for (const Word& w : words)
    for (std::size_t k = 0; k < b.gallery.size(); ++k)
      if (in_triangle(b, static_cast<int>(k), x, w)) return evaluate(b, static_cast<int>(k), x, w);
  return std::nullopt;
}

}  // namespace

TEST_CASE("standard realization: four triangles, deterministic, Fuchsian embedding") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  auto nu = standard_spiral_lamination();
  CHECK(nu.triangle_count() == 4);
  auto b = realize(dom, dom, nu);
  REQUIRE(b.gallery.size() == 4);
  auto again = realize(dom, dom, nu);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(b.gallery[k].v[i].selector == again.gallery[k].v[i].selector);
      CHECK(b.gallery[k].v[i].domain == again.gallery[k].v[i].domain);
      CHECK(b.gallery[k].v[i].target == again.gallery[k].v[i].target);
      CHECK(b.gallery[k].v[i].spec.conj == again.gallery[k].v[i].spec.conj);
    }
  auto samples = sample_battery(b, 50);
  CHECK(samples.size() == 50);
  CHECK(plane_deviation(b, samples) < 1e-9);
  CHECK(equivariance_residual(b, samples, kGens) < 1e-8);
  CHECK(stratum_isometry_defect(b) < 1e-9);
  for (const auto& e : bending_angles(b)) CHECK(e.angle < 1e-9);
  CHECK(bending_angles(b).size() == 6);
}

TEST_CASE("adjacency closes up: every pairing is an involution with shared endpoints") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  HolonomyRep rho = build_from_fn(bent(0.05));
  for (const auto& nu : {standard_spiral_lamination(), sequence_lamination(handle_one(), 0),
                         sequence_lamination(handle_one(), 7), sequence_lamination(handle_one(), -5),
                         sequence_limit(handle_one(), 1), sequence_limit(handle_one(), -1)}) {
    auto b = realize(dom, rho, nu);
    for (std::size_t k = 0; k < b.gallery.size(); ++k)
      for (std::size_t e = 0; e < 3; ++e) {
        const auto& a = b.adjacency[k][e];
        const auto& back = b.adjacency[static_cast<std::size_t>(a.tri)][static_cast<std::size_t>(a.edge)];
        CHECK(back.tri == static_cast<int>(k));
        CHECK(back.edge == static_cast<int>(e));
        CHECK(free_reduce(concat(a.deck, back.deck)).empty());
      }
  }
}

TEST_CASE("equivariance on bent representations and conjugation invariance") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  HolonomyRep rho = build_from_fn(bent(0.05));
  for (const auto& nu : {standard_spiral_lamination(), sequence_lamination(handle_one(), 0),
                         sequence_lamination(handle_one(), 4), sequence_limit(handle_one(), -1)}) {
    auto b = realize(dom, rho, nu);
    auto samples = sample_battery(b, 50);
    double r = equivariance_residual(b, samples, kGens);
    CHECK(r < 1e-8);
    CHECK(stratum_isometry_defect(b) < 1e-9);
    auto c = realize(dom, rho.conjugate(MobiusMap(cplx(1.0, 0.2), cplx(0.3, -0.1), cplx(0.1, 0.4), cplx(0.9, 0.0))), nu);
    CHECK(std::abs(equivariance_residual(c, sample_battery(c, 50), kGens) - r) < 1e-10);
  }
}

TEST_CASE("flipped selector is detected") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  auto b = realize(dom, build_from_fn(bent(0.05)), sequence_lamination(handle_one(), 0));
  double worst = 0.0;
  for (int t = 0; t < 2; ++t)
    for (int v = 0; v < 3; ++v) {
      auto c = flipped(b, t, v);
      worst = std::max(worst, equivariance_residual(c, sample_battery(c, 50), kGens));
    }
  CHECK(worst > 1e-2);
  // Samples of the unflipped triangle no longer lie in the flipped one.
  CHECK_THROWS_WITH_AS(equivariance_residual(flipped(b, 0, 0), sample_battery(b, 50), kGens), "sample outside gallery",
                       Error);
}

TEST_CASE("bending angles grow with the bend and vanish at zero") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  auto nu = sequence_lamination(handle_one(), 0);
  std::vector<double> prev;
  for (double eps : {0.0, 0.02, 0.04, 0.06, 0.08, 0.1}) {
    auto b = realize(dom, build_from_fn(bent(eps)), nu);
    auto bends = bending_angles(b);
    std::vector<double> now;
    for (const auto& e : bends) now.push_back(e.angle);
    if (eps == 0.0)
      for (double a : now) CHECK(a < 1e-9);
    if (!prev.empty())
      for (std::size_t i = 0; i < now.size(); ++i) CHECK(now[i] >= prev[i] - 1e-12);
    prev = now;
    // Listing the neighbour first gives the same angle.
    for (const auto& e : bends) {
      if (!e.deck.empty()) continue;
      const auto& t = b.gallery[static_cast<std::size_t>(e.tri)].v;
      const auto& o = b.gallery[static_cast<std::size_t>(e.other)].v;
      std::size_t i = static_cast<std::size_t>(e.edge);
      const ExtPoint &u = t[(i + 1) % 3].target, &v = t[(i + 2) % 3].target;
      const ExtPoint &w1 = t[i].target, &w2 = o[static_cast<std::size_t>(e.other_edge)].target;
      CHECK(dihedral_angle(u, v, w1, w2) == doctest::Approx(e.angle).epsilon(1e-9));
      CHECK(dihedral_angle(u, v, w2, w1) == doctest::Approx(e.angle).epsilon(1e-9));
    }
  }
  CHECK(*std::max_element(prev.begin(), prev.end()) > 1e-3);
}

TEST_CASE("point location agrees with brute-force search") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  HolonomyRep rho = build_from_fn(bent(0.05));
  auto target = realize(dom, rho, sequence_limit(handle_one(), 1));
  auto samples = sample_battery(target, 12, {0, 1});
  for (int j : {0, 1, 2}) {
    auto b = realize(dom, rho, sequence_lamination(handle_one(), j));
    for (const auto& s : samples) {
      auto brute = brute_map(b, s.x, 6);
      REQUIRE(brute.has_value());
      H3Point walk = pleated_map(b, s.x);
      CHECK(dist_h3(walk, *brute) < 1e-9);
    }
  }
}

TEST_CASE("selectors are locally constant under small FN perturbations") {
  FNCoordinates f;
  auto nu = sequence_lamination(handle_one(), 2);
  auto base = realize(build_from_fn(f), build_from_fn(f), nu);
  for (double d : {-5e-4, 5e-4}) {
    FNCoordinates g = f;
    g.lengths[0] += d;
    g.twists[2] += d;
    auto p = realize(build_from_fn(g), build_from_fn(g), nu);
    for (std::size_t k = 0; k < base.gallery.size(); ++k)
      for (std::size_t i = 0; i < 3; ++i) CHECK(p.gallery[k].v[i].selector == base.gallery[k].v[i].selector);
  }
}

TEST_CASE("realization errors") {
  HolonomyRep dom = build_from_fn(FNCoordinates{});
  SpiralLamination bad;
  LaminationPiece p = pants_piece(parse_word("a1"), parse_word("b1 A1 B1"));
  p.triangles[0][1] = VertexSpec{{}, parse_word("a1 a1")};
  bad.pieces.push_back(p);
  CHECK_THROWS_WITH_AS(realize(dom, dom, bad), doctest::Contains("vertex collision"), Error);
  LoxodromicityReport cert;
  cert.radius = 2;
  cert.certified = true;
  CHECK_THROWS_WITH_AS(realize(dom, dom, standard_spiral_lamination(), &cert),
                       doctest::Contains("insufficient certification radius"), Error);
  cert.radius = 4;
  CHECK_NOTHROW(realize(dom, dom, standard_spiral_lamination(), &cert));
  LaminationSeqSpec sphere = handle_one();
  sphere.kind = FareyCase::sphere;
  CHECK_THROWS_AS(sequence_lamination(sphere, 0), Error);
}

TEST_CASE("sequence charts send the base slopes to the sequence ends") {
  SurfacePresentation s(2);
  for (auto [from, to] : {std::pair{Slope(1, 0), Slope(0, 1)}, std::pair{Slope(1, 2), Slope(1, 3)},
                          std::pair{Slope(0, 1), Slope(1, 1)}, std::pair{Slope(-2, 3), Slope(-1, 1)}}) {
    LaminationSeqSpec spec;
    spec.m_from = from;
    spec.m_to = to;
    HandleChart c = sequence_chart(s, spec);
    CHECK(c.apply(Slope(1, 0)) == from);
    CHECK(c.apply(Slope(0, 1)) == to);
    CHECK(c.apply(commutator(Word{1}, Word{2})) == commutator(Word{1}, Word{2}));
  }
}

TEST_CASE("convergence toward both ends on the bent representation") {
  auto t = convergence_experiment(bent(0.05), handle_one(), -12, 12, 24, 0);
  REQUIRE(t.rows.size() == 25);
  for (const auto& r : t.rows) CHECK(r.ok);
  CHECK(t.forward_nonincreasing);
  CHECK(t.backward_nonincreasing);
  CHECK(t.forward_final < 1e-2);
  CHECK(t.backward_final < 1e-2);
  // Geometric decay at a rate set by the twist curves.
  CHECK(t.rows[24].distance < 1e-3 * t.rows[16].distance);
  CHECK(t.rows[0].distance < 1e-3 * t.rows[8].distance);
  auto f = convergence_experiment(FNCoordinates{}, handle_one(), -3, 3, 24, 0);
  for (const auto& r : f.rows) CHECK(r.distance < 1e-8);
}
