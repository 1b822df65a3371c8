#include <cmath>

#include "doctest.h"
#include "glab/topology.hpp"

using namespace glab;

namespace {

const HolonomyRep& standard_rep() {
  static HolonomyRep rho = build_from_fn(FNCoordinates{});
  return rho;
}

CurveOracle& oracle() {
  static CurveOracle o(standard_rep(), 3);
  return o;
}

PantsDecomposition pd(std::initializer_list<const char*> names) {
  PantsDecomposition p;
  for (const char* n : names) p.curves.push_back(CurveClass(n));
  return p;
}

double trsq(const HolonomyRep& r, const Word& w) { return std::abs(r.evaluate(w).trace_sq()); }

const char* kProbeWords[] = {"b1", "a1 b1 b2", "b1 B2 a2 a1", "a1 a2", "b1 b2", "a2 b1", "a1 B1 a2 b2 b2"};

}  // namespace

TEST_CASE("dehn twist basics") {
  SurfacePresentation s(2);
  CurveClass a1("a1"), b1("b1"), a2("a2");
  CHECK(dehn_twist(s, a1, b1, 0) == b1);
  CHECK(dehn_twist(s, a1, a2, 3) == a2);
  CurveClass w = dehn_twist(s, a1, b1, 1);
  CHECK(w == CurveClass("b1 a1"));
  auto& o = oracle();
  CHECK(o.intersection(w, a1).count == 1);
  CHECK(is_simple(o, w));
  CHECK_THROWS_WITH_AS(dehn_twist(s, CurveClass("a1 a2"), b1, 1), doctest::Contains("twist basis"), Error);
}

TEST_CASE("left twists agree with the geometric FN twist") {
  SurfacePresentation s(2);
  FNCoordinates base;
  auto r0 = build_from_fn(base);
  const char* curves[] = {"a1", "a2", "a1 b1 A1 B1"};
  for (std::size_t k = 0; k < 3; ++k) {
    FNCoordinates f = base;
    f.twists[k] += base.lengths[k];
    auto r1 = build_from_fn(f);
    CurveClass c(curves[k]);
    for (const char* x : kProbeWords) {
      Word w = parse_word(x);
      CHECK(trsq(r1, w) == doctest::Approx(trsq(r0, twist_word(s, c, w, 1))).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-chain relation fixes the boundary twist handedness") {
  SurfacePresentation s(2);
  auto r = standard_rep();
  CurveClass a1("a1"), b1("b1"), c("a1 b1 A1 B1");
  for (const char* x : kProbeWords) {
    Word w = parse_word(x), u = w;
    for (int k = 0; k < 6; ++k) u = twist_word(s, a1, twist_word(s, b1, u, 1), 1);
    CHECK(trsq(r, u) == doctest::Approx(trsq(r, twist_word(s, c, w, 1))).epsilon(1e-9));
  }
}

TEST_CASE("twist powers compose") {
  SurfacePresentation s(2);
  auto& o = oracle();
  std::vector<CurveClass> span = {CurveClass("a1"), CurveClass("b1"), CurveClass("a2"), CurveClass("b2"),
                                  CurveClass("a1 b1"), CurveClass("a1 a2")};
  CurveClass t("b1 b2");
  for (const char* name : {"a1", "b1", "a1 b1 A1 B1"}) {
    CurveClass c(name);
    for (int m : {-1, 1, 2})
      for (int n : {-2, 1}) {
        CurveClass x = dehn_twist(s, c, dehn_twist(s, c, t, n), m);
        CurveClass y = dehn_twist(s, c, t, m + n);
        for (const auto& z : span) CHECK(o.count(x, z) == o.count(y, z));
      }
  }
}

TEST_CASE("curve predicates") {
  auto& o = oracle();
  CHECK(is_simple(o, CurveClass("a1")));
  CHECK(is_simple(o, CurveClass("a1 a2")));
  CHECK_FALSE(is_simple(o, CurveClass("a1 a1")));
  CHECK_FALSE(is_simple(o, CurveClass("a1 b1 b1 a1 a1 b1")));
  CHECK(is_separating(o, CurveClass("a1 b1 A1 B1")));
  CHECK_FALSE(is_separating(o, CurveClass("a1")));
  CHECK(isotopic(o, CurveClass("a1 b1 A1 B1"), CurveClass("B2 A2 b2 a2")));
}

TEST_CASE("pants decomposition validation") {
  auto& o = oracle();
  auto ok = validate_pants_decomposition(o, pd({"a1", "a2", "a1 b1 A1 B1"}));
  CHECK(ok.valid);
  CHECK(ok.graph.trivalent());
  CHECK(ok.graph.edges.size() == 3);
  auto two = validate_pants_decomposition(o, pd({"a1", "a2"}));
  CHECK_FALSE(two.valid);
  REQUIRE(!two.violations.empty());
  CHECK(two.violations[0] == "count");
  auto rep = validate_pants_decomposition(o, pd({"a1", "a1", "a2"}));
  CHECK_FALSE(rep.valid);
  REQUIRE(!rep.violations.empty());
  CHECK(rep.violations[0].rfind("parallel", 0) == 0);
  CHECK_FALSE(validate_pants_decomposition(o, pd({"a1", "b1", "a2"})).valid);
  auto theta = validate_pants_decomposition(o, pd({"a1", "a2", "a1 a2"}));
  CHECK(theta.valid);
  for (const auto& e : theta.graph.edges) CHECK(e.first != e.second);
}

TEST_CASE("elementary moves") {
  auto& o = oracle();
  auto p = pd({"a1", "a2", "a1 b1 A1 B1"});
  auto torus = enumerate_elementary_moves(o, p, CurveClass("a1"), 2);
  REQUIRE(!torus.empty());
  bool has_b1 = false;
  for (const auto& m : torus) {
    CHECK(m.kind == MoveKind::torus);
    CHECK(o.count(m.removed, m.added) == 1);
    has_b1 = has_b1 || isotopic(o, m.added, CurveClass("b1"));
    auto q = apply_move(o, p, m);
    CHECK(validate_pants_decomposition(o, q).valid);
    CHECK(same_decomposition(o, apply_move(o, q, reverse_move(m)), p));
  }
  CHECK(has_b1);
  auto sphere = enumerate_elementary_moves(o, p, CurveClass("a1 b1 A1 B1"), 2);
  REQUIRE(!sphere.empty());
  bool has_a1a2 = false;
  for (const auto& m : sphere) {
    has_a1a2 = has_a1a2 || isotopic(o, m.added, CurveClass("a1 a2"));
    CHECK(m.kind == MoveKind::sphere);
    CHECK(o.count(m.removed, m.added) == 2);
    CHECK(m.region.boundary.size() == 4);
  }
  CHECK(has_a1a2);
  CHECK(enumerate_elementary_moves(o, p, CurveClass("a1"), 0).empty());
  CHECK_THROWS_AS(enumerate_elementary_moves(o, p, CurveClass("b1"), 2), Error);
}

TEST_CASE("pants graph path") {
  auto& o = oracle();
  auto p0 = pd({"a1", "a2", "a1 b1 A1 B1"});
  CHECK(pants_graph_path(o, p0, p0, {}).empty());
  auto p1 = pd({"b1", "a2", "a1 b1 A1 B1"});
  CHECK(pants_graph_path(o, p0, p1, {}).size() == 1);
  auto target = pd({"b1", "b2", "a1 b1 A1 B1"});
  // Exhaustive BFS at word cap 1 finds nothing shorter than two moves.
  CHECK_THROWS_AS(pants_graph_path(o, p0, target, {1, 1}), CapExhausted);
  auto path = pants_graph_path(o, p0, target, {3, 1});
  REQUIRE(path.size() == 2);
  auto cur = p0;
  for (const auto& m : path) {
    int i = o.count(m.removed, m.added);
    CHECK((i == 1 || i == 2));
    cur = apply_move(o, cur, m);
    CHECK(validate_pants_decomposition(o, cur).valid);
  }
  CHECK(same_decomposition(o, cur, target));
}

TEST_CASE("train track carrying") {
  TrainTrack annulus;
  annulus.switches = 1;
  annulus.branches.push_back({0, 0, 1, 0, {gen_a(1)}});
  REQUIRE(annulus.valid());
  auto c = traintrack_carries(annulus, {{CurveClass("a1"), 1}});
  CHECK(c.carried);
  CHECK(c.weights == std::vector<long>{1});

  auto t = standard_track(2);
  CHECK(t.valid());
  CHECK(t.max_valence() == 3);
  auto empty = traintrack_carries(t, {});
  CHECK(empty.carried);
  CHECK(std::all_of(empty.weights.begin(), empty.weights.end(), [](long w) { return w == 0; }));

  SurfacePresentation s(2);
  std::vector<std::vector<long>> rows;
  for (int n = 0; n <= 5; ++n) {
    CurveClass x = dehn_twist(s, CurveClass("a1"), CurveClass("b1"), n);
    auto r = traintrack_carries(t, {{x, 2}});
    REQUIRE(r.carried);
    CHECK(switch_conditions_hold(t, r.weights));
    // Direct tracing: each a1 letter crosses the a-branch, each b1 the b-branch.
    long na = 0, nb = 0;
    for (int l : x.word) (std::abs(l) == gen_a(1) ? na : nb)++;
    CHECK(r.weights[1] == 2 * na);
    CHECK(r.weights[2] == 2 * nb);
    CHECK(r.weights[0] == 2 * (na + nb));
    rows.push_back(r.weights);
  }
  for (std::size_t n = 2; n < rows.size(); ++n)
    for (std::size_t k = 0; k < rows[n].size(); ++k) CHECK(rows[n][k] - 2 * rows[n - 1][k] + rows[n - 2][k] == 0);
  CHECK(rows[1][1] - rows[0][1] == 2);
  auto fail = traintrack_carries(t, {{CurveClass("a1 B1"), 1}});
  CHECK_FALSE(fail.carried);
  CHECK(!fail.failure.empty());
}
