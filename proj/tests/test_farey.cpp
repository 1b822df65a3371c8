#include <cstdlib>

#include "doctest.h"
#include "glab/farey.hpp"

using namespace glab;

namespace {

Slope S(const char* s) { return Slope::parse(s); }

FareyTriangle T(const char* x, const char* y, const char* z) { return {S(x), S(y), S(z)}; }

CurveOracle& oracle() {
  static HolonomyRep rho = build_from_fn(FNCoordinates{});
  static CurveOracle o(rho, 3);
  return o;
}

// Integer matrix oracle: the left twist along slope m as an SL(2, Z) matrix.
Slope matrix_twist(const Slope& m, const Slope& v, int n) {
  long a = 1 - n * m.p * m.q, b = n * m.p * m.p, c = -n * m.q * m.q, d = 1 + n * m.p * m.q;
  return {a * v.p + b * v.q, c * v.p + d * v.q};
}

LaminationSeqSpec spec(const char* from, const char* to, FareyCase kind = FareyCase::torus) {
  LaminationSeqSpec s;
  s.kind = kind;
  s.m_from = S(from);
  s.m_to = S(to);
  s.boundary = {CurveClass("a1 b1 A1 B1")};
  return s;
}

long weighted(const CurveOracle& o, const std::vector<Leaf>& n, const CurveClass& x) {
  long t = 0;
  for (const auto& l : n) t += static_cast<long>(l.weight) * o.count(l.curve, x);
  return t;
}

}  // namespace

TEST_CASE("slopes") {
  CHECK(S("inf") == Slope(1, 0));
  CHECK(S("-2/4") == Slope(-1, 2));
  CHECK(Slope(3, -5).str() == "-3/5");
  CHECK(Slope(-1, 0).str() == "inf");
  CHECK(farey_adjacent(S("1/2"), S("2/3")));
  CHECK_FALSE(farey_adjacent(S("1/3"), S("2/3")));
  CHECK_THROWS_AS(T("0", "1", "2"), Error);
}

TEST_CASE("diagonal exchange") {
  auto t = T("0", "1", "inf");
  CHECK(diagonal_exchange(t, S("0"), S("1")) == T("0", "1", "1/2"));
  CHECK(diagonal_exchange(t, S("0"), S("inf")) == T("0", "inf", "-1"));
  auto u = diagonal_exchange(t, S("1"), S("inf"));
  CHECK(u == T("1", "inf", "2"));
  CHECK(diagonal_exchange(u, S("1"), S("inf")) == t);
  CHECK_THROWS_AS(diagonal_exchange(t, S("0"), S("1/2")), Error);
}

TEST_CASE("twists as exchanges") {
  auto t = T("0", "1", "inf");
  for (const char* m : {"0", "1", "inf"}) {
    for (int n = 1; n <= 3; ++n) {
      auto path = twist_as_exchanges(t, S(m), n);
      REQUIRE(path.size() == static_cast<std::size_t>(n));
      FareyTriangle img(matrix_twist(S(m), t.s[0], n), matrix_twist(S(m), t.s[1], n), matrix_twist(S(m), t.s[2], n));
      CHECK(path.back().result == img);
      for (const auto& e : path) CHECK(e.x == S(m));
    }
    auto sph = twist_as_exchanges(t, S(m), 1, FareyCase::sphere);
    REQUIRE(sph.size() == 2);
    FareyTriangle img2(matrix_twist(S(m), t.s[0], 2), matrix_twist(S(m), t.s[1], 2), matrix_twist(S(m), t.s[2], 2));
    CHECK(sph.back().result == img2);
  }
  CHECK(twist_as_exchanges(t, S("0"), 0).empty());
  CHECK_THROWS_WITH_AS(twist_as_exchanges(t, S("0"), -1), "left twists only", Error);
  CHECK_THROWS_AS(twist_as_exchanges(t, S("2"), 1), Error);
}

TEST_CASE("interpolation path") {
  auto sp = spec("0", "inf");
  auto path = interpolation_path(sp, -2, 2);
  REQUIRE(path.size() == 5);
  // Hand-enumerated tree path.
  CHECK(path[0] == T("0", "-1/2", "-1/3"));
  CHECK(path[1] == T("0", "-1", "-1/2"));
  CHECK(path[2] == T("-1", "0", "inf"));
  CHECK(path[3] == T("0", "1", "inf"));
  CHECK(path[4] == T("1", "2", "inf"));
  CHECK(path[2].contains(S("0")));
  CHECK(path[2].contains(S("inf")));
  auto one = interpolation_path(sp, 0, 0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == pivot_triangle(sp));
  CHECK_THROWS_AS(interpolation_path(spec("1/2", "1/2"), 0, 0), Error);
  CHECK_THROWS_AS(interpolation_path(spec("0", "2/3"), 0, 0), Error);
}

TEST_CASE("interpolation path properties") {
  for (auto kind : {FareyCase::torus, FareyCase::sphere})
    for (auto [a, b] : {std::pair{"0", "inf"}, std::pair{"1/2", "1/3"}, std::pair{"-2", "-3/2"}}) {
      auto p = interpolation_path(spec(a, b, kind), -6, 6);
      auto q = interpolation_path(spec(b, a, kind), -6, 6);
      for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(p[k] == q[p.size() - 1 - k]);
        for (int x = 0; x < 3; ++x)
          for (int y = x + 1; y < 3; ++y) CHECK(farey_adjacent(p[k].s[static_cast<std::size_t>(x)], p[k].s[static_cast<std::size_t>(y)]));
        if (k > 0) {
          int shared = 0;
          for (const auto& v : p[k].s) shared += p[k - 1].contains(v);
          CHECK(shared == 2);
        }
      }
      for (std::size_t k = 1; k + 1 < p.size(); ++k) CHECK_FALSE(p[k - 1] == p[k + 1]);
      int st = twist_steps(kind);
      for (int j = st; j <= 6; ++j) {
        const auto& prev = p[static_cast<std::size_t>(6 + j - st)];
        FareyTriangle img(matrix_twist(S(b), prev.s[0], 1), matrix_twist(S(b), prev.s[1], 1), matrix_twist(S(b), prev.s[2], 1));
        if (kind == FareyCase::torus)
          CHECK(p[static_cast<std::size_t>(6 + j)] == img);
        else
          CHECK(p[static_cast<std::size_t>(6 + j)] ==
                FareyTriangle(matrix_twist(S(b), prev.s[0], 2), matrix_twist(S(b), prev.s[1], 2), matrix_twist(S(b), prev.s[2], 2)));
      }
    }
}

TEST_CASE("handle charts") {
  SurfacePresentation s(2);
  auto& o = oracle();
  std::vector<Slope> sl = {S("inf"), S("0"), S("1"), S("-1"), S("2/3"), S("-3/2")};
  for (const auto& x : sl) {
    CurveClass cx = slope_curve(s, 1, x);
    auto h = s.exponent_sums(cx.word);
    CHECK(std::labs(h[0]) == std::labs(x.p));
    CHECK(std::labs(h[1]) == std::labs(x.q));
    CHECK(h[0] * x.q == h[1] * x.p);
    CHECK(is_simple(o, cx));
    CHECK(disjoint(o, cx, CurveClass("a2")));
  }
  for (std::size_t i = 0; i < sl.size(); ++i)
    for (std::size_t j = i + 1; j < sl.size(); ++j)
      CHECK(o.count(slope_curve(s, 1, sl[i]), slope_curve(s, 1, sl[j])) == std::labs(farey_det(sl[i], sl[j])));
  CurveClass k("a1 b1 A1 B1");
  for (auto t : {T("0", "1", "inf"), T("1/2", "2/3", "3/5"), T("-1", "-1/2", "0")}) {
    auto ch = triangle_chart(s, 1, t);
    CHECK(FareyTriangle(ch.apply(S("inf")), ch.apply(S("0")), ch.apply(S("-1"))) == t);
    CHECK(ch.apply(k.word) == k.word);
  }
}

TEST_CASE("companion multiloop") {
  auto& o = oracle();
  auto sp = spec("inf", "0");
  CurveClass a2("a2"), b2("b2"), c("a1 b1 A1 B1"), a2b2("a2 b2");
  std::vector<Leaf> ni = {{CurveClass("b1"), 3}, {CurveClass("b2"), 3}, {CurveClass("b1 b2"), 3}};
  for (int j : {-2, -1, 0, 1, 3}) {
    auto n = companion_multiloop(o, sp, j);
    CHECK(n.k == 3);
    REQUIRE(n.pants.size() == 1);
    CHECK(n.pants[0].arcs == 9);
    CHECK(n.inside == interpolation_path(sp, j, j)[0]);
    // Outside the handle the multiloop agrees with N_i.
    for (const auto& x : {a2, b2, c, a2b2}) CHECK(weighted(o, n.leaves, x) == weighted(o, ni, x));
  }
  auto sph = companion_multiloop(o, spec("inf", "0", FareyCase::sphere), 2);
  CHECK(sph.k == 2);
  REQUIRE(sph.pants.size() == 2);
  for (const auto& p : sph.pants) CHECK(p.arcs == 6);
  auto lim = companion_multiloop(o, sp, 0).limit();
  REQUIRE(lim.limit);
  CHECK(lim.limit->core.size() == 2);
}
