#include <cmath>
#include <random>

#include "doctest.h"
#include "glab/fuchsian.hpp"
#include "glab/topology.hpp"

using namespace glab;

namespace {

const double kPi = std::acos(-1.0);

FNCoordinates fn(double l1, double l2, double lc, double t1 = 0, double t2 = 0, double tc = 0) {
  FNCoordinates f;
  f.lengths = {l1, l2, lc};
  f.twists = {t1, t2, tc};
  return f;
}

}  // namespace

TEST_CASE("FN construction on the standard point") {
  auto rho = build_from_fn(fn(2, 2, 2));
  CHECK(rho.relator_residual() < 1e-8);
  CHECK(rho.fuchsian());
  CHECK(rho.lifts_to_sl2());
  for (const auto& c : reference_curves()) CHECK(std::abs(geodesic_length(rho, c) - 2.0) < 1e-8);
}

TEST_CASE("FN fidelity on a random grid") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> len(0.5, 4.0), tw(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    auto f = fn(len(rng), len(rng), len(rng), tw(rng), tw(rng), tw(rng));
    auto rho = build_from_fn(f);
    CHECK(rho.relator_residual() < 1e-8);
    auto refs = reference_curves();
    for (int k = 0; k < 3; ++k) CHECK(std::abs(geodesic_length(rho, refs[static_cast<std::size_t>(k)]) - f.lengths[static_cast<std::size_t>(k)]) < 1e-8);
  }
}

TEST_CASE("degenerate FN data") {
  CHECK_THROWS_AS(build_from_fn(fn(1e-9, 2, 2)), Error);
  CHECK_THROWS_AS(build_from_fn(fn(-1, 2, 2)), Error);
}

TEST_CASE("twist by one length is a Dehn twist") {
  auto r0 = build_from_fn(fn(2, 2, 2));
  auto r1 = build_from_fn(fn(2, 2, 2, 2.0));
  CHECK(r0.generator(1).distance(r1.generator(1)) > 0.1);
  for (const auto& c : reference_curves()) CHECK(std::abs(geodesic_length(r0, c) - geodesic_length(r1, c)) < 1e-9);
  cplx t1 = r1.evaluate(parse_word("b1")).trace();
  cplx t0 = r0.evaluate(parse_word("a1 b1")).trace();
  CHECK(std::abs(t1 * t1 - t0 * t0) < 1e-9);
}

TEST_CASE("geodesic length") {
  HolonomyRep rho(2, {MobiusMap(2, 0, 0, 0.5), MobiusMap(3, 0, 1, 1.0 / 3), MobiusMap(), MobiusMap()});
  CurveClass a("a1");
  CHECK(geodesic_length(rho, a) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));
  auto std_rho = build_from_fn(fn(2, 2, 2));
  CurveClass w("a1 b1 b2");
  double l = geodesic_length(std_rho, w);
  CHECK(geodesic_length(std_rho, CurveClass(inverse(w.word))) == doctest::Approx(l).epsilon(1e-12));
  CHECK(std::abs(geodesic_length(std_rho, CurveClass(power(w.word, 2))) - 2 * l) < 1e-9);
  CHECK_THROWS_AS(geodesic_length(HolonomyRep(2, {MobiusMap(1, 1, 0, 1), MobiusMap(), MobiusMap(), MobiusMap()}), a), Error);
}

TEST_CASE("purely loxodromic scan") {
  auto rho = build_from_fn(fn(2, 2, 2));
  auto rep = purely_loxodromic_scan(rho, 4);
  CHECK(rep.certified);
  CHECK(rep.violations.empty());
  CHECK(rep.endpoint_violations.empty());
  HolonomyRep bad(2, {MobiusMap(1, 1, 0, 1), MobiusMap(2, 0, 0, 0.5), MobiusMap(3, 1, 2, 1), MobiusMap(1, 2, 1, 3)});
  auto r1 = purely_loxodromic_scan(bad, 1);
  CHECK_FALSE(r1.certified);
  REQUIRE_FALSE(r1.violations.empty());
  CHECK(r1.violations[0].type == MobiusType::parabolic);
}

TEST_CASE("shared endpoint evidence") {
  MobiusMap a(2, 0, 0, 0.5), b(3, 0, 1, 1.0 / 3);
  auto ev = endpoint_evidence(a, b);
  CHECK(ev.shares_endpoint);
  CHECK(std::abs(ev.commutator_trace - 2.0) < 1e-9);
  HolonomyRep rho(2, {a, b, MobiusMap(3, 1, 2, 1), MobiusMap(1, 2, 1, 3)});
  auto rep = purely_loxodromic_scan(rho, 1);
  CHECK_FALSE(rep.endpoint_violations.empty());
  auto ev2 = endpoint_evidence(MobiusMap(2, 0, 0, 0.5), MobiusMap(2, 1, 1, 1));
  CHECK_FALSE(ev2.shares_endpoint);
}

TEST_CASE("intersection oracle") {
  auto rho = build_from_fn(fn(2, 2, 2));
  CurveOracle o(rho, 3);
  CurveClass a1("a1"), b1("b1"), a2("a2"), b2("b2"), c("a1 b1 A1 B1");
  auto self = o.intersection(a1, a1);
  CHECK(self.count == 0);
  CHECK(self.parallel);
  CHECK(o.intersection(a1, a2).count == 0);
  CHECK(o.intersection(a1, c).count == 0);
  CHECK(o.intersection(a2, c).count == 0);
  auto h = o.intersection(a1, b1);
  CHECK(h.count == 1);
  CHECK(h.stable);
  CHECK(o.intersection(b1, a1).count == 1);
  CHECK(o.intersection(CurveClass("a1 b1 b1"), CurveClass("a1 a1 b1")).count == 3);
  CHECK(o.intersection(c, CurveClass("a1 a2")).count == 2);
  CHECK(o.intersection(CurveClass("b1 a1"), CurveClass("a1 b1")).parallel);
}

TEST_CASE("handle crossing angle") {
  auto rho = build_from_fn(fn(2, 2, 2));
  CurveOracle o(rho, 3);
  auto res = o.crossings(CurveClass("a1"), CurveClass("b1"), 8);
  REQUIRE(res.crossings.size() == 1);
  double direct = angle_between_geodesics(axis_h2(rho.evaluate({1})), axis_h2(rho.evaluate({2})));
  CHECK(direct == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(res.crossings[0].angle == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("conjugation invariance") {
  auto rho = build_from_fn(fn(2.3, 1.7, 2.9, 0.3, -0.4, 0.8));
  MobiusMap g(cplx(1, 0.5), cplx(0.2, -1), cplx(0.3, 0.3), cplx(2, 0.1));
  auto conj = rho.conjugate(g);
  CHECK(conj.fuchsian());
  CurveOracle o1(rho, 3), o2(conj, 3);
  for (const char* x : {"a1", "b1 b2", "a1 b1 b1", "a1 a2"})
    for (const char* y : {"b1", "a1 b1", "b2 a2", "a1 b1 A1 B1"}) {
      CurveClass cx(x), cy(y);
      CHECK(o1.count(cx, cy) == o2.count(cx, cy));
      CHECK(std::abs(geodesic_length(rho, cx) - geodesic_length(conj, cx)) < 1e-8);
    }
  auto s1 = purely_loxodromic_scan(rho, 3), s2 = purely_loxodromic_scan(conj, 3);
  CHECK(s1.certified == s2.certified);
  CHECK(s1.words_checked == s2.words_checked);
}

TEST_CASE("long twist iterates: invariant core count and the twist inequality") {
  CurveOracle o(build_from_fn(FNCoordinates{}), 3);
  SurfacePresentation s(2);
  std::vector<CurveClass> probes{CurveClass("a1"), CurveClass("a2"), CurveClass("b1"), CurveClass("a1 b1"),
                                 CurveClass("a1 a2"), CurveClass("b1 b2")};
  for (const auto& [core, base] : {std::pair{CurveClass("a1"), CurveClass("b1 b2")},
                                   std::pair{CurveClass("a1 b1 A1 B1"), CurveClass("b1 b2")}}) {
    int ic = o.count(core, base);
    for (int n : {4, 8, 12}) {
      CurveClass t = dehn_twist(s, core, base, n);
      auto self = o.intersection(core, t);
      CHECK(self.stable);
      CHECK(self.count == ic);
      for (const auto& b : probes) {
        auto r = o.intersection(b, t);
        CHECK(r.stable);
        CHECK(std::abs(r.count - n * ic * o.count(core, b)) <= o.count(base, b));
      }
    }
  }
}

TEST_CASE("bent coordinates deform the Fuchsian holonomy continuously") {
  auto rho = build_from_fn(fn(2, 2, 2));
  for (int curve = 0; curve < 3; ++curve) {
    FNCoordinates f = fn(2, 2, 2);
    f.bends[static_cast<std::size_t>(curve)] = 1e-7;
    auto near = build_from_fn(f);
    for (int k = 0; k < 4; ++k) CHECK(near.generator(k).distance(rho.generator(k)) < 1e-5);
    f.bends[static_cast<std::size_t>(curve)] = 0.05;
    auto bent = build_from_fn(f);
    CHECK_FALSE(bent.fuchsian());
    CHECK(bent.relator_residual() < 1e-8);
    CHECK(bent.generator(0).distance(bent.generator(2)) > 1.0);
    CHECK(purely_loxodromic_scan(bent, 3).certified);
    for (const auto& c : reference_curves()) CHECK(std::abs(geodesic_length(bent, c) - 2.0) < 1e-9);
  }
}
