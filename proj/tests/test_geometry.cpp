#include <cmath>
#include <random>

#include "doctest.h"
#include "glab/hyperbolic.hpp"
#include "glab/mobius.hpp"

using namespace glab;

namespace {

const double kPi = std::acos(-1.0);

MobiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
    if (std::abs(a * d - b * c) > 0.3) return MobiusMap(a, b, c, d);
  }
}

// Midpoint-rule arclength of the semicircle through two points at equal height.
double integrated_distance(double x0, double x1, double t) {
  double cx = 0.5 * (x0 + x1), r = std::hypot(0.5 * (x1 - x0), t);
  double th0 = std::atan2(t, x1 - cx), th1 = kPi - th0;
  const int n = 200000;
  double h = (th1 - th0) / n, s = 0.0;
  for (int i = 0; i < n; ++i) {
    double th = th0 + (i + 0.5) * h;
    s += r * h / (r * std::sin(th));
  }
  return s;
}

// Angle at the crossing of the imaginary axis with the semicircle over (p, q),
// by bisection on the circle parameter and a finite-difference tangent.
double bisection_angle(double p, double q) {
  double c = 0.5 * (p + q), r = 0.5 * (q - p);
  auto x = [&](double th) { return c + r * std::cos(th); };
  double lo = 0.0, hi = kPi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((x(mid) > 0) == (x(lo) > 0)) lo = mid;
    else hi = mid;
  }
  double th = 0.5 * (lo + hi), h = 1e-6;
  double tx = x(th + h) - x(th - h);
  double ty = r * std::sin(th + h) - r * std::sin(th - h);
  return std::acos(std::abs(ty) / std::hypot(tx, ty));
}

}  // namespace

TEST_CASE("classification examples") {
  CHECK(classify(MobiusMap(2, 0, 0, 0.5)).type == MobiusType::loxodromic);
  CHECK(classify(MobiusMap::identity()).type == MobiusType::identity);
  CHECK(classify(MobiusMap(1, 1, 0, 1)).type == MobiusType::parabolic);
  cplx e = std::polar(1.0, kPi / 6);
  auto rot = MobiusMap(e, 0, 0, 1.0 / e);
  CHECK(classify(rot).type == MobiusType::elliptic);
  CHECK(std::abs(rot.trace_sq() - 3.0) < 1e-12);
  CHECK(classify(MobiusMap(2, 0, 0, 0.5)).margin == 1e-9);
}

TEST_CASE("normalization and sign") {
  MobiusMap m(-2, -1, 0, -1);
  CHECK(std::abs(m.det() - 1.0) < 1e-12);
  CHECK(m.a().real() > 0);
  MobiusMap n(cplx(0, -1), 0, 0, cplx(0, 1));
  CHECK(std::arg(n.a()) > -kPi / 2);
  CHECK(std::arg(n.a()) <= kPi / 2);
}

TEST_CASE("fixed points") {
  auto fp = fixed_points(MobiusMap(2, 0, 0, 1));
  REQUIRE(fp.size() == 2);
  CHECK(fp[0].is_inf());
  CHECK(std::abs(fp[1].value()) < 1e-15);
  auto par = fixed_points(MobiusMap(1, 1, 0, 1));
  REQUIRE(par.size() == 1);
  CHECK(par[0].is_inf());
  MobiusMap t(1, 3, 0, 1);
  auto conj = t * MobiusMap(2, 0, 0, 0.5) * t.inverse();
  auto f2 = fixed_points(conj);
  CHECK(f2[0].is_inf());
  CHECK(std::abs(f2[1].value() - 3.0) < 1e-12);
  CHECK_THROWS_WITH(fixed_points(MobiusMap::identity()), "no isolated fixed points");
}

TEST_CASE("fixed point equivariance") {
  std::mt19937_64 rng(7);
  MobiusMap m(cplx(1.3, 0.4), cplx(0.2, 1), cplx(-0.5, 0.3), cplx(0.7, -0.1));
  auto base = fixed_points(m);
  for (int i = 0; i < 200; ++i) {
    MobiusMap g = random_map(rng);
    auto fp = fixed_points(g * m * g.inverse());
    REQUIRE(fp.size() == 2);
    CHECK(chordal_distance(fp[0], g.apply(base[0])) < 1e-8);
    CHECK(chordal_distance(fp[1], g.apply(base[1])) < 1e-8);
  }
}

TEST_CASE("axis and length") {
  double s = std::sqrt(2.0);
  auto al = axis_and_length(MobiusMap(s, 0, 0, 1 / s));
  CHECK(al.length.real() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(complex_length(MobiusMap(2, 0, 0, 0.5)).real() == doctest::Approx(2 * std::log(2.0)));
  cplx l = s * std::polar(1.0, kPi / 8);
  CHECK(axis_and_length(MobiusMap(l, 0, 0, 1.0 / l)).length.imag() == doctest::Approx(kPi / 4));
  CHECK_THROWS_WITH(axis_and_length(MobiusMap(1, 1, 0, 1)), "no axis");
  MobiusMap m(cplx(1.3, 0.4), cplx(0.2, 1), cplx(-0.5, 0.3), cplx(0.7, -0.1));
  double len = complex_length(m).real();
  for (int k = 1; k <= 5; ++k) CHECK(complex_length(m.pow(k)).real() == doctest::Approx(k * len).epsilon(1e-10));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    MobiusMap g = random_map(rng);
    CHECK(std::abs(complex_length(g * m * g.inverse()).real() - len) < 1e-9);
  }
}

TEST_CASE("geodesic angles") {
  auto inf = ExtPoint::infinity();
  CHECK(angle_between_geodesics({0.0, inf}, {-1.0, 1.0}) == doctest::Approx(kPi / 2));
  double oracle = bisection_angle(-1.0, 3.0);
  CHECK(oracle == doctest::Approx(1.0471975511965976).epsilon(1e-8));
  CHECK(angle_between_geodesics({0.0, inf}, {-1.0, 3.0}) == doctest::Approx(1.0471975511965976).epsilon(1e-12));
  CHECK_THROWS_WITH(angle_between_geodesics({1.0, 2.0}, {3.0, 4.0}), "disjoint");
  CHECK_THROWS_WITH(angle_between_geodesics({0.0, 2.0}, {0.0, 4.0}), "asymptotic");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  GeodesicH2 g1{-0.7, 2.1}, g2{0.4, 5.0};
  double base = angle_between_geodesics(g1, g2);
  for (int i = 0; i < 100; ++i) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (std::abs(a * d - b * c) < 0.2) continue;
    auto f = [&](const ExtPoint& p) {
      double x = p.value().real(), den = c * x + d;
      return den == 0.0 ? ExtPoint::infinity() : ExtPoint((a * x + b) / den);
    };
    double ang = angle_between_geodesics({f(g1.p), f(g1.q)}, {f(g2.p), f(g2.q)});
    CHECK(std::abs(ang - base) < 1e-9);
  }
}

TEST_CASE("hyperbolic distance") {
  CHECK(dist_h3({0, 0, 1}, {0, 0, std::exp(1.0)}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dist_h3({0.3, 0.2, 0.7}, {0.3, 0.2, 0.7}) == 0.0);
  double oracle = integrated_distance(0.0, 1.0, 1.0);
  CHECK(oracle == doctest::Approx(0.9624236501192069).epsilon(1e-8));
  CHECK(dist_h3({0, 0, 1}, {1, 0, 1}) == doctest::Approx(0.9624236501192069).epsilon(1e-14));
}

TEST_CASE("H3 action is isometric") {
  std::mt19937_64 rng(5);
  H3Point p{0.3, -0.2, 0.8}, q{-1.1, 0.5, 2.0};
  double d = dist_h3(p, q);
  for (int i = 0; i < 100; ++i) {
    MobiusMap g = random_map(rng);
    CHECK(std::abs(dist_h3(apply(g, p), apply(g, q)) - d) < 1e-9);
    auto gh = g * g;
    auto lhs = apply(gh, p), rhs = apply(g, apply(g, p));
    CHECK(dist_h3(lhs, rhs) < 1e-7);
  }
}

TEST_CASE("dihedral angle of coplanar triangles") {
  auto inf = ExtPoint::infinity();
  CHECK(dihedral_angle(0.0, inf, 1.0, -1.0) < 1e-15);
  CHECK(dihedral_angle(0.0, inf, 1.0, cplx(0, 1)) == doctest::Approx(kPi / 2));
  CHECK(dihedral_angle(0.0, inf, cplx(0, 1), 1.0) == doctest::Approx(kPi / 2));
}
