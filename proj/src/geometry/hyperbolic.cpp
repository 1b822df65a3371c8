#include "glab/hyperbolic.hpp"

#include <cmath>

namespace glab {

H3Point embed(const H2Point& p) { return {p.x, 0.0, p.y}; }

H3Point apply(const MobiusMap& m, const H3Point& p) {
  const auto& [a, b, c, d] = m.entries();
  cplx z = p.z();
  double t = p.t;
  cplx czd = c * z + d;
  double den = std::norm(czd) + std::norm(c) * t * t;
  cplx w = ((a * z + b) * std::conj(czd) + a * std::conj(c) * t * t) / den;
  return {w.real(), w.imag(), t / den};
}

H2Point apply_real(const MobiusMap& m, const H2Point& p) {
  const auto& [a, b, c, d] = m.entries();
  cplx z = p.z();
  cplx w = (a * z + b) / (c * z + d);
  return {w.real(), w.imag()};
}

double dist_h2(const H2Point& p, const H2Point& q) {
  double num = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  return 2.0 * std::asinh(std::sqrt(num / (4.0 * p.y * q.y)));
}

double dist_h3(const H3Point& p, const H3Point& q) {
  double num = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.t - q.t) * (p.t - q.t);
  return 2.0 * std::asinh(std::sqrt(num / (4.0 * p.t * q.t)));
}

ExtPoint RealChart::apply(const ExtPoint& z) const {
  if (z.is_inf()) {
    if (c == 0.0) return ExtPoint::infinity();
    return ExtPoint(a / c);
  }
  cplx w = z.value();
  cplx den = c * w + d;
  if (den == cplx(0.0)) return ExtPoint::infinity();
  return ExtPoint((a * w + b) / den);
}

RealChart normalize_geodesic(const ExtPoint& p, const ExtPoint& q) {
  if (p == q) throw Error("degenerate geodesic");
  if (q.is_inf()) return {1.0, -p.value().real(), 0.0, 1.0};
  if (p.is_inf()) return {0.0, 1.0, 1.0, -q.value().real()};
  return {1.0, -p.value().real(), 1.0, -q.value().real()};
}

CrossingInfo relate_geodesics(const GeodesicH2& g1, const GeodesicH2& g2, double tol) {
  RealChart n = normalize_geodesic(g1.p, g1.q);
  ExtPoint u = n.apply(g2.p), v = n.apply(g2.q);
  const ExtPoint zero(0.0), inf = ExtPoint::infinity();
  auto on_end = [&](const ExtPoint& x) {
    return chordal_distance(x, zero) <= tol || chordal_distance(x, inf) <= tol;
  };
  CrossingInfo info;
  bool eu = on_end(u), ev = on_end(v);
  if (eu && ev) {
    info.relation = GeodesicRelation::coincident;
    return info;
  }
  if (eu || ev) {
    info.relation = GeodesicRelation::asymptotic;
    return info;
  }
  double x = u.value().real(), y = v.value().real();
  if (x * y >= 0.0) {
    info.relation = GeodesicRelation::disjoint;
    return info;
  }
  info.relation = GeodesicRelation::crossing;
  info.angle = std::acos(std::min(1.0, std::abs(x + y) / std::abs(y - x)));
  info.log_height = 0.5 * std::log(-x * y);
  return info;
}

double angle_between_geodesics(const GeodesicH2& g1, const GeodesicH2& g2) {
  CrossingInfo info = relate_geodesics(g1, g2, 0.0);
  switch (info.relation) {
    case GeodesicRelation::crossing: return info.angle;
    case GeodesicRelation::disjoint: throw Error("disjoint");
    case GeodesicRelation::asymptotic: throw Error("asymptotic");
    case GeodesicRelation::coincident: throw Error("coincident");
  }
  return 0.0;
}

cplx cross_ratio(const ExtPoint& w1, const ExtPoint& w2, const ExtPoint& w3, const ExtPoint& w4) {
  auto diff = [](const ExtPoint& x, const ExtPoint& y) -> cplx {
    if (x.is_inf() || y.is_inf()) return 1.0;
    return x.value() - y.value();
  };
  return diff(w3, w1) * diff(w4, w2) / (diff(w3, w2) * diff(w4, w1));
}

double dihedral_angle(const ExtPoint& u, const ExtPoint& v, const ExtPoint& w1, const ExtPoint& w2) {
  return std::abs(std::arg(-cross_ratio(u, v, w2, w1)));
}

}  // namespace glab
