#pragma once

#include "glab/mobius.hpp"

namespace glab {

struct H2Point {
  double x = 0.0;
  double y = 1.0;
  cplx z() const { return {x, y}; }
};

struct H3Point {
  double x = 0.0;
  double y = 0.0;
  double t = 1.0;
  cplx z() const { return {x, y}; }
};

// Endpoints in the extended reals.
struct GeodesicH2 {
  ExtPoint p;
  ExtPoint q;
};

H3Point embed(const H2Point& p);
H3Point apply(const MobiusMap& m, const H3Point& p);
H2Point apply_real(const MobiusMap& m, const H2Point& p);

double dist_h2(const H2Point& p, const H2Point& q);
double dist_h3(const H3Point& p, const H3Point& q);

// Real Moebius map (possibly orientation reversing, det = +-1) sending
// p -> 0 and q -> infinity.
struct RealChart {
  double a = 1, b = 0, c = 0, d = 1;
  ExtPoint apply(const ExtPoint& z) const;
};
RealChart normalize_geodesic(const ExtPoint& p, const ExtPoint& q);

enum class GeodesicRelation { crossing, disjoint, asymptotic, coincident };

struct CrossingInfo {
  GeodesicRelation relation = GeodesicRelation::disjoint;
  double angle = 0.0;      // in [0, pi/2] when crossing
  double log_height = 0.0; // position along g1 after normalization
};

// Relation of g2 to g1 with tolerance on endpoint coincidence.
CrossingInfo relate_geodesics(const GeodesicH2& g1, const GeodesicH2& g2, double tol = 1e-10);

double angle_between_geodesics(const GeodesicH2& g1, const GeodesicH2& g2);

// Unit normal of the hemisphere (or vertical plane) through three ideal points,
// evaluated at a point on it; used for dihedral angles.
double dihedral_angle(const ExtPoint& u, const ExtPoint& v, const ExtPoint& w1, const ExtPoint& w2);

// Cross ratio (w3-w1)(w4-w2)/((w3-w2)(w4-w1)) with infinity handled.
cplx cross_ratio(const ExtPoint& w1, const ExtPoint& w2, const ExtPoint& w3, const ExtPoint& w4);

}  // namespace glab
