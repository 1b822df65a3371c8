#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glab/error.hpp"

namespace glab {

using cplx = std::complex<double>;

// Point of the Riemann sphere; infinity is an explicit state.
class ExtPoint {
public:
  ExtPoint() = default;
  ExtPoint(cplx z) : z_(z), inf_(false) {}
  ExtPoint(double x) : z_(x, 0.0), inf_(false) {}
  static ExtPoint infinity() {
    ExtPoint p;
    p.inf_ = true;
    return p;
  }
  bool is_inf() const { return inf_; }
  cplx value() const;
  bool operator==(const ExtPoint& o) const {
    return inf_ == o.inf_ && (inf_ || z_ == o.z_);
  }

private:
  cplx z_{0.0, 0.0};
  bool inf_ = false;
};

// Chordal distance on the unit sphere (diameter 2 convention: at most 2).
double chordal_distance(const ExtPoint& p, const ExtPoint& q);

class MobiusMap {
public:
  MobiusMap() = default;
  // Normalizes det to 1 and resolves the global sign.
  MobiusMap(cplx a, cplx b, cplx c, cplx d);

  static MobiusMap identity() { return MobiusMap(); }
  // Raw SL(2,C) entries, det assumed 1; no sign resolution.
  static MobiusMap from_sl2(cplx a, cplx b, cplx c, cplx d);

  cplx a() const { return m_[0]; }
  cplx b() const { return m_[1]; }
  cplx c() const { return m_[2]; }
  cplx d() const { return m_[3]; }
  const std::array<cplx, 4>& entries() const { return m_; }

  cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  cplx trace() const { return m_[0] + m_[3]; }
  cplx trace_sq() const { return trace() * trace(); }

  // SL(2,C) product of the stored representatives.
  MobiusMap operator*(const MobiusMap& o) const;
  MobiusMap inverse() const;
  MobiusMap pow(int k) const;
  // Sign-canonical representative.
  MobiusMap canonical() const;

  ExtPoint apply(const ExtPoint& p) const;
  // Derivative modulus at a finite point, or the local scale at infinity.
  double derivative_abs(const ExtPoint& p) const;

  // Max entry distance to +I or -I.
  double distance_to_identity() const;
  // Max entry distance modulo sign.
  double distance(const MobiusMap& o) const;

private:
  std::array<cplx, 4> m_{cplx(1), cplx(0), cplx(0), cplx(1)};
};

enum class MobiusType { identity, parabolic, elliptic, loxodromic };

const char* to_string(MobiusType t);

struct Classification {
  MobiusType type = MobiusType::identity;
  double margin = 1e-9;
  cplx trace_sq;
  // Distance of tr^2 to the nearest decision boundary.
  double boundary_gap = 0.0;
  bool borderline = false;
};

constexpr double kClassifyMargin = 1e-9;

Classification classify(const MobiusMap& m, double eps = kClassifyMargin);
MobiusType classify_trace_sq(cplx tr2, bool is_identity, double eps = kClassifyMargin);
bool is_identity_matrix(const MobiusMap& m, double eps = kClassifyMargin);

// Attracting point first for loxodromic maps.
std::vector<ExtPoint> fixed_points(const MobiusMap& m);

struct GeodesicH3 {
  ExtPoint from;
  ExtPoint to;
};

struct AxisLength {
  GeodesicH3 axis;  // repelling -> attracting
  cplx length;      // Re > 0, Im in (-pi, pi]
};

AxisLength axis_and_length(const MobiusMap& m);
cplx complex_length(const MobiusMap& m);

}  // namespace glab
