#include "glab/mobius.hpp"

#include <cmath>
#include <limits>

namespace glab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// First nonzero entry gets argument in (-pi/2, pi/2].
bool needs_flip(const std::array<cplx, 4>& m) {
  for (const auto& e : m) {
    if (e == cplx(0.0, 0.0)) continue;
    double arg = std::arg(e);
    return !(arg > -kPi / 2 && arg <= kPi / 2);
  }
  return false;
}

}  // namespace

cplx ExtPoint::value() const {
  if (inf_) throw Error("point at infinity has no finite value");
  return z_;
}

double chordal_distance(const ExtPoint& p, const ExtPoint& q) {
  if (p.is_inf() && q.is_inf()) return 0.0;
  if (p.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
  if (q.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
  cplx z = p.value(), w = q.value();
  return 2.0 * std::abs(z - w) / (std::sqrt(1.0 + std::norm(z)) * std::sqrt(1.0 + std::norm(w)));
}

MobiusMap::MobiusMap(cplx a, cplx b, cplx c, cplx d) {
  cplx det = a * d - b * c;
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det)))
    throw Error("singular Moebius matrix");
  cplx s = std::sqrt(det);
  m_ = {a / s, b / s, c / s, d / s};
  if (needs_flip(m_))
    for (auto& e : m_) e = -e;
}

MobiusMap MobiusMap::from_sl2(cplx a, cplx b, cplx c, cplx d) {
  MobiusMap m;
  m.m_ = {a, b, c, d};
  return m;
}

MobiusMap MobiusMap::operator*(const MobiusMap& o) const {
  const auto& x = m_;
  const auto& y = o.m_;
  return from_sl2(x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                  x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]);
}

MobiusMap MobiusMap::inverse() const { return from_sl2(m_[3], -m_[1], -m_[2], m_[0]); }

MobiusMap MobiusMap::pow(int k) const {
  MobiusMap base = k < 0 ? inverse() : *this;
  MobiusMap r;
  for (int n = std::abs(k); n > 0; n >>= 1) {
    if (n & 1) r = r * base;
    base = base * base;
  }
  return r;
}

MobiusMap MobiusMap::canonical() const { return MobiusMap(m_[0], m_[1], m_[2], m_[3]); }

ExtPoint MobiusMap::apply(const ExtPoint& p) const {
  const auto& [a, b, c, d] = m_;
  if (p.is_inf()) {
    if (c == cplx(0.0)) return ExtPoint::infinity();
    return ExtPoint(a / c);
  }
  cplx z = p.value();
  cplx den = c * z + d;
  if (den == cplx(0.0)) return ExtPoint::infinity();
  return ExtPoint((a * z + b) / den);
}

double MobiusMap::derivative_abs(const ExtPoint& p) const {
  const auto& [a, b, c, d] = m_;
  (void)a;
  (void)b;
  if (p.is_inf()) {
    // In the chart w = 1/z around infinity, a fixed infinity has multiplier d/a.
    if (c == cplx(0.0)) return std::abs(d / a);
    return std::numeric_limits<double>::infinity();
  }
  cplx den = c * p.value() + d;
  return 1.0 / std::norm(den);
}

double MobiusMap::distance_to_identity() const {
  double plus = 0.0, minus = 0.0;
  const cplx id[4] = {1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(m_[i] - id[i]));
    minus = std::max(minus, std::abs(m_[i] + id[i]));
  }
  return std::min(plus, minus);
}

double MobiusMap::distance(const MobiusMap& o) const {
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(m_[i] - o.m_[i]));
    minus = std::max(minus, std::abs(m_[i] + o.m_[i]));
  }
  return std::min(plus, minus);
}

const char* to_string(MobiusType t) {
  switch (t) {
    case MobiusType::identity: return "identity";
    case MobiusType::parabolic: return "parabolic";
    case MobiusType::elliptic: return "elliptic";
    case MobiusType::loxodromic: return "loxodromic";
  }
  return "?";
}

bool is_identity_matrix(const MobiusMap& m, double eps) { return m.distance_to_identity() <= eps; }

MobiusType classify_trace_sq(cplx tr2, bool is_identity, double eps) {
  if (is_identity) return MobiusType::identity;
  if (std::abs(tr2 - 4.0) <= eps) return MobiusType::parabolic;
  if (std::abs(tr2.imag()) <= eps && tr2.real() >= -eps && tr2.real() < 4.0 - eps)
    return MobiusType::elliptic;
  return MobiusType::loxodromic;
}

Classification classify(const MobiusMap& m, double eps) {
  Classification c;
  c.margin = eps;
  c.trace_sq = m.trace_sq();
  bool id = is_identity_matrix(m, eps);
  c.type = classify_trace_sq(c.trace_sq, id, eps);
  // Gap to the segment [0,4] separates loxodromic from the rest; the gap
  // to 4 separates parabolic from elliptic.
  double re = c.trace_sq.real(), im = c.trace_sq.imag();
  double dx = re < 0 ? -re : (re > 4 ? re - 4 : 0.0);
  double seg = std::hypot(dx, im);
  double to4 = std::abs(c.trace_sq - 4.0);
  c.boundary_gap = c.type == MobiusType::loxodromic ? std::min(seg, to4) : to4;
  c.borderline = c.type != MobiusType::identity && c.type != MobiusType::parabolic &&
                 c.boundary_gap < 1e3 * eps;
  return c;
}

std::vector<ExtPoint> fixed_points(const MobiusMap& m) {
  if (is_identity_matrix(m, 0.0)) throw Error("no isolated fixed points");
  const auto& [a, b, c, d] = m.entries();
  if (classify(m).type == MobiusType::parabolic) {
    if (c == cplx(0.0)) return {ExtPoint::infinity()};
    return {ExtPoint((a - d) / (2.0 * c))};
  }
  cplx tr = a + d;
  cplx disc = std::sqrt(tr * tr - 4.0);
  std::vector<ExtPoint> pts;
  if (c == cplx(0.0)) {
    pts.push_back(ExtPoint::infinity());
    pts.push_back(ExtPoint(b / (d - a)));
  } else {
    // Roots of c z^2 + (d - a) z - b = 0, computed without cancellation.
    cplx p = d - a;
    cplx s = std::abs(p + disc) >= std::abs(p - disc) ? disc : -disc;
    cplx q = -0.5 * (p + s);
    pts.push_back(ExtPoint(q / c));
    pts.push_back(q == cplx(0.0) ? ExtPoint((a - d) / c) : ExtPoint(-b / q));
  }
  if (m.derivative_abs(pts[1]) < m.derivative_abs(pts[0])) std::swap(pts[0], pts[1]);
  return pts;
}

cplx complex_length(const MobiusMap& m) {
  cplx tr = m.trace();
  cplx s = std::sqrt(tr * tr - 4.0);
  cplx l1 = 0.5 * (tr + s), l2 = 0.5 * (tr - s);
  cplx lam = std::abs(l1) >= std::abs(l2) ? l1 : l2;
  cplx L = 2.0 * std::log(lam);
  double im = std::remainder(L.imag(), 2 * kPi);
  if (im <= -kPi) im += 2 * kPi;
  return {L.real(), im};
}

AxisLength axis_and_length(const MobiusMap& m) {
  if (classify(m).type != MobiusType::loxodromic) throw Error("no axis");
  auto fp = fixed_points(m);
  if (fp.size() != 2) throw Error("no axis");
  return {{fp[1], fp[0]}, complex_length(m)};
}

}  // namespace glab
