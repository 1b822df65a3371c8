#include <cmath>
#include <sstream>

#include "glab/fuchsian.hpp"

namespace glab {

namespace {

bool all_real(const std::vector<MobiusMap>& gens) {
  for (const auto& g : gens)
    for (const auto& e : g.entries())
      if (e.imag() != 0.0) return false;
  return true;
}

double max_imag(const MobiusMap& m) {
  double r = 0.0;
  for (const auto& e : m.entries()) r = std::max(r, std::abs(e.imag()));
  return r;
}

std::optional<MobiusMap> find_real_frame(const std::vector<MobiusMap>& gens, double tol) {
  if (all_real(gens)) return MobiusMap::identity();
  std::vector<ExtPoint> pts;
  for (const auto& g : gens) {
    if (classify(g).type != MobiusType::loxodromic) continue;
    for (const auto& p : fixed_points(g)) {
      bool fresh = true;
      for (const auto& q : pts) fresh = fresh && chordal_distance(p, q) > 1e-6;
      if (fresh) pts.push_back(p);
    }
    if (pts.size() >= 3) break;
  }
  if (pts.size() < 3 || pts[0].is_inf() || pts[1].is_inf() || pts[2].is_inf()) return std::nullopt;
  cplx p1 = pts[0].value(), p2 = pts[1].value(), p3 = pts[2].value();
  // p1 -> -1, p2 -> 1, p3 -> 0, keeping every fixed point finite
  cplx k = (p3 - p2) / (p3 - p1);
  MobiusMap c = MobiusMap(1.0, -1.0, 1.0, 1.0) * MobiusMap(k, -k * p1, 1.0, -p2);
  for (const auto& g : gens) {
    MobiusMap h = (c * g * c.inverse()).canonical();
    if (max_imag(h) > tol) return std::nullopt;
  }
  return c;
}

// Sends the repelling fixed point to 0 and the attracting one to infinity,
// keeping real data real.
MobiusMap normalizer(const MobiusMap& m) {
  auto fp = fixed_points(m);
  if (fp.size() != 2) throw Error("normalizer needs two fixed points");
  const ExtPoint& s = fp[0];
  const ExtPoint& r = fp[1];
  if (s.is_inf()) return MobiusMap(1.0, -r.value(), 0.0, 1.0);
  if (r.is_inf()) return MobiusMap(0.0, 1.0, -1.0, s.value());
  cplx det = r.value() - s.value();
  if (det.real() < 0.0) return MobiusMap(-1.0, r.value(), 1.0, -s.value());
  return MobiusMap(1.0, -r.value(), 1.0, -s.value());
}

struct TorusBlock {
  MobiusMap a, b, k;
};

TorusBlock torus_block(double l, double L, cplx tau) {
  double sh = std::sinh(0.5 * l);
  double cosh_d = (std::cosh(0.5 * L) + std::cosh(0.5 * l) * std::cosh(0.5 * l)) / (sh * sh);
  if (!(sh > 1e-6) || !std::isfinite(cosh_d) || cosh_d < 1.0 || !(L > 0) || L > 600.0 || l > 600.0) {
    std::ostringstream os;
    os << "numerically degenerate hexagon for length triple (" << l << ", " << l << ", " << L << ")";
    throw Error(os.str());
  }
  double d = std::acosh(cosh_d);
  double e = std::exp(0.5 * l);
  MobiusMap a = MobiusMap::from_sl2(e, 0.0, 0.0, 1.0 / e);
  cplx et = std::exp(0.5 * tau);
  MobiusMap p = MobiusMap::from_sl2(std::cosh(0.5 * d), std::sinh(0.5 * d), std::sinh(0.5 * d), std::cosh(0.5 * d));
  MobiusMap b = MobiusMap::from_sl2(et, 0.0, 0.0, 1.0 / et) * p;
  MobiusMap k = a * b * a.inverse() * b.inverse();
  return {a, b, k};
}

}  // namespace

std::vector<CurveClass> reference_curves() {
  return {CurveClass("a1"), CurveClass("a2"), CurveClass("a1 b1 A1 B1")};
}

HolonomyRep::HolonomyRep(int genus, std::vector<MobiusMap> gens) : genus_(genus), gens_(std::move(gens)) {
  if (genus < 2) throw Error("genus must be at least 2");
  if (gens_.size() != static_cast<std::size_t>(2 * genus)) throw Error("generator count must be 2g");
  for (const auto& g : gens_) {
    if (std::abs(g.det() - 1.0) > 1e-9) throw Error("generator not normalized to det 1");
    inv_.push_back(g.inverse());
  }
  SurfacePresentation s(genus);
  MobiusMap rel = evaluate(s.relator());
  residual_ = rel.distance_to_identity();
  double plus = 0.0;
  const cplx id[4] = {1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < 4; ++i) plus = std::max(plus, std::abs(rel.entries()[static_cast<std::size_t>(i)] - id[i]));
  lifts_ = plus <= 1e-8;
  frame_ = find_real_frame(gens_, 1e-9);
  fuchsian_ = frame_.has_value() && residual_ <= 1e-8;
}

MobiusMap HolonomyRep::evaluate(const Word& w) const {
  MobiusMap m;
  for (int l : w) {
    std::size_t g = static_cast<std::size_t>(std::abs(l) - 1);
    if (g >= gens_.size()) throw Error("word uses a generator beyond the representation");
    m = m * (l > 0 ? gens_[g] : inv_[g]);
  }
  return m;
}

HolonomyRep HolonomyRep::conjugate(const MobiusMap& g) const {
  std::vector<MobiusMap> out;
  MobiusMap gi = g.inverse();
  for (const auto& x : gens_) out.push_back(g * x * gi);
  return HolonomyRep(genus_, out);
}

HolonomyRep HolonomyRep::realified() const {
  if (!frame_) throw Error("representation preserves no circle");
  if (all_real(gens_)) return *this;
  std::vector<MobiusMap> out;
  MobiusMap fi = frame_->inverse();
  for (const auto& x : gens_) {
    MobiusMap h = (*frame_ * x * fi).canonical();
    const auto& e = h.entries();
    out.push_back(MobiusMap(e[0].real(), e[1].real(), e[2].real(), e[3].real()));
  }
  return HolonomyRep(genus_, out);
}

HolonomyRep build_from_fn(const FNCoordinates& fn) {
  if (fn.lengths.size() != 3 || fn.twists.size() != 3 || (!fn.bends.empty() && fn.bends.size() != 3))
    throw Error("genus-2 FN data needs 3 lengths and 3 twists");
  for (double l : fn.lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error("FN lengths must be positive");
  auto bend = [&](std::size_t i) { return fn.bends.empty() ? 0.0 : fn.bends[i]; };
  double L = fn.lengths[2];
  TorusBlock t1 = torus_block(fn.lengths[0], L, cplx(fn.twists[0], bend(0)));
  TorusBlock t2 = torus_block(fn.lengths[1], L, cplx(fn.twists[1], bend(1)));
  // Both blocks move to the frame where their boundary commutator is
  // diagonal with attracting point at infinity; z -> -1/z then turns K2
  // into K1^{-1}, and the twist along c is a diagonal translation.
  MobiusMap n1 = normalizer(t1.k), n2 = normalizer(t2.k);
  MobiusMap flip = MobiusMap::from_sl2(0.0, 1.0, -1.0, 0.0);
  cplx tc(fn.twists[2], bend(2));
  cplx e = std::exp(0.5 * tc);
  MobiusMap shift = MobiusMap::from_sl2(e, 0.0, 0.0, 1.0 / e);
  MobiusMap h = shift * flip * n2;
  // Final rotation puts the axis of c on (-1, 1), away from infinity.
  const double s = std::sqrt(0.5);
  MobiusMap rot = MobiusMap::from_sl2(s, -s, s, s);
  MobiusMap g1 = rot * n1, g2 = rot * h;
  MobiusMap g1i = g1.inverse(), g2i = g2.inverse();
  std::vector<MobiusMap> gens = {g1 * t1.a * g1i, g1 * t1.b * g1i, g2 * t2.a * g2i, g2 * t2.b * g2i};
  return HolonomyRep(2, gens);
}

double geodesic_length(const HolonomyRep& rho, const CurveClass& c) {
  MobiusMap m = rho.evaluate(c.word);
  if (classify(m).type != MobiusType::loxodromic) throw Error("curve " + c.str() + " is not loxodromic");
  return complex_length(m).real();
}

GeodesicH2 axis_h2(const MobiusMap& m) {
  auto fp = fixed_points(m);
  if (fp.size() != 2) throw Error("no axis");
  auto real = [](const ExtPoint& p) { return p.is_inf() ? p : ExtPoint(p.value().real()); };
  return {real(fp[1]), real(fp[0])};
}

}  // namespace glab
