#include "glab/grafting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace glab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CurveClass canonical(const CurveClass& c) { return CurveClass(cyclic_canonical(c.word)); }

void sort_leaves(std::vector<GraftLeaf>& v) {
  std::sort(v.begin(), v.end(),
            [](const GraftLeaf& a, const GraftLeaf& b) { return canonical(a.curve) < canonical(b.curve); });
}

const GraftLeaf* find_leaf(const GraftedStructure& c, const CurveClass& l) {
  for (const auto& x : c.leaves)
    if (canonical(x.curve) == canonical(l)) return &x;
  return nullptr;
}

}  // namespace

double GraftLeaf::weight() const { return heavy ? HUGE_VAL : kTwoPi * static_cast<double>(multiple); }

GraftedStructure GraftedStructure::fuchsian(const FNCoordinates& tau) {
  GraftedStructure c;
  c.tau = tau;
  c.rho = build_from_fn(tau);
  if (!c.rho.fuchsian()) throw Error("grafted structures need Fuchsian holonomy");
  return c;
}

ThurstonCoordinates thurston_coordinates(const GraftedStructure& c) {
  ThurstonCoordinates t;
  t.tau = c.tau;
  for (const auto& l : c.leaves)
    t.lamination.leaves.push_back({l.curve, l.heavy ? 0.0 : kTwoPi * static_cast<double>(l.multiple), l.heavy});
  return t;
}

double GraftingCylinder::height() const {
  if (heavy) throw Error("heavy cylinder has infinite height");
  return kTwoPi * static_cast<double>(multiple);
}

std::vector<GraftingCylinder> cylinders(const GraftedStructure& c) {
  std::vector<GraftingCylinder> out;
  for (const auto& l : c.leaves) out.push_back({l.curve, geodesic_length(c.rho, l.curve), l.multiple, l.heavy});
  return out;
}

GraftedStructure graft(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l, long k) {
  if (k < 0) throw Error("graft count must be nonnegative");
  if (k == 0) return c;
  if (classify(c.rho.evaluate(l.word)).type != MobiusType::loxodromic) throw Error("graft loop not loxodromic");
  if (!is_simple(o, l)) throw Error("graft loop not simple: " + l.str());
  GraftedStructure out = c;
  for (auto& x : out.leaves) {
    if (isotopic(o, x.curve, l)) {
      x.multiple += k;
      return out;
    }
    if (!disjoint(o, x.curve, l))
      throw Error("grafting along " + l.str() + " crosses " + x.curve.str() +
                  ": requires Thurston-coordinate recomputation (out of scope)");
  }
  out.leaves.push_back({CurveClass(cyclic_reduce(l.word)), k, false});
  sort_leaves(out.leaves);
  return out;
}

H2Point axis_point(const MobiusMap& m, double s) {
  GeodesicH2 ax = axis_h2(m);
  if (ax.q.is_inf()) return {ax.p.value().real(), std::exp(s)};
  if (ax.p.is_inf()) return {ax.q.value().real(), std::exp(-s)};
  double u = ax.p.value().real(), v = ax.q.value().real();
  double mid = 0.5 * (u + v), r = 0.5 * std::abs(v - u), dir = v > u ? 1.0 : -1.0;
  return {mid + dir * r * std::tanh(s), r / std::cosh(s)};
}

GraftLimit iterate_graft_limit(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l, long imax) {
  if (imax < 0) throw Error("imax must be nonnegative");
  GraftLimit res;
  GraftedStructure cur = c;
  for (long i = 1; i <= imax; ++i) {
    cur = graft(o, cur, l, 1);
    res.steps.push_back({i, cur.tau, cur.leaves});
  }
  GraftedStructure lim = graft(o, c, l, 1);
  for (auto& x : lim.leaves)
    if (canonical(x.curve) == canonical(l) || isotopic(o, x.curve, l)) {
      x.heavy = true;
      x.multiple = 0;
    }
  res.limit = lim.leaves;
  HolonomyRep real = c.rho.realified();
  MobiusMap g = real.evaluate(l.word);
  H2Point p = axis_point(g, 0.0);
  res.boundary_length = dist_h2(p, apply_real(g, p));
  res.translation_length = geodesic_length(c.rho, l);
  res.residual = std::abs(res.boundary_length - res.translation_length);
  return res;
}

double thurston_path_length(const GraftedStructure& c, const std::vector<PathPiece>& path) {
  double total = 0.0;
  for (const auto& piece : path) {
    if (const auto* h = std::get_if<HyperbolicSegment>(&piece)) {
      if (!(h->from.y > 0.0) || !(h->to.y > 0.0)) throw Error("malformed path: point off the hyperbolic plane");
      total += dist_h2(h->from, h->to);
    } else {
      const auto& x = std::get<CylinderCrossing>(piece);
      if (!std::isfinite(x.height_fraction) || !std::isfinite(x.drift) || std::abs(x.height_fraction) > 1.0)
        throw Error("malformed path: cylinder crossing out of range");
      const GraftLeaf* leaf = find_leaf(c, x.curve);
      if (!leaf) throw Error("malformed path: no cylinder along " + x.curve.str());
      if (leaf->heavy) throw Error("malformed path: heavy cylinder has infinite height");
      total += std::hypot(x.drift, x.height_fraction * leaf->weight());
    }
  }
  return total;
}

H2Point collapse_point(const GraftedStructure& c, const SurfacePoint& p) {
  if (const auto* r = std::get_if<RegionPoint>(&p)) return r->p;
  const auto& x = std::get<CylinderPoint>(p);
  if (!find_leaf(c, x.curve)) throw Error("unknown cylinder " + x.curve.str());
  return axis_point(c.rho.realified().evaluate(x.curve.word), x.position);
}

AdmissibilityResult admissible_check(const CurveOracle& o, const GraftedStructure& c, const CurveClass& l) {
  if (classify(c.rho.evaluate(l.word)).type != MobiusType::loxodromic) return {Admissibility::rejected, "not loxodromic"};
  if (!is_simple(o, l)) return {Admissibility::rejected, "not simple"};
  for (const auto& x : c.leaves) {
    if (isotopic(o, x.curve, l)) return {Admissibility::certified, "core of a grafting cylinder"};
    if (!disjoint(o, x.curve, l))
      return {Admissibility::undecided, "undecided: crosses the cylinder along " + x.curve.str() +
                                            ", outside implemented regime"};
  }
  return {Admissibility::certified, "disjoint from the grafting multiloop"};
}

SpiralKind spiral_classify(const MobiusMap& lambda, double winding) {
  if (classify(lambda).type != MobiusType::loxodromic) throw Error("spiral classification needs a loxodromic");
  double rot = complex_length(lambda).imag();
  double k = std::round((winding - rot) / kTwoPi);
  if (std::abs(winding - rot - k * kTwoPi) > 1e-9) throw Error("winding is not congruent to the rotation angle mod 2 pi");
  return std::abs(winding) > 1e-12 ? SpiralKind::spirals : SpiralKind::roughly_circular;
}

bool GraftPlan::certified() const {
  return !cap_exhausted && std::all_of(steps.begin(), steps.end(), [](const PlanStep& s) { return s.certified; });
}

PantsDecomposition complete_multiloop(const CurveOracle& o, const std::vector<CurveClass>& curves) {
  static const char* kCandidates[] = {"a1", "a2", "a1 b1 A1 B1", "b1", "b2", "a1 a2", "b1 b2", "a1 b1", "a2 b2",
                                      "a1 B1", "a2 B2", "a1 b2", "b1 a2", "b1 B2", "a1 A2"};
  std::vector<CurveClass> base;
  for (const auto& c : curves) {
    for (const auto& b : base)
      if (isotopic(o, b, c)) goto next;
    base.push_back(c);
  next:;
  }
  std::vector<CurveClass> cand;
  for (const char* w : kCandidates) cand.emplace_back(w);
  PantsDecomposition p;
  p.curves = base;
  std::function<bool(std::size_t)> dfs = [&](std::size_t from) {
    if (p.curves.size() == 3) return validate_pants_decomposition(o, p).valid;
    for (std::size_t k = from; k < cand.size(); ++k) {
      bool ok = true;
      for (const auto& x : p.curves)
        if (!disjoint(o, x, cand[k]) || isotopic(o, x, cand[k])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      p.curves.push_back(cand[k]);
      if (dfs(k + 1)) return true;
      p.curves.pop_back();
    }
    return false;
  };
  if (base.size() > 3 || !dfs(0)) throw Error("multiloop does not extend to a pants decomposition");
  return p;
}

namespace {

bool same_tau(const FNCoordinates& x, const FNCoordinates& y) {
  auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-9) return false;
    return true;
  };
  return x.decomposition == y.decomposition && close(x.lengths, y.lengths) && close(x.twists, y.twists) &&
         close(x.bends, y.bends);
}

int handle_of(const SurfacePresentation& s, const Subsurface& r) {
  for (const auto& b : r.boundary)
    for (int h = 1; h <= s.genus(); ++h)
      if (cyclic_canonical(b.word) == cyclic_canonical(commutator({gen_a(h)}, {gen_b(h)}))) return h;
  return 0;
}

MeasuredLamination as_multiloop(const std::vector<CurveClass>& cs) {
  MeasuredLamination m;
  for (const auto& c : cs) m.leaves.push_back({c, 1.0, false});
  return m;
}

}  // namespace

GraftPlan graft_plan(const CurveOracle& o, const GraftedStructure& sharp, const GraftedStructure& flat,
                     const std::vector<double>& delta, const PlanCaps& caps) {
  if (!same_tau(sharp.tau, flat.tau)) throw Error("graft plan needs a shared Fuchsian holonomy");
  if (delta.empty()) throw Error("empty delta schedule");
  GraftPlan plan;
  plan.provenance = "nu sequence: per move, ends infinity -> 0 in the move's Farey chart, least non-backtracking pivot";
  if (sharp == flat) return plan;
  auto curves = [](const GraftedStructure& c) {
    std::vector<CurveClass> v;
    for (const auto& l : c.leaves) v.push_back(l.curve);
    return v;
  };
  plan.m_sharp = complete_multiloop(o, curves(sharp));
  plan.m_flat = complete_multiloop(o, curves(flat));
  plan.path = pants_graph_path(o, plan.m_sharp, plan.m_flat, caps.path);
  const auto& s = o.surface();
  auto delta_at = [&](std::size_t i) { return delta[std::min(i, delta.size() - 1)]; };
  PantsDecomposition cur = plan.m_sharp;
  for (std::size_t i = 0; i < plan.path.size(); ++i) {
    const auto& mv = plan.path[i];
    LaminationSeqSpec spec;
    spec.index = static_cast<int>(i);
    spec.kind = mv.kind == MoveKind::torus ? FareyCase::torus : FareyCase::sphere;
    spec.boundary = mv.region.boundary;
    spec.m_from = Slope(1, 0);
    spec.m_to = Slope(0, 1);
    spec.handle = handle_of(s, mv.region);
    plan.specs.push_back(spec);
    PantsDecomposition next = apply_move(o, cur, mv);
    PlanStep st;
    st.target = mv.added;
    st.delta = delta_at(i);
    st.loop = mv.removed;
    if (!twist_supported(s, mv.added)) {
      st.note = "twist basis: added curve " + mv.added.str() + " unsupported";
    } else {
      for (int n = 1; n <= caps.max_twist; ++n) {
        CurveClass loop = dehn_twist(s, mv.added, mv.removed, n);
        AngleReport a = lamination_angle(o, as_multiloop({loop}), as_multiloop(next.curves), caps.angle);
        st.loop = loop;
        st.twist = n;
        st.angle = a.angle;
        st.ball = a.ball;
        if (a.angle < st.delta && a.stable) {
          st.certified = true;
          break;
        }
      }
      if (!st.certified) st.note = "twist cap exhausted";
    }
    plan.steps.push_back(st);
    cur = next;
  }
  for (const auto& l : flat.leaves) {
    PlanStep st;
    st.loop = l.curve;
    st.target = l.curve;
    st.count = l.heavy ? 0 : l.multiple;
    st.delta = delta_at(plan.steps.size());
    AngleReport a = lamination_angle(o, as_multiloop({l.curve}), as_multiloop(plan.m_flat.curves), caps.angle);
    st.angle = a.angle;
    st.ball = a.ball;
    st.certified = a.angle < st.delta && a.stable;
    st.note = l.heavy ? "terminal heavy leaf: iterated-graft limit" : "terminal graft";
    plan.steps.push_back(st);
    plan.terminal.push_back(l);
  }
  return plan;
}

}  // namespace glab
