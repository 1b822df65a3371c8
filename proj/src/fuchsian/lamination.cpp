#include "glab/lamination.hpp"

#include <algorithm>
#include <cmath>

namespace glab {

MeasuredLamination MeasuredLamination::multiloop(const std::vector<std::pair<std::string, double>>& words) {
  MeasuredLamination m;
  for (const auto& [w, x] : words) m.leaves.push_back({CurveClass(w), x, false});
  return m;
}

std::vector<CurveClass> MeasuredLamination::heavy_leaves() const {
  std::vector<CurveClass> out;
  for (const auto& l : leaves)
    if (l.heavy) out.push_back(l.curve);
  return out;
}

std::vector<Leaf> twist_iterate(const SurfacePresentation& s, const MeasuredLamination& x, int n) {
  std::vector<Leaf> out = x.leaves;
  if (!x.limit) return out;
  for (Leaf l : x.limit->base) {
    for (const auto& c : x.limit->core) l.curve = dehn_twist(s, c, l.curve, n);
    out.push_back(l);
  }
  return out;
}

double multiloop_angle(const CurveOracle& o, const std::vector<Leaf>& x, const std::vector<Leaf>& y, bool* stable) {
  double best = 0.0;
  for (const auto& lx : x)
    for (const auto& ly : y) {
      auto r = o.intersection(lx.curve, ly.curve, stable != nullptr);
      if (stable && !r.stable) *stable = false;
      for (const auto& c : r.crossings) best = std::max(best, c.angle);
    }
  return best;
}

namespace {

std::string key(const MeasuredLamination& m) {
  std::string k;
  for (const auto& l : m.leaves) k += l.curve.str() + ";";
  if (m.limit) {
    k += "|";
    for (const auto& c : m.limit->core) k += c.str() + ";";
    for (const auto& l : m.limit->base) k += l.curve.str() + ";";
  }
  return k;
}

}  // namespace

AngleReport lamination_angle(const CurveOracle& o, const MeasuredLamination& x, const MeasuredLamination& y,
                             const AngleOptions& opt) {
  const MeasuredLamination& p = key(x) <= key(y) ? x : y;
  const MeasuredLamination& q = key(x) <= key(y) ? y : x;
  const auto& s = o.surface();
  AngleReport rep;
  rep.ball = o.ball() + 1;
  if (!p.limit && !q.limit) {
    rep.angle = multiloop_angle(o, p.leaves, q.leaves, &rep.stable);
    rep.estimates.push_back(rep.angle);
    return rep;
  }
  rep.converged = false;
  for (int n = opt.first_iterate; n <= opt.max_iterate; ++n) {
    bool st = true;
    double a = multiloop_angle(o, twist_iterate(s, p, n), twist_iterate(s, q, n), &st);
    rep.estimates.push_back(a);
    rep.angle = a;
    rep.iterate = n;
    rep.stable = st;
    std::size_t k = rep.estimates.size();
    if (k >= 2 && std::abs(rep.estimates[k - 1] - rep.estimates[k - 2]) < opt.tol) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

}  // namespace glab
