#include <algorithm>
#include <cmath>

#include "../common/quad.hpp"
#include "glab/fuchsian.hpp"

namespace glab {

namespace {

struct R2 {
  double a, b, c, d;
  R2 operator*(const R2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

// Projective point (x : w) of the real line, unit normalized.
struct Hom {
  double x, w;
};

R2 real_part(const MobiusMap& m) { return {m.a().real(), m.b().real(), m.c().real(), m.d().real()}; }

Hom act(const R2& m, const Hom& p) {
  double x = m.a * p.x + m.b * p.w, w = m.c * p.x + m.d * p.w;
  double n = std::hypot(x, w);
  return {x / n, w / n};
}

struct QR2 {
  quad::real a, b, c, d;
  QR2 operator*(const QR2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  R2 rounded() const {
    return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c), static_cast<double>(d)};
  }
};

QR2 real_quad(const HolonomyRep& rho, const Word& w) {
  quad::Qm m = quad::evaluate_quad(rho, w);
  return {m.a.re, m.b.re, m.c.re, m.d.re};
}

struct QHom {
  quad::real x, w;
  Hom rounded() const {
    quad::real n = quad::qsqrt(x * x + w * w);
    return {static_cast<double>(x / n), static_cast<double>(w / n)};
  }
};

// Eigenvector of a hyperbolic real matrix for eigenvalue l.
QHom eigen(const QR2& m, quad::real l) {
  quad::real x1 = m.b, w1 = l - m.a, x2 = l - m.d, w2 = m.c;
  if (x1 * x1 + w1 * w1 >= x2 * x2 + w2 * w2) return {x1, w1};
  return {x2, w2};
}

// Repelling and attracting fixed points.
std::pair<QHom, QHom> axis_quad(const QR2& m) {
  quad::real t = m.a + m.d;
  quad::real s = quad::qsqrt(t * t - 4);
  quad::real big = (t + (t < 0 ? -s : s)) / 2;
  return {eigen(m, 1 / big), eigen(m, big)};
}

constexpr double kCoincide = 1e-9;
constexpr double kKeyTol = 1e-7;

}  // namespace

CurveOracle::CurveOracle(const HolonomyRep& rho, int ball) : surface_(rho.genus()), ball_(ball) {
  if (!rho.fuchsian()) throw Error("intersection oracle needs a Fuchsian representation");
  rho_ = rho.realified();
}

const std::vector<MobiusMap>& CurveOracle::ball_maps(int r) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = balls_.find(r);
  if (it != balls_.end()) return it->second;
  std::vector<MobiusMap> maps;
  for (const auto& w : surface_.ball(r)) maps.push_back(rho_.evaluate(w));
  return balls_.emplace(r, std::move(maps)).first->second;
}

IntersectionResult CurveOracle::crossings(const CurveClass& c1, const CurveClass& c2, int r) const {
  surface_.check_word(c1.word);
  surface_.check_word(c2.word);
  MobiusMap g1 = rho_.evaluate(c1.word), g2 = rho_.evaluate(c2.word);
  if (classify(g1).type != MobiusType::loxodromic || classify(g2).type != MobiusType::loxodromic)
    throw Error("intersection oracle needs loxodromic curves");
  double len1 = complex_length(g1).real();

  // Charts and endpoints are formed in quad precision: conjugating the axis
  // of a long word by its own prefixes amplifies double rounding.
  auto [rep, att] = axis_quad(real_quad(rho_, c1.word));
  auto at_inf = [](const QHom& h) { return quad::qabs(h.w) <= 1e-25 * quad::qabs(h.x); };
  QR2 nm = at_inf(att)   ? QR2{1, -rep.x / rep.w, 0, 1}
           : at_inf(rep) ? QR2{0, 1, 1, -att.x / att.w}
                         : QR2{1, -rep.x / rep.w, 1, -att.x / att.w};
  std::vector<R2> left;
  QR2 pre{1, 0, 0, 1};
  for (std::size_t i = 0; i < c1.word.size(); ++i) {
    left.push_back((nm * pre).rounded());
    pre = pre * real_quad(rho_, {c1.word[i]});
  }
  std::vector<Hom> ends_p, ends_q;
  for (std::size_t k = 0; k < c2.word.size(); ++k) {
    auto [p, q] = axis_quad(real_quad(rho_, rotate(c2.word, k)));
    ends_p.push_back(p.rounded());
    ends_q.push_back(q.rounded());
  }

  IntersectionResult res;
  res.ball = r;
  const auto& ball = ball_maps(r);
  std::vector<double> errs;
  for (const R2& l : left) {
    for (const auto& u : ball) {
      R2 m = l * real_part(u);
      for (std::size_t k = 0; k < ends_p.size(); ++k) {
        Hom p = act(m, ends_p[k]), q = act(m, ends_q[k]);
        bool p0 = std::abs(p.x) <= kCoincide, pi = std::abs(p.w) <= kCoincide;
        bool q0 = std::abs(q.x) <= kCoincide, qi = std::abs(q.w) <= kCoincide;
        if ((p0 && qi) || (pi && q0)) {
          res.parallel = true;
          continue;
        }
        if (p0 || pi || q0 || qi) continue;
        if (p.x * p.w * q.x * q.w >= 0.0) continue;
        double u1 = p.x / p.w, v1 = q.x / q.w;
        double s = 0.5 * std::log(-u1 * v1);
        double pos = std::fmod(s, len1);
        if (pos < 0) pos += len1;
        double ang = std::acos(std::min(1.0, std::abs(u1 + v1) / std::abs(v1 - u1)));
        // Far lifts lose accuracy in proportion to the conjugator's condition number.
        double err = std::max(kKeyTol, 1e-13 * (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d));
        bool seen = false;
        for (std::size_t j = 0; j < res.crossings.size(); ++j) {
          const auto& c = res.crossings[j];
          double ds = std::abs(c.position - pos);
          ds = std::min(ds, len1 - ds);
          double tol = err + errs[j];
          // Positions of shallow crossings are conditioned like 1 / angle.
          double ptol = tol * std::max(1.0, len1) / std::max(1e-12, std::min(1.0, std::min(ang, c.angle)));
          if (ds < ptol && std::abs(c.angle - ang) < tol) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          res.crossings.push_back({pos, ang});
          errs.push_back(err);
        }
      }
    }
  }
  std::sort(res.crossings.begin(), res.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.position < b.position; });
  int n = static_cast<int>(res.crossings.size());
  res.count = res.parallel ? n / 2 : n;
  if (res.parallel && n % 2) res.stable = false;
  return res;
}

IntersectionResult CurveOracle::intersection(const CurveClass& c1, const CurveClass& c2, bool check_stable) const {
  auto key = std::make_pair(c1.word, c2.word);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end() && (!check_stable || it->second.ball > ball_)) return it->second;
  }
  IntersectionResult res = crossings(c1, c2, ball_);
  if (check_stable) {
    IntersectionResult next = crossings(c1, c2, ball_ + 1);
    res.stable = res.stable && next.stable && next.count == res.count && next.parallel == res.parallel;
    res.ball = ball_ + 1;
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_[key] = res;
  return res;
}

int CurveOracle::count(const CurveClass& c1, const CurveClass& c2) const { return intersection(c1, c2, false).count; }

bool CurveOracle::parallel(const CurveClass& c1, const CurveClass& c2) const {
  return intersection(c1, c2, false).parallel;
}

IntersectionResult intersection_count(const HolonomyRep& rho, const CurveClass& c1, const CurveClass& c2, int ball) {
  CurveOracle o(rho, ball);
  return o.intersection(c1, c2, true);
}

}  // namespace glab
