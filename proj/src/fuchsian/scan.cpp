#include <array>
#include <cmath>
#include <unordered_map>

#include "glab/fuchsian.hpp"
#include "glab/kernels.hpp"
#include "../common/quad.hpp"

namespace glab {

namespace {

using quad::Qc;
using quad::Qm;
using quad::evaluate_quad;

std::array<double, 3> sphere(const ExtPoint& p) {
  if (p.is_inf()) return {0.0, 0.0, 1.0};
  cplx z = p.value();
  double n = std::norm(z);
  return {2 * z.real() / (n + 1), 2 * z.imag() / (n + 1), (n - 1) / (n + 1)};
}

struct CellHash {
  std::size_t operator()(const std::array<long, 3>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

double frob_sq(const MobiusMap& m) {
  double s = 0.0;
  for (const auto& e : m.entries()) s += std::norm(e);
  return s;
}

// Squared cross ratio and its squared rounding scale.
std::pair<__float128, __float128> quad_cross_ratio(const Qm& a, const Qm& b) {
  Qc two{2, 0}, four{4, 0};
  Qc k = (a * b * a.inverse() * b.inverse()).trace() - two;
  Qc ta = a.trace(), tb = b.trace();
  Qc den = (ta * ta - four) * (tb * tb - four);
  __float128 kr = k.norm() / den.norm();
  __float128 eps = 1e-32;
  __float128 scale = eps * a.frob() * b.frob() * eps * a.frob() * b.frob() / den.norm();
  return {kr, scale};
}

}  // namespace

double endpoint_cross_ratio(const MobiusMap& a, const MobiusMap& b) {
  cplx k = (a * b * a.inverse() * b.inverse()).trace() - 2.0;
  return std::abs(k) / std::abs((a.trace_sq() - 4.0) * (b.trace_sq() - 4.0));
}

PairEvidence endpoint_evidence(const MobiusMap& a, const MobiusMap& b) {
  PairEvidence ev;
  auto fa = fixed_points(a), fb = fixed_points(b);
  ev.gap = 2.0;
  for (const auto& p : fa)
    for (const auto& q : fb) ev.gap = std::min(ev.gap, chordal_distance(p, q));
  ev.commutator_trace = (a * b * a.inverse() * b.inverse()).trace();
  ev.cross_ratio = endpoint_cross_ratio(a, b);
  ev.shares_endpoint = ev.cross_ratio <= 1e-9;
  return ev;
}

LoxodromicityReport purely_loxodromic_scan(const HolonomyRep& rho, int radius, const ScanOptions& opt) {
  if (radius < 1) throw Error("scan radius must be at least 1");
  LoxodromicityReport rep;
  rep.radius = radius;
  SurfacePresentation surf(rho.genus());
  const int rank = surf.rank();

  // Level-by-level word ball with batched products parent * letter.
  std::vector<Word> words = {Word{}};
  kernels::MatBatch mats(1);
  mats.set(0, MobiusMap::identity());
  std::vector<MobiusMap> letters;
  for (int g = 1; g <= rank; ++g) letters.push_back(rho.evaluate({g})), letters.push_back(rho.evaluate({-g}));
  std::size_t begin = 0;
  for (int len = 1; len <= radius; ++len) {
    std::size_t end = words.size();
    std::vector<std::size_t> parent;
    std::vector<int> letter;
    for (std::size_t k = begin; k < end; ++k)
      for (int g = 1; g <= rank; ++g)
        for (int l : {g, -g}) {
          if (!words[k].empty() && words[k].back() == -l) continue;
          parent.push_back(k);
          letter.push_back(l);
        }
    kernels::MatBatch x(parent.size()), y(parent.size()), out;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      x.set(i, mats.get(parent[i]));
      int l = letter[i];
      y.set(i, letters[static_cast<std::size_t>(2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0))]);
    }
    kernels::mul(x, y, out);
    std::size_t base = words.size();
    mats.resize(base + parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) {
      Word w = words[parent[i]];
      w.push_back(letter[i]);
      words.push_back(std::move(w));
      mats.set(base + i, out.get(i));
    }
    begin = end;
  }

  std::vector<std::size_t> sel;
  for (std::size_t k = 1; k < words.size(); ++k) {
    const Word& w = words[k];
    if (w.size() > 1 && w.front() == -w.back()) continue;
    if (w <= inverse(w)) sel.push_back(k);
  }
  kernels::MatBatch cand(sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i) cand.set(i, mats.get(sel[i]));
  std::vector<std::uint8_t> types;
  kernels::classify(cand, opt.margin, types);
  rep.words_checked = sel.size();
  for (std::size_t i = 0; i < sel.size(); ++i) {
    rep.counts[types[i]]++;
    if (types[i] != static_cast<std::uint8_t>(MobiusType::loxodromic))
      rep.violations.push_back({words[sel[i]], static_cast<MobiusType>(types[i])});
  }

  if (opt.check_endpoints) {
    const double cell = opt.endpoint_gap;
    std::vector<std::array<double, 3>> pts;
    std::vector<std::size_t> owner;
    std::unordered_map<std::array<long, 3>, std::vector<std::size_t>, CellHash> grid;
    for (std::size_t i = 0; i < sel.size(); ++i) {
      if (types[i] != static_cast<std::uint8_t>(MobiusType::loxodromic)) continue;
      for (const auto& p : fixed_points(cand.get(i))) {
        auto x = sphere(p);
        std::array<long, 3> key = {static_cast<long>(std::floor(x[0] / cell)), static_cast<long>(std::floor(x[1] / cell)),
                                   static_cast<long>(std::floor(x[2] / cell))};
        grid[key].push_back(pts.size());
        pts.push_back(x);
        owner.push_back(i);
      }
    }
    for (const auto& [key, members] : grid) {
      for (long dx = -1; dx <= 1; ++dx)
        for (long dy = -1; dy <= 1; ++dy)
          for (long dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({key[0] + dx, key[1] + dy, key[2] + dz});
            if (it == grid.end()) continue;
            for (std::size_t p : members)
              for (std::size_t q : it->second) {
                if (q <= p || owner[p] == owner[q]) continue;
                double d = std::hypot(pts[p][0] - pts[q][0], pts[p][1] - pts[q][1], pts[p][2] - pts[q][2]);
                if (d > cell) continue;
                rep.close_pairs++;
                MobiusMap a = cand.get(owner[p]), b = cand.get(owner[q]);
                const Word& u = words[sel[owner[p]]];
                const Word& v = words[sel[owner[q]]];
                double kappa = endpoint_cross_ratio(a, b);
                double round = 1e-16 * frob_sq(a) * frob_sq(b) /
                               std::abs((a.trace_sq() - 4.0) * (b.trace_sq() - 4.0));
                bool distinct = kappa > 100.0 * round;
                if (!distinct && surf.commute(u, v)) continue;
                if (!distinct) {
                  auto [kq, sq] = quad_cross_ratio(evaluate_quad(rho, u), evaluate_quad(rho, v));
                  distinct = kq > 1e4 * sq;
                  if (distinct) kappa = std::sqrt(static_cast<double>(kq));
                }
                if (distinct) {
                  rep.close_pairs_distinct++;
                  rep.min_cross_ratio = std::min(rep.min_cross_ratio, kappa);
                  continue;
                }
                rep.endpoint_violations.push_back({u, v, d, (a * b * a.inverse() * b.inverse()).trace(), kappa});
              }
          }
    }
  }
  rep.certified = rep.violations.empty() && rep.endpoint_violations.empty();
  return rep;
}

}  // namespace glab
