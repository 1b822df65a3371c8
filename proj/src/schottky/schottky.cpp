#include "glab/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace glab {

namespace {

constexpr double kNoFit = -1e300;

double chordal_gap(const MobiusMap& g, const ExtPoint& p, const ExtPoint& q) {
  return chordal_distance(g.apply(p), q);
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::vector<CurveClass> short_curves(const SurfacePresentation& s, int length) {
  std::set<Word> seen;
  std::vector<CurveClass> out;
  for (const Word& w : s.cyclic_words(length)) {
    Word key = cyclic_canonical(w);
    if (!seen.insert(key).second) continue;
    out.emplace_back(std::max(w, inverse(w)));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CurveClass& x, const CurveClass& y) { return x.word.size() < y.word.size(); });
  return out;
}

bool simple_curve(const CurveOracle& o, const CurveClass& c) {
  if (o.surface().is_trivial(c.word)) return false;
  return is_simple(o, c);
}

}  // namespace

HandleCheck verify_handle(const HolonomyRep& rho, const CurveOracle& o, const CurveClass& a, const CurveClass& b,
                          double margin) {
  HandleCheck out;
  Handle& h = out.measured;
  h.a = a;
  h.b = b;
  MobiusMap A = rho.evaluate(a.word), B = rho.evaluate(b.word);
  Classification ca = classify(A), cb = classify(B);
  bool lox = ca.type == MobiusType::loxodromic && cb.type == MobiusType::loxodromic;
  h.loxodromic_margin = std::min(ca.type == MobiusType::loxodromic ? ca.boundary_gap : -ca.boundary_gap,
                                 cb.type == MobiusType::loxodromic ? cb.boundary_gap : -cb.boundary_gap);
  if (ca.type != MobiusType::loxodromic) out.failures.push_back("rho(a) is " + std::string(to_string(ca.type)));
  if (cb.type != MobiusType::loxodromic) out.failures.push_back("rho(b) is " + std::string(to_string(cb.type)));
  h.nonelementary_margin = std::abs((A * B * A.inverse() * B.inverse()).trace() - cplx(2.0));
  if (h.nonelementary_margin <= margin)
    out.failures.push_back("elementary: |tr[A, B] - 2| = " + fmt(h.nonelementary_margin));
  if (lox) {
    auto fa = fixed_points(A);
    h.nonswap_margin = std::min(chordal_gap(B, fa[0], fa[1]), chordal_gap(B, fa[1], fa[0]));
    if (h.nonswap_margin <= margin) out.failures.push_back("rho(b) swaps the fixed points of rho(a)");
  }
  bool sa = simple_curve(o, a), sb = simple_curve(o, b);
  if (!sa) out.failures.push_back("a is not simple");
  if (!sb) out.failures.push_back("b is not simple");
  if (sa && sb) {
    h.intersection = o.count(a, b);
    if (h.intersection != 1) out.failures.push_back("i(a, b) = " + std::to_string(h.intersection));
  }
  out.ok = out.failures.empty();
  return out;
}

Handle find_handle(const HolonomyRep& rho, const CurveOracle& o, const CurveClass& seed, const HandleCaps& caps) {
  const SurfacePresentation& s = o.surface();
  if (!simple_curve(o, seed)) throw Error("handle seed is not simple: " + seed.str());
  CurveClass a = seed;
  bool replaced = false;
  auto pool = short_curves(s, caps.word_length);
  if (is_separating(o, seed)) {
    bool found = false;
    for (const auto& c : pool) {
      if (s.homologically_trivial(c.word) || !simple_curve(o, c) || o.count(c, seed) != 0) continue;
      a = c;
      found = replaced = true;
      break;
    }
    if (!found) throw CapExhausted("no non-separating loop disjoint from " + seed.str() + " within caps");
  }
  std::vector<CurveClass> partners;
  for (const auto& c : pool) {
    if (static_cast<int>(partners.size()) >= caps.max_partners) break;
    if (std::abs(algebraic_intersection(s, a.word, c.word)) != 1) continue;
    if (!simple_curve(o, c) || o.count(a, c) != 1) continue;
    partners.push_back(c);
  }
  if (partners.empty()) throw CapExhausted("no partner meeting " + a.str() + " once within caps");
  std::string last;
  for (const auto& b : partners)
    for (int step = 0; step <= 2 * caps.max_q; ++step) {
      int q = step % 2 ? (step + 1) / 2 : -step / 2;
      for (bool swapped : {false, true}) {
        if (q == 0 && swapped) continue;
        CurveClass mod(concat(a.word, power(b.word, q)));
        CurveClass x = swapped ? b : mod, y = swapped ? mod : b;
        HandleCheck chk = verify_handle(rho, o, x, y, caps.margin);
        if (chk.ok) {
          Handle h = chk.measured;
          h.seed = seed;
          h.seed_replaced = replaced;
          h.q = q;
          h.swapped = swapped;
          return h;
        }
        last = "(" + x.str() + ", " + y.str() + "): " + chk.failures.front();
      }
    }
  throw CapExhausted("handle caps exhausted; last certificate " + last);
}

DecompositionLoop build_decomposition_loop(const HolonomyRep& rho, const CurveOracle& o, const Handle& h,
                                           const CurveClass& x, const CurveClass& y, const LoopCaps& caps) {
  if (!simple_curve(o, x) || !simple_curve(o, y) || o.count(x, y) != 1)
    throw Error("x and y must be simple and meet once");
  for (const auto& c : {h.a, h.b})
    if (o.count(x, c) != 0 || o.count(y, c) != 0) throw Error("x and y must be disjoint from the handle");
  for (int k = 0; k <= caps.max_k; ++k)
    for (int n = 1; n <= caps.max_n; ++n)
      for (int sy : {1, -1})
        for (int sb : {1, -1})
          for (int sa : {1, -1}) {
            if (k == 0 && sa < 0) continue;
            Word bak = concat(power(h.b.word, sb), power(h.a.word, sa * k));
            Word d = free_reduce(concat(power(y.word, sy), bak));
            Word w = cyclic_reduce(concat(power(d, n), x.word));
            if (w.empty()) continue;
            CurveClass loop(w);
            MobiusMap g = rho.evaluate(loop.word);
            Classification cl = classify(g);
            if (cl.type != MobiusType::loxodromic) continue;
            double len = complex_length(g).real();
            if (len < caps.length_floor) continue;
            if (!simple_curve(o, loop) || is_separating(o, loop)) continue;
            CurveClass ba(bak);
            if (o.count(loop, ba) != 0) continue;
            DecompositionLoop out;
            out.loop = loop;
            out.d = d;
            out.k = k;
            out.n = n;
            out.sign_y = sy;
            out.sign_b = sb;
            out.sign_a = sa;
            out.ba_k = ba;
            out.translation_length = len;
            out.trace_margin = cl.boundary_gap;
            return out;
          }
  throw CapExhausted("decomposition loop caps exhausted (k <= " + std::to_string(caps.max_k) +
                     ", n <= " + std::to_string(caps.max_n) + ")");
}

bool Disk::contains(const ExtPoint& p) const {
  if (p.is_inf()) return exterior;
  double d = std::abs(p.value() - center);
  return exterior ? d > radius : d < radius;
}

Disk image(const MobiusMap& g, const Disk& d) {
  std::array<cplx, 3> z;
  for (int i = 0; i < 3; ++i) {
    ExtPoint p = g.apply(ExtPoint(d.center + std::polar(d.radius, 2.0 * std::numbers::pi * i / 3.0)));
    if (p.is_inf()) throw Error("image circle is a line");
    z[static_cast<std::size_t>(i)] = p.value();
  }
  cplx b = z[1] - z[0], c = z[2] - z[0];
  double den = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
  double scale = std::max(std::norm(b), std::norm(c));
  if (std::abs(den) <= 1e-12 * scale) throw Error("image circle is a line");
  double bb = std::norm(b), cc = std::norm(c);
  cplx o((c.imag() * bb - b.imag() * cc) / den, (b.real() * cc - c.real() * bb) / den);
  Disk out{z[0] + o, std::abs(o), false};
  ExtPoint t = d.exterior ? ExtPoint::infinity() : ExtPoint(d.center);
  ExtPoint gt = g.apply(t);
  out.exterior = gt.is_inf() || std::abs(gt.value() - out.center) > out.radius;
  return out;
}

double containment_margin(const Disk& inner, const Disk& outer) {
  double dist = std::abs(inner.center - outer.center);
  if (!inner.exterior && !outer.exterior) return outer.radius - dist - inner.radius;
  if (!inner.exterior && outer.exterior) return dist - inner.radius - outer.radius;
  if (inner.exterior && outer.exterior) return inner.radius - dist - outer.radius;
  return kNoFit;
}

double disjointness_margin(const Disk& x, const Disk& y) { return containment_margin(x, y.complement()); }

namespace {

struct Frame {
  MobiusMap g, to_model, from_model;  // model: repelling 0, attracting infinity
  double length = 0.0;
};

Frame frame_of(const MobiusMap& g) {
  auto fp = fixed_points(g);
  const ExtPoint &att = fp[0], &rep = fp[1];
  MobiusMap t;
  if (att.is_inf())
    t = MobiusMap(1.0, -rep.value(), 0.0, 1.0);
  else if (rep.is_inf())
    t = MobiusMap(0.0, 1.0, 1.0, -att.value());
  else
    t = MobiusMap(1.0, -rep.value(), 1.0, -att.value());
  return {g, t, t.inverse(), complex_length(g).real()};
}

PingPongPair pair_of(const Frame& f, double u, double frac) {
  double h = 0.5 * frac * f.length;
  Disk minus{0.0, std::exp(u - h), false}, plus{0.0, std::exp(u + h), true};
  return {image(f.from_model, minus), image(f.from_model, plus)};
}

struct Margins {
  double disjoint = std::numeric_limits<double>::infinity();
  double mapping = std::numeric_limits<double>::infinity();
  double worst() const { return std::min(disjoint, mapping); }
};

Margins margins(const std::vector<MobiusMap>& gens, const std::vector<PingPongPair>& p) {
  Margins m;
  std::vector<Disk> all;
  for (const auto& q : p) {
    all.push_back(q.minus);
    all.push_back(q.plus);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) m.disjoint = std::min(m.disjoint, disjointness_margin(all[i], all[j]));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    double v;
    try {
      v = containment_margin(image(gens[i], p[i].minus.complement()), p[i].plus);
    } catch (const Error&) {
      v = kNoFit;
    }
    m.mapping = std::min(m.mapping, v);
  }
  return m;
}

// Model-plane radius log of the isometric circle of g^m, averaged.
double isometric_seed(const Frame& f, int m) {
  MobiusMap gm = f.g.pow(m);
  if (std::abs(gm.c()) < 1e-300) return 0.0;
  Disk iso{-gm.d() / gm.c(), 1.0 / std::abs(gm.c()), false};
  try {
    Disk w = image(f.to_model, iso);
    double near = std::abs(std::abs(w.center) - w.radius), far = std::abs(w.center) + w.radius;
    return 0.5 * (std::log(std::max(near, 1e-300)) + std::log(far));
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace

SchottkyCertificate ping_pong_certify(const std::vector<MobiusMap>& gens, const PingPongCaps& caps) {
  SchottkyCertificate cert;
  cert.gens = gens;
  for (const auto& g : gens)
    if (classify(g).type != MobiusType::loxodromic) {
      cert.failure = "not loxodromic";
      return cert;
    }
  if (gens.empty()) {
    cert.failure = "no generators";
    return cert;
  }
  std::vector<Frame> frames;
  for (const auto& g : gens) frames.push_back(frame_of(g));
  std::size_t n = gens.size();
  std::vector<double> u(n), frac(n, 0.9);
  auto build = [&](const std::vector<double>& uu, const std::vector<double>& ff) {
    std::vector<PingPongPair> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(pair_of(frames[i], uu[i], ff[i]));
    return p;
  };
  auto score = [&](const std::vector<double>& uu, const std::vector<double>& ff) {
    try {
      return margins(gens, build(uu, ff)).worst();
    } catch (const Error&) {
      return kNoFit;
    }
  };
  // Seeds: isometric circles of g^m.
  for (std::size_t i = 0; i < n; ++i) {
    double best = kNoFit;
    for (int m = 1; m <= caps.max_power; ++m) {
      std::vector<double> trial = u;
      trial[i] = isometric_seed(frames[i], m);
      double sc = score(trial, frac);
      if (sc > best) {
        best = sc;
        u[i] = trial[i];
      }
    }
  }
  const std::vector<double> fracs{0.5, 0.7, 0.85, 0.95, 0.99};
  double best = score(u, frac);
  for (int sweep = 0; sweep < caps.sweeps; ++sweep) {
    double before = best;
    for (std::size_t i = 0; i < n; ++i) {
      double span = frames[i].length + 4.0;
      std::vector<double> tu = u, tf = frac;
      for (int k = 0; k <= caps.grid; ++k) {
        // Offset keeps the model circle off the image of infinity.
        tu[i] = -span + 2.0 * span * (k + 0.37) / (caps.grid + 1);
        for (double f : fracs) {
          tf[i] = f;
          double sc = score(tu, tf);
          if (sc > best) {
            best = sc;
            u[i] = tu[i];
            frac[i] = f;
          }
        }
      }
    }
    // Line search refinement.
    for (std::size_t i = 0; i < n; ++i) {
      double step = (frames[i].length + 4.0) / caps.grid;
      for (int it = 0; it < 40; ++it, step *= 0.7)
        for (double du : {-step, step}) {
          std::vector<double> tu = u;
          tu[i] += du;
          double sc = score(tu, frac);
          if (sc > best) {
            best = sc;
            u = tu;
          }
          std::vector<double> tf = frac;
          tf[i] = std::clamp(frac[i] + du / (frames[i].length + 4.0), 0.05, 0.999);
          sc = score(u, tf);
          if (sc > best) {
            best = sc;
            frac = tf;
          }
        }
    }
    if (best <= before) break;
  }
  try {
    cert.disks = build(u, frac);
    Margins m = margins(gens, cert.disks);
    cert.disjointness_margin = m.disjoint;
    cert.mapping_margin = m.mapping;
  } catch (const Error& e) {
    cert.failure = e.what();
    return cert;
  }
  if (n == 1) cert.disjointness_margin = disjointness_margin(cert.disks[0].minus, cert.disks[0].plus);
  cert.certified = cert.disjointness_margin > caps.floor && cert.mapping_margin > caps.floor;
  if (!cert.certified)
    cert.failure = "no ping-pong disks: disjointness margin " + fmt(cert.disjointness_margin) + ", mapping margin " +
                   fmt(cert.mapping_margin);
  return cert;
}

namespace {

// Positive outside the disk, negative inside.
double outside_by(const Disk& d, const cplx& p) {
  double r = std::abs(p - d.center) - d.radius;
  return d.exterior ? -r : r;
}

std::vector<cplx> boundary(const Disk& d, int samples) {
  std::vector<cplx> pts;
  for (int k = 0; k < samples; ++k) pts.push_back(d.center + std::polar(d.radius, 2.0 * std::numbers::pi * k / samples));
  return pts;
}

}  // namespace

SchottkyCheck verify_schottky(const SchottkyCertificate& c, int samples) {
  SchottkyCheck out;
  if (c.disks.size() != c.gens.size() || c.gens.empty()) return out;
  std::vector<Disk> all;
  for (const auto& p : c.disks) {
    all.push_back(p.minus);
    all.push_back(p.plus);
  }
  double dis = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i == j) continue;
      for (const cplx& p : boundary(all[i], samples)) dis = std::min(dis, outside_by(all[j], p));
      // Two disks through infinity always meet.
      if (all[i].exterior && all[j].exterior) dis = std::min(dis, -1.0);
    }
  double map = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.gens.size(); ++i) {
    const auto& g = c.gens[i];
    const auto& pr = c.disks[i];
    for (const cplx& p : boundary(pr.minus, samples)) {
      ExtPoint q = g.apply(ExtPoint(p));
      double depth = q.is_inf() ? (pr.plus.exterior ? std::numeric_limits<double>::infinity() : -1.0)
                                : -outside_by(pr.plus, q.value());
      map = std::min(map, depth);
    }
    ExtPoint probe = pr.minus.exterior ? ExtPoint(pr.minus.center) : ExtPoint::infinity();
    if (!pr.plus.contains(g.apply(probe))) map = std::min(map, -1.0);
  }
  out.disjointness_margin = dis;
  out.mapping_margin = map;
  out.ok = dis > 0.0 && map > 0.0;
  return out;
}

std::vector<CurveClass> density_battery() {
  std::vector<CurveClass> out;
  for (const char* w : {"a1", "a2", "a1 b1 A1 B1", "b1", "b2", "a1 b1", "a2 b2", "a1 a2", "b1 b2"}) out.emplace_back(w);
  return out;
}

std::vector<double> intersection_vector(const CurveOracle& o, const std::vector<Leaf>& m) {
  auto bat = density_battery();
  std::vector<double> v(bat.size(), 0.0);
  for (const auto& l : m)
    for (std::size_t j = 0; j < bat.size(); ++j) v[j] += l.weight * o.count(bat[j], l.curve);
  return v;
}

std::vector<double> projectivize(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) throw Error("zero intersection vector");
  std::vector<double> out;
  for (double x : v) out.push_back(x / m);
  return out;
}

double pml_distance(const std::vector<double>& u, const std::vector<double>& v) {
  auto a = projectivize(u), b = projectivize(v);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> target_vector(const CurveOracle& o, const MeasuredLamination& t) {
  if (!t.limit) return intersection_vector(o, t.leaves);
  std::vector<Leaf> cores;
  for (const auto& c : t.limit->core) {
    double w = 0.0;
    for (const auto& l : t.limit->base) w += l.weight * o.count(c, l.curve);
    if (w > 0.0) cores.push_back({c, w, false});
  }
  if (cores.empty()) {
    std::vector<Leaf> all = t.leaves;
    all.insert(all.end(), t.limit->base.begin(), t.limit->base.end());
    return intersection_vector(o, all);
  }
  return intersection_vector(o, cores);
}

DensityResult density_experiment(const CurveOracle& o, const MeasuredLamination& target, double eps,
                                 const DensityCaps& caps) {
  if (target.empty()) throw Error("empty density target");
  for (const auto& l : target.leaves)
    if (l.heavy || !(l.weight > 0.0)) throw Error("density targets need finite positive weights");
  DensityResult out;
  out.target = target_vector(o, target);
  if (target.limit) {
    for (int n = 1; n <= caps.max_twist; ++n) {
      auto leaves = twist_iterate(o.surface(), target, n);
      auto v = intersection_vector(o, leaves);
      double d = pml_distance(v, out.target);
      if (d < eps) {
        out.multiloop = leaves;
        out.twist = n;
        out.distance = d;
        out.result = v;
        out.certified = true;
        return out;
      }
    }
    throw CapExhausted("no twist iterate within " + fmt(eps) + " up to n = " + std::to_string(caps.max_twist));
  }
  std::vector<std::vector<double>> per;
  double top = 0.0;
  for (const auto& l : target.leaves) {
    per.push_back(intersection_vector(o, {{l.curve, 1.0, false}}));
    top = std::max(top, l.weight);
  }
  auto combine = [&](const std::vector<long>& n) {
    std::vector<double> v(per.front().size(), 0.0);
    for (std::size_t k = 0; k < n.size(); ++k)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += static_cast<double>(n[k]) * per[k][j];
    return v;
  };
  auto finish = [&](const std::vector<long>& n, int den) {
    for (std::size_t k = 0; k < n.size(); ++k)
      if (n[k] > 0) out.multiloop.push_back({target.leaves[k].curve, static_cast<double>(n[k]), false});
    out.result = combine(n);
    out.distance = pml_distance(out.result, out.target);
    out.denominator = den;
    out.certified = out.distance < eps;
    return out;
  };
  bool integral = true;
  std::vector<long> exact;
  for (const auto& l : target.leaves) {
    double r = std::round(l.weight);
    if (r < 1.0 || std::abs(l.weight - r) > 1e-12) integral = false;
    exact.push_back(static_cast<long>(r));
  }
  if (integral) return finish(exact, 1);
  for (int den = 1; den <= caps.max_denominator; ++den) {
    std::vector<long> n;
    bool any = false;
    for (const auto& l : target.leaves) {
      n.push_back(std::lround(den * l.weight / top));
      any = any || n.back() > 0;
    }
    if (!any) continue;
    if (pml_distance(combine(n), out.target) < eps) return finish(n, den);
  }
  throw CapExhausted("no multiloop within " + fmt(eps) + " up to denominator " + std::to_string(caps.max_denominator));
}

std::vector<Leaf> fiber_weights(const std::vector<Leaf>& multiloop) {
  std::vector<Leaf> out = multiloop;
  for (auto& l : out) l.weight *= 2.0 * std::numbers::pi;
  return out;
}

std::vector<MeasuredLamination> random_multiloop_targets(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto below = [&](std::uint64_t n) { return static_cast<int>(rng() % n); };
  SurfacePresentation s(2);
  const std::vector<CurveClass> twist_curves{CurveClass("a1"), CurveClass("b1"), CurveClass("a2"), CurveClass("b2")};
  std::vector<MeasuredLamination> out;
  for (int t = 0; t < count; ++t) {
    std::vector<CurveClass> curves = reference_curves();
    int moves = 1 + below(3);
    for (int m = 0; m < moves; ++m) {
      const CurveClass& c = twist_curves[static_cast<std::size_t>(below(twist_curves.size()))];
      int e = below(2) ? 1 : -1;
      for (auto& x : curves) x = dehn_twist(s, c, x, e);
    }
    MeasuredLamination lam;
    int mask = 1 + below(7);
    for (std::size_t k = 0; k < curves.size(); ++k)
      if (mask & (1 << k)) lam.leaves.push_back({curves[k], 0.05 + 0.95 * uniform(), false});
    out.push_back(lam);
  }
  return out;
}

std::vector<DensityResult> density_batch(const CurveOracle& o, const std::vector<MeasuredLamination>& targets,
                                         double eps, const DensityCaps& caps) {
  std::vector<std::future<DensityResult>> jobs;
  for (const auto& t : targets)
    jobs.push_back(std::async(std::launch::async, [&o, &t, eps, &caps] { return density_experiment(o, t, eps, caps); }));
  std::vector<DensityResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace glab
