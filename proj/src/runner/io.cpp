#include "glab/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace glab::io {

namespace {

Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_num(const Json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error("schema: expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw Error("schema: expected a number");
  return j.get<double>();
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> to_nums(const Json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(to_num(x));
  return v;
}

Json pt(cplx z) { return Json::array({num(z.real()), num(z.imag())}); }

cplx to_pt(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("schema: expected [re, im]");
  return {to_num(j[0]), to_num(j[1])};
}

template <class T>
Json list(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(encode(x));
  return a;
}

template <class T>
std::vector<T> to_list(const Json& j) {
  if (!j.is_array()) throw Error("schema: expected an array");
  std::vector<T> v;
  for (const auto& x : j) v.push_back(decode<T>(x));
  return v;
}

std::string generator_name(int k) {
  return std::string(k % 2 == 0 ? "a" : "b") + std::to_string(k / 2 + 1);
}

const char* kind_name(FareyCase k) { return k == FareyCase::torus ? "torus" : "sphere"; }
const char* kind_name(MoveKind k) { return k == MoveKind::torus ? "torus" : "sphere"; }

template <class E>
E to_kind(const Json& j) {
  auto s = j.get<std::string>();
  if (s == "torus") return E::torus;
  if (s == "sphere") return E::sphere;
  throw Error("schema: unknown kind \"" + s + "\"");
}

template <class F>
auto guarded(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse error at byte " + std::to_string(e.byte));
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

Json encode(const ExtPoint& p) {
  if (p.is_inf()) return "inf";
  return pt(p.value());
}

template <>
ExtPoint decode<ExtPoint>(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtPoint::infinity();
  return ExtPoint(to_pt(j));
}

Json encode(const MobiusMap& m) {
  Json a = Json::array();
  for (cplx z : m.entries()) {
    a.push_back(num(z.real()));
    a.push_back(num(z.imag()));
  }
  return a;
}

template <>
MobiusMap decode<MobiusMap>(const Json& j) {
  if (!j.is_array() || j.size() != 8) throw Error("schema: a matrix is 8 numbers (re, im of a, b, c, d)");
  auto v = to_nums(j);
  cplx a(v[0], v[1]), b(v[2], v[3]), c(v[4], v[5]), d(v[6], v[7]);
  if (std::abs(a * d - b * c - 1.0) < 1e-12) return MobiusMap::from_sl2(a, b, c, d);
  return MobiusMap(a, b, c, d);
}

Json encode(const CurveClass& c) { return c.str(); }

template <>
CurveClass decode<CurveClass>(const Json& j) {
  return guarded([&] { return CurveClass(j.get<std::string>()); });
}

Json encode(const Slope& s) { return s.str(); }

template <>
Slope decode<Slope>(const Json& j) {
  if (j.is_number_integer()) return Slope(j.get<long>(), 1);
  return guarded([&] { return Slope::parse(j.get<std::string>()); });
}

Json encode(const FareyTriangle& t) { return Json::array({encode(t.s[0]), encode(t.s[1]), encode(t.s[2])}); }

template <>
FareyTriangle decode<FareyTriangle>(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("schema: a Farey triangle is three slopes");
  return FareyTriangle(decode<Slope>(j[0]), decode<Slope>(j[1]), decode<Slope>(j[2]));
}

Json encode(const FNCoordinates& f) {
  return Json{{"decomposition", f.decomposition},
              {"lengths", nums(f.lengths)},
              {"twists", nums(f.twists)},
              {"bends", nums(f.bends)}};
}

template <>
FNCoordinates decode<FNCoordinates>(const Json& j) {
  return guarded([&] {
    FNCoordinates f;
    f.decomposition = j.value("decomposition", f.decomposition);
    if (j.contains("lengths")) f.lengths = to_nums(j.at("lengths"));
    if (j.contains("twists")) f.twists = to_nums(j.at("twists"));
    if (j.contains("bends")) f.bends = to_nums(j.at("bends"));
    if (f.lengths.size() != 3 || f.twists.size() != 3 || f.bends.size() != 3)
      throw Error("schema: FN coordinates need three lengths, twists and bends");
    return f;
  });
}

Json encode(const HolonomyRep& r) {
  Json g = Json::object();
  for (int k = 0; k < 2 * r.genus(); ++k) g[generator_name(k)] = encode(r.generator(k));
  return Json{{"genus", r.genus()}, {"generators", g}};
}

template <>
HolonomyRep decode<HolonomyRep>(const Json& j) {
  return guarded([&] {
    if (!j.contains("generators")) return build_from_fn(decode<FNCoordinates>(j));
    int genus = j.value("genus", 2);
    const auto& g = j.at("generators");
    std::vector<MobiusMap> gens;
    for (int k = 0; k < 2 * genus; ++k) {
      auto name = generator_name(k);
      if (!g.contains(name)) throw Error("schema: missing generator " + name);
      gens.push_back(decode<MobiusMap>(g.at(name)));
    }
    return HolonomyRep(genus, gens);
  });
}

Json encode(const Leaf& l) { return Json{{"curve", l.curve.str()}, {"weight", num(l.weight)}, {"heavy", l.heavy}}; }

template <>
Leaf decode<Leaf>(const Json& j) {
  return guarded([&] {
    Leaf l;
    l.curve = decode<CurveClass>(j.at("curve"));
    l.heavy = j.value("heavy", false);
    if (j.contains("weight")) l.weight = to_num(j.at("weight"));
    if (std::isinf(l.weight)) l.heavy = true;
    return l;
  });
}

Json encode(const TwistLimit& t) { return Json{{"core", list(t.core)}, {"base", list(t.base)}}; }

template <>
TwistLimit decode<TwistLimit>(const Json& j) {
  return guarded([&] {
    TwistLimit t;
    t.core = to_list<CurveClass>(j.at("core"));
    t.base = to_list<Leaf>(j.at("base"));
    return t;
  });
}

Json encode(const MeasuredLamination& m) {
  Json j{{"leaves", list(m.leaves)}};
  if (m.limit) j["limit"] = encode(*m.limit);
  return j;
}

template <>
MeasuredLamination decode<MeasuredLamination>(const Json& j) {
  return guarded([&] {
    MeasuredLamination m;
    if (j.contains("leaves")) m.leaves = to_list<Leaf>(j.at("leaves"));
    if (j.contains("limit") && !j.at("limit").is_null()) m.limit = decode<TwistLimit>(j.at("limit"));
    return m;
  });
}

Json encode(const GraftLeaf& l) { return Json{{"curve", l.curve.str()}, {"multiple", l.multiple}, {"heavy", l.heavy}}; }

template <>
GraftLeaf decode<GraftLeaf>(const Json& j) {
  return guarded([&] {
    GraftLeaf l;
    l.curve = decode<CurveClass>(j.at("curve"));
    l.multiple = j.value("multiple", 0L);
    l.heavy = j.value("heavy", false);
    return l;
  });
}

Json encode(const GraftedStructure& c) { return Json{{"tau", encode(c.tau)}, {"leaves", list(c.leaves)}}; }

template <>
GraftedStructure decode<GraftedStructure>(const Json& j) {
  return guarded([&] {
    auto c = GraftedStructure::fuchsian(decode<FNCoordinates>(j.at("tau")));
    if (j.contains("leaves")) c.leaves = to_list<GraftLeaf>(j.at("leaves"));
    return c;
  });
}

Json encode(const PantsDecomposition& p) { return Json{{"genus", p.genus}, {"curves", list(p.curves)}}; }

template <>
PantsDecomposition decode<PantsDecomposition>(const Json& j) {
  return guarded([&] {
    PantsDecomposition p;
    if (j.is_array()) {
      p.curves = to_list<CurveClass>(j);
      return p;
    }
    p.genus = j.value("genus", 2);
    p.curves = to_list<CurveClass>(j.at("curves"));
    return p;
  });
}

Json encode(const ElementaryMove& m) {
  return Json{{"removed", m.removed.str()},
              {"added", m.added.str()},
              {"kind", kind_name(m.kind)},
              {"region", Json{{"kind", kind_name(m.region.kind)}, {"boundary", list(m.region.boundary)}}}};
}

template <>
ElementaryMove decode<ElementaryMove>(const Json& j) {
  return guarded([&] {
    ElementaryMove m;
    m.removed = decode<CurveClass>(j.at("removed"));
    m.added = decode<CurveClass>(j.at("added"));
    m.kind = to_kind<MoveKind>(j.at("kind"));
    if (j.contains("region")) {
      m.region.kind = to_kind<MoveKind>(j.at("region").at("kind"));
      m.region.boundary = to_list<CurveClass>(j.at("region").at("boundary"));
    }
    return m;
  });
}

Json encode(const LaminationSeqSpec& s) {
  return Json{{"index", s.index},       {"kind", kind_name(s.kind)}, {"boundary", list(s.boundary)},
              {"m_from", s.m_from.str()}, {"m_to", s.m_to.str()},     {"handle", s.handle}};
}

template <>
LaminationSeqSpec decode<LaminationSeqSpec>(const Json& j) {
  return guarded([&] {
    LaminationSeqSpec s;
    s.index = j.value("index", 0);
    if (j.contains("kind")) s.kind = to_kind<FareyCase>(j.at("kind"));
    if (j.contains("boundary")) s.boundary = to_list<CurveClass>(j.at("boundary"));
    s.m_from = decode<Slope>(j.at("m_from"));
    s.m_to = decode<Slope>(j.at("m_to"));
    s.handle = j.value("handle", 1);
    return s;
  });
}

Json encode(const PlanCaps& c) {
  return Json{{"depth", c.path.depth},
              {"word_cap", c.path.word_cap},
              {"max_twist", c.max_twist},
              {"angle", Json{{"tol", num(c.angle.tol)},
                             {"first_iterate", c.angle.first_iterate},
                             {"max_iterate", c.angle.max_iterate}}}};
}

template <>
PlanCaps decode<PlanCaps>(const Json& j) {
  return guarded([&] {
    PlanCaps c;
    c.path.depth = j.value("depth", c.path.depth);
    c.path.word_cap = j.value("word_cap", c.path.word_cap);
    c.max_twist = j.value("max_twist", c.max_twist);
    if (j.contains("angle")) {
      const auto& a = j.at("angle");
      if (a.contains("tol")) c.angle.tol = to_num(a.at("tol"));
      c.angle.first_iterate = a.value("first_iterate", c.angle.first_iterate);
      c.angle.max_iterate = a.value("max_iterate", c.angle.max_iterate);
    }
    return c;
  });
}

Json encode(const GraftLimit& g) {
  Json steps = Json::array();
  for (const auto& s : g.steps) steps.push_back(Json{{"i", s.i}, {"tau", encode(s.tau)}, {"leaves", list(s.leaves)}});
  return Json{{"steps", steps},
              {"limit", list(g.limit)},
              {"boundary_length", num(g.boundary_length)},
              {"translation_length", num(g.translation_length)},
              {"residual", num(g.residual)}};
}

Json encode(const GraftPlan& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps)
    steps.push_back(Json{{"loop", s.loop.str()},
                         {"count", s.count},
                         {"twist", s.twist},
                         {"target", s.target.str()},
                         {"angle", num(s.angle)},
                         {"delta", num(s.delta)},
                         {"ball", s.ball},
                         {"certified", s.certified},
                         {"note", s.note}});
  return Json{{"m_sharp", encode(p.m_sharp)},
              {"m_flat", encode(p.m_flat)},
              {"path", list(p.path)},
              {"specs", list(p.specs)},
              {"steps", steps},
              {"terminal", list(p.terminal)},
              {"cap_exhausted", p.cap_exhausted},
              {"certified", p.certified()},
              {"provenance", p.provenance}};
}

Json encode(const ConvergenceTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"j", r.j}, {"distance", num(r.distance)}, {"ok", r.ok}, {"failure", r.failure}});
  return Json{{"rows", rows},
              {"tail_from", t.tail_from},
              {"forward_nonincreasing", t.forward_nonincreasing},
              {"backward_nonincreasing", t.backward_nonincreasing},
              {"forward_final", num(t.forward_final)},
              {"backward_final", num(t.backward_final)}};
}

Json encode(const Disk& d) { return Json{{"center", pt(d.center)}, {"radius", num(d.radius)}, {"exterior", d.exterior}}; }

Json encode(const SchottkyCertificate& c) {
  Json disks = Json::array();
  for (const auto& p : c.disks) disks.push_back(Json{{"minus", encode(p.minus)}, {"plus", encode(p.plus)}});
  return Json{{"gens", list(c.gens)},
              {"disks", disks},
              {"disjointness_margin", num(c.disjointness_margin)},
              {"mapping_margin", num(c.mapping_margin)},
              {"certified", c.certified},
              {"failure", c.failure}};
}

Json encode(const SchottkyCheck& c) {
  return Json{{"ok", c.ok},
              {"disjointness_margin", num(c.disjointness_margin)},
              {"mapping_margin", num(c.mapping_margin)}};
}

Json encode(const DensityResult& r) {
  return Json{{"multiloop", list(r.multiloop)}, {"denominator", r.denominator}, {"twist", r.twist},
              {"distance", num(r.distance)},    {"certified", r.certified},     {"target", nums(r.target)},
              {"result", nums(r.result)}};
}

}  // namespace glab::io
