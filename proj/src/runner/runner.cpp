#include "glab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <set>

namespace glab {

using io::Json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Context {
  const ExperimentConfig& cfg;
  Json inputs;  // resolved
  RunArtifact& art;

  bool has(const std::string& k) const { return inputs.contains(k); }
  template <class T>
  T input(const std::string& k) const {
    try {
      return io::decode<T>(inputs.at(k));
    } catch (const Error& e) {
      throw Error("input " + k + ": " + e.what());
    }
  }
  template <class T>
  T input_or(const std::string& k, const T& fallback) const {
    return has(k) ? input<T>(k) : fallback;
  }
  template <class T>
  T param(const std::string& k, const T& fallback) const {
    if (!cfg.params.contains(k)) return fallback;
    try {
      return cfg.params.at(k).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error("schema: param " + k + " has the wrong type");
    }
  }
  double tol(const std::string& k, double fallback) const {
    if (!cfg.tolerances.contains(k)) return fallback;
    const auto& v = cfg.tolerances.at(k);
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw Error("schema: tolerance " + k + " must be positive");
    return v.get<double>();
  }

  // Numeric claim value < threshold.
  bool below(const std::string& claim, double value, double threshold, const Json& truncation) {
    bool ok = value < threshold;
    art.certificates.push_back(Json{{"claim", claim},
                                    {"value", value},
                                    {"relation", "<"},
                                    {"threshold", threshold},
                                    {"passed", ok},
                                    {"truncation", truncation}});
    return ok;
  }
  bool holds(const std::string& claim, bool ok, const Json& truncation) {
    art.certificates.push_back(Json{{"claim", claim}, {"passed", ok}, {"truncation", truncation}});
    return ok;
  }
};

struct Experiment {
  std::string id;
  std::set<std::string> inputs, params, tolerances;
  std::function<void(Context&)> run;
};

std::string cell(double x) { return format_double(x); }
std::string cell(long x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }

// Finite-radius loxodromicity certificate of the holonomy, recorded with
// every experiment that takes one.
bool record_scan(Context& cx, const HolonomyRep& rho) {
  int r = cx.cfg.caps.word_ball;
  auto rep = purely_loxodromic_scan(rho, r);
  cx.art.results["loxodromic_scan"] = Json{{"radius", r},
                                           {"words_checked", rep.words_checked},
                                           {"violations", rep.violations.size()},
                                           {"endpoint_violations", rep.endpoint_violations.size()},
                                           {"certified", rep.certified},
                                           {"scope", "words of length <= radius only"}};
  return cx.holds("holonomy purely loxodromic on the word ball", rep.certified, Json{{"word_ball", r}});
}

void set_status(Context& cx, bool ok) { cx.art.status = ok ? RunStatus::certified : RunStatus::uncertified; }

HolonomyRep fn_or_rep(const Context& cx, const std::string& key) {
  return cx.has(key) ? cx.input<HolonomyRep>(key) : build_from_fn(FNCoordinates{});
}

void graft_iterate(Context& cx) {
  GraftedStructure c = cx.has("structure") ? cx.input<GraftedStructure>("structure")
                                           : GraftedStructure::fuchsian(cx.input_or("fn", FNCoordinates{}));
  CurveClass loop(cx.param<std::string>("loop", "a1"));
  long imax = cx.param<long>("imax", 5);
  if (imax < 1) throw Error("schema: imax must be positive");
  const auto& caps = cx.cfg.caps;
  CurveOracle o(c.rho, caps.word_ball);
  bool ok = record_scan(cx, c.rho);
  GraftLimit lim = iterate_graft_limit(o, c, loop, imax);
  Json trunc{{"imax", imax}, {"word_ball", caps.word_ball}};

  auto multiple_of = [&](const std::vector<GraftLeaf>& leaves) -> long {
    for (const auto& l : leaves)
      if (isotopic(o, l.curve, loop)) return l.multiple;
    return 0;
  };
  long m0 = multiple_of(c.leaves);
  RunTable t{"steps", {"i", "multiple", "weight", "weight_over_2pi", "tau_unchanged"}, {}};
  RunPlot p{"weights", "grafting weight along " + loop.str(), "i", "weight", false, {}};
  bool tau_exact = true, weights_exact = true;
  for (const auto& s : lim.steps) {
    long m = multiple_of(s.leaves);
    double w = kTwoPi * static_cast<double>(m);
    bool same = s.tau == c.tau;
    tau_exact = tau_exact && same;
    weights_exact = weights_exact && m == m0 + s.i;
    t.rows.push_back({cell(s.i), cell(m), cell(w), cell(w / kTwoPi), cell(same)});
    p.points.emplace_back(static_cast<double>(s.i), w);
  }
  std::vector<CurveClass> heavy;
  for (const auto& l : lim.limit)
    if (l.heavy) heavy.push_back(l.curve);
  ok = cx.holds("hyperbolic structure unchanged at every step", tau_exact, trunc) && ok;
  ok = cx.holds("weight at step i is 2*pi*(initial multiple + i)", weights_exact, trunc) && ok;
  ok = cx.holds("the loop is the only heavy leaf of the limit", heavy.size() == 1 && isotopic(o, heavy[0], loop),
                trunc) && ok;
  ok = cx.below("|boundary length - translation length|", lim.residual, cx.tol("residual", 1e-9), trunc) && ok;
  cx.art.results["graft_limit"] = io::encode(lim);
  cx.art.results["graft_limit"]["truncation"] = trunc;
  cx.art.tables.push_back(std::move(t));
  cx.art.plots.push_back(std::move(p));
  set_status(cx, ok);
}

std::vector<double> deltas(const Context& cx) {
  if (cx.cfg.params.contains("delta") && cx.cfg.params.at("delta").is_number())
    return {cx.cfg.params.at("delta").get<double>()};
  auto d = cx.param<std::vector<double>>("delta", {0.3});
  if (d.empty()) throw Error("schema: delta must be nonempty");
  for (double x : d)
    if (!(x > 0.0)) throw Error("schema: delta entries must be positive");
  return d;
}

void graft_plan_run(Context& cx) {
  if (!cx.has("sharp") || !cx.has("flat")) throw Error("schema: graft-plan needs inputs sharp and flat");
  auto sharp = cx.input<GraftedStructure>("sharp");
  auto flat = cx.input<GraftedStructure>("flat");
  const auto& caps = cx.cfg.caps;
  PlanCaps pc;
  pc.path.depth = caps.bfs_depth;
  pc.path.word_cap = cx.param<int>("word_cap", 2);
  pc.max_twist = caps.twist_iterations;
  if (cx.has("caps")) pc = cx.input<PlanCaps>("caps");
  auto d = deltas(cx);
  CurveOracle o(sharp.rho, caps.word_ball);
  bool ok = record_scan(cx, sharp.rho);
  GraftPlan plan = graft_plan(o, sharp, flat, d, pc);
  Json trunc{{"caps", io::encode(pc)}, {"word_ball", caps.word_ball}};
  RunTable t{"steps", {"step", "loop", "count", "twist", "target", "angle", "delta", "ball", "certified", "note"}, {}};
  RunPlot p{"angles", "angle certificates", "step", "angle", false, {}};
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto& s = plan.steps[k];
    t.rows.push_back({cell(static_cast<long>(k)), s.loop.str(), cell(s.count), cell(s.twist), s.target.str(),
                      cell(s.angle), cell(s.delta), cell(s.ball), cell(s.certified), s.note});
    p.points.emplace_back(static_cast<double>(k), s.angle);
    if (s.certified)
      cx.below("step " + std::to_string(k) + " angle below delta", s.angle, s.delta,
               Json{{"ball", s.ball}, {"max_twist", pc.max_twist}});
  }
  ok = cx.holds("every plan step certified", plan.certified(), trunc) && ok;
  cx.art.results["plan"] = io::encode(plan);
  cx.art.results["plan"]["truncation"] = trunc;
  cx.art.tables.push_back(std::move(t));
  cx.art.plots.push_back(std::move(p));
  if (plan.cap_exhausted)
    cx.art.status = RunStatus::cap_exhausted;
  else
    set_status(cx, ok);
}

LaminationSeqSpec default_spec() {
  LaminationSeqSpec s;
  s.m_from = Slope(1, 0);
  s.m_to = Slope(0, 1);
  return s;
}

void pleated_converge(Context& cx) {
  auto fn = cx.input_or("fn", FNCoordinates{});
  auto spec = cx.input_or("spec", default_spec());
  int jmin = cx.param<int>("jmin", -12), jmax = cx.param<int>("jmax", 12);
  int samples = cx.param<int>("samples", 24), tail_from = cx.param<int>("tail_from", 0);
  if (jmin > jmax) throw Error("schema: jmin must not exceed jmax");
  if (samples < 1) throw Error("schema: samples must be positive");
  bool ok = record_scan(cx, build_from_fn(fn));
  auto table = convergence_experiment(fn, spec, jmin, jmax, samples, tail_from);
  Json trunc{{"jmin", jmin}, {"jmax", jmax}, {"samples", samples}, {"tail_from", tail_from}};
  RunTable t{"convergence", {"j", "distance", "ok", "failure"}, {}};
  RunPlot p{"convergence", "sup distance to the limit map", "j", "log10 D", true, {}};
  bool rows_ok = true;
  for (const auto& r : table.rows) {
    t.rows.push_back({cell(r.j), cell(r.distance), cell(r.ok), r.failure});
    if (r.ok) p.points.emplace_back(static_cast<double>(r.j), r.distance);
    rows_ok = rows_ok && r.ok;
  }
  double dtol = cx.tol("distance", 1e-2);
  ok = cx.holds("every row realized", rows_ok, trunc) && ok;
  if (jmax > 0) {
    ok = cx.holds("D non-increasing toward +infinity", table.forward_nonincreasing, trunc) && ok;
    ok = cx.below("D at jmax", table.forward_final, dtol, trunc) && ok;
  }
  if (jmin < 0) {
    ok = cx.holds("D non-increasing toward -infinity", table.backward_nonincreasing, trunc) && ok;
    ok = cx.below("D at jmin", table.backward_final, dtol, trunc) && ok;
  }
  cx.art.results["convergence"] = io::encode(table);
  cx.art.results["convergence"]["truncation"] = trunc;
  cx.art.results["fn"] = io::encode(fn);
  cx.art.results["spec"] = io::encode(spec);
  cx.art.tables.push_back(std::move(t));
  cx.art.plots.push_back(std::move(p));
  set_status(cx, ok);
}

SpiralLamination lamination_input(const Context& cx, Json& desc) {
  Json l = cx.has("lam") ? cx.inputs.at("lam") : Json{{"kind", "standard"}};
  desc = l;
  std::string kind = l.value("kind", "standard");
  if (kind == "standard") return standard_spiral_lamination();
  LaminationSeqSpec spec = l.contains("spec") ? io::decode<LaminationSeqSpec>(l.at("spec")) : default_spec();
  if (kind == "sequence") return sequence_lamination(spec, l.value("j", 0));
  if (kind == "limit") return sequence_limit(spec, l.value("end", 1));
  throw Error("schema: lam kind must be standard, sequence or limit");
}

void pleated_realize(Context& cx) {
  HolonomyRep rho, dom;
  if (cx.has("rep") && !cx.inputs.at("rep").contains("generators")) {
    auto fn = cx.input<FNCoordinates>("rep");
    rho = build_from_fn(fn);
    fn.bends = {0.0, 0.0, 0.0};
    dom = build_from_fn(fn);
  } else {
    rho = fn_or_rep(cx, "rep");
    dom = cx.has("domain") ? cx.input<HolonomyRep>("domain") : rho;
  }
  if (!dom.fuchsian()) throw Error("schema: the domain representation must be Fuchsian");
  Json desc;
  auto nu = lamination_input(cx, desc);
  int n = cx.param<int>("samples", 50);
  if (n < 1) throw Error("schema: samples must be positive");
  bool ok = record_scan(cx, rho);
  PleatedSurface b = realize(dom, rho, nu);
  auto samples = sample_battery(b, n);
  std::vector<Word> gens;
  for (int k = 0; k < 2 * rho.genus(); ++k) gens.push_back(Word{k + 1});
  double res = equivariance_residual(b, samples, gens);
  double iso = stratum_isometry_defect(b);
  double dev = plane_deviation(b, samples);
  auto bends = bending_angles(b);
  Json trunc{{"samples", n}, {"generators", gens.size()}, {"required_radius", b.longest_core}};
  ok = cx.below("equivariance residual", res, cx.tol("equivariance", 1e-8), trunc) && ok;
  ok = cx.below("triangle isometry defect", iso, cx.tol("isometry", 1e-9), trunc) && ok;
  RunTable t{"bends", {"tri", "edge", "other", "other_edge", "deck", "angle"}, {}};
  RunPlot p{"bends", "bending angles", "edge", "angle", false, {}};
  double max_bend = 0.0;
  for (std::size_t k = 0; k < bends.size(); ++k) {
    const auto& e = bends[k];
    t.rows.push_back(
        {cell(e.tri), cell(e.edge), cell(e.other), cell(e.other_edge), format_word(e.deck), cell(e.angle)});
    p.points.emplace_back(static_cast<double>(k), e.angle);
    max_bend = std::max(max_bend, std::abs(e.angle));
  }
  if (rho.fuchsian()) ok = cx.below("Fuchsian bending angles", max_bend, cx.tol("bend", 1e-9), trunc) && ok;
  cx.art.results["realization"] = Json{{"lamination", desc},
                                       {"triangles", b.gallery.size()},
                                       {"equivariance_residual", res},
                                       {"isometry_defect", iso},
                                       {"plane_deviation", dev},
                                       {"max_bend", max_bend},
                                       {"truncation", trunc}};
  cx.art.results["rep"] = io::encode(rho);
  cx.art.tables.push_back(std::move(t));
  cx.art.plots.push_back(std::move(p));
  set_status(cx, ok);
}

void schottky_run(Context& cx) {
  std::vector<MobiusMap> gens;
  Json trunc = Json::object();
  if (cx.has("matrices")) {
    for (const auto& m : cx.inputs.at("matrices")) gens.push_back(io::decode<MobiusMap>(m));
  } else {
    HolonomyRep rho = fn_or_rep(cx, "rep");
    record_scan(cx, rho);
    std::string frame = cx.param<std::string>("frame", "raw");
    if (frame == "realified")
      rho = rho.realified();
    else if (frame != "raw")
      throw Error("schema: frame must be raw or realified");
    auto words = cx.param<std::vector<std::string>>("gens", {"a1", "b1 A1 B1"});
    for (const auto& w : words) gens.push_back(rho.evaluate(parse_word(w)));
    trunc["frame"] = frame;
    cx.art.results["words"] = words;
  }
  if (gens.empty()) throw Error("schema: no generators");
  PingPongCaps pc;
  pc.max_power = cx.param<int>("max_power", pc.max_power);
  pc.grid = cx.param<int>("grid", pc.grid);
  pc.sweeps = cx.param<int>("sweeps", pc.sweeps);
  int samples = cx.param<int>("samples", 720);
  trunc["max_power"] = pc.max_power;
  trunc["grid"] = pc.grid;
  trunc["sweeps"] = pc.sweeps;
  trunc["verify_samples"] = samples;
  auto cert = ping_pong_certify(gens, pc);
  bool ok = cx.holds("ping-pong disks found", cert.certified, trunc);
  SchottkyCheck check;
  if (cert.certified) {
    check = verify_schottky(cert, samples);
    ok = cx.holds("independent boundary recomputation", check.ok, trunc) && ok;
    ok = cx.holds("positive disjointness margin", check.disjointness_margin > 0.0, trunc) && ok;
    ok = cx.holds("positive mapping margin", check.mapping_margin > 0.0, trunc) && ok;
  }
  RunTable t{"disks", {"generator", "role", "center_re", "center_im", "radius", "exterior"}, {}};
  for (std::size_t k = 0; k < cert.disks.size(); ++k)
    for (auto [role, d] : {std::pair{"minus", cert.disks[k].minus}, std::pair{"plus", cert.disks[k].plus}})
      t.rows.push_back({cell(static_cast<long>(k)), role, cell(d.center.real()), cell(d.center.imag()), cell(d.radius),
                        cell(d.exterior)});
  cx.art.results["certificate"] = io::encode(cert);
  cx.art.results["verification"] = io::encode(check);
  cx.art.results["truncation"] = trunc;
  cx.art.tables.push_back(std::move(t));
  set_status(cx, ok);
}

std::string multiloop_str(const std::vector<Leaf>& m) {
  std::string s;
  for (const auto& l : m) {
    if (!s.empty()) s += " + ";
    s += format_double(l.weight) + "*(" + l.curve.str() + ")";
  }
  return s;
}

void density_run(Context& cx) {
  HolonomyRep rho = fn_or_rep(cx, "rep");
  if (!rho.fuchsian()) throw Error("schema: density needs a Fuchsian representation");
  double eps = cx.param<double>("eps", 0.05);
  if (!(eps > 0.0)) throw Error("schema: eps must be positive");
  DensityCaps dc;
  dc.max_denominator = cx.param<int>("max_denominator", dc.max_denominator);
  dc.max_twist = cx.cfg.caps.twist_iterations;
  const auto& caps = cx.cfg.caps;
  std::vector<MeasuredLamination> targets;
  if (cx.has("target"))
    targets.push_back(cx.input<MeasuredLamination>("target"));
  else
    targets = random_multiloop_targets(cx.param<int>("count", 20), cx.cfg.seed);
  if (targets.empty()) throw Error("schema: no density targets");
  bool ok = record_scan(cx, rho);
  CurveOracle o(rho, caps.word_ball);
  struct Outcome {
    DensityResult r;
    bool capped = false;
    std::string note;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& t : targets)
    jobs.push_back(std::async(std::launch::async, [&o, &t, eps, dc] {
      Outcome out;
      try {
        out.r = density_experiment(o, t, eps, dc);
      } catch (const CapExhausted& e) {
        out.capped = true;
        out.note = e.what();
      }
      return out;
    }));
  Json trunc{{"eps", eps},
             {"max_denominator", dc.max_denominator},
             {"max_twist", dc.max_twist},
             {"word_ball", caps.word_ball},
             {"battery", density_battery().size()}};
  RunTable t{"density", {"target", "distance", "denominator", "twist", "certified", "cap_exhausted", "multiloop"}, {}};
  RunPlot p{"density", "distance to target in the battery metric", "target", "distance", false, {}};
  Json rows = Json::array();
  bool capped = false;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Outcome out = jobs[k].get();
    capped = capped || out.capped;
    Json row{{"target", io::encode(targets[k])}, {"cap_exhausted", out.capped}};
    if (out.capped) {
      row["note"] = out.note;
      t.rows.push_back({cell(static_cast<long>(k)), "", "", "", cell(false), cell(true), ""});
    } else {
      row["result"] = io::encode(out.r);
      row["fiber_weights"] = io::Json::array();
      for (const auto& l : fiber_weights(out.r.multiloop)) row["fiber_weights"].push_back(io::encode(l));
      t.rows.push_back({cell(static_cast<long>(k)), cell(out.r.distance), cell(out.r.denominator), cell(out.r.twist),
                        cell(out.r.certified), cell(false), multiloop_str(out.r.multiloop)});
      p.points.emplace_back(static_cast<double>(k), out.r.distance);
      ok = cx.below("target " + std::to_string(k) + " distance", out.r.distance, eps, trunc) && ok;
    }
    rows.push_back(row);
  }
  cx.art.results["density"] = Json{{"seed", cx.cfg.seed}, {"targets", rows}, {"truncation", trunc}};
  cx.art.tables.push_back(std::move(t));
  cx.art.plots.push_back(std::move(p));
  if (capped)
    cx.art.status = RunStatus::cap_exhausted;
  else
    set_status(cx, ok);
}

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> r{
      {"graft-iterate", {"fn", "structure"}, {"loop", "imax"}, {"residual"}, graft_iterate},
      {"graft-plan", {"sharp", "flat", "caps"}, {"delta", "word_cap"}, {}, graft_plan_run},
      {"pleated-converge", {"fn", "spec"}, {"jmin", "jmax", "samples", "tail_from"}, {"distance"}, pleated_converge},
      {"pleated-realize", {"rep", "domain", "lam"}, {"samples"}, {"equivariance", "isometry", "bend"}, pleated_realize},
      {"schottky",
       {"rep", "matrices"},
       {"gens", "frame", "max_power", "grid", "sweeps", "samples"},
       {},
       schottky_run},
      {"density", {"rep", "target"}, {"eps", "count", "max_denominator"}, {}, density_run},
  };
  return r;
}

const Experiment& find_experiment(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw Error("unknown experiment \"" + id + "\"");
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& what) {
  if (!obj.is_object()) throw Error("schema: " + what + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw Error("schema: unknown " + what + " key \"" + k + "\"");
}

bool safe_relative(const std::string& s) {
  if (s.empty()) return false;
  std::filesystem::path p(s);
  if (p.is_absolute() || p.has_root_name()) return false;
  for (const auto& part : p)
    if (part == ".." || part == ".") return false;
  return true;
}

Json resolve_inputs(const ExperimentConfig& cfg) {
  Json out = Json::object();
  for (const auto& [k, v] : cfg.inputs.items()) {
    if (v.is_string()) {
      std::filesystem::path p(v.get<std::string>());
      if (p.is_relative()) p = cfg.base_dir / p;
      out[k] = io::read_file(p.string());
    } else {
      out[k] = v;
    }
  }
  return out;
}

}  // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::certified:
      return "certified";
    case RunStatus::cap_exhausted:
      return "cap-exhausted";
    default:
      return "uncertified";
  }
}

int RunArtifact::exit_code() const { return status == RunStatus::certified ? 0 : 2; }

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"experiment", c.experiment},
              {"inputs", c.inputs},
              {"params", c.params},
              {"caps",
               Json{{"word_ball", c.caps.word_ball},
                    {"bfs_depth", c.caps.bfs_depth},
                    {"twist_iterations", c.caps.twist_iterations}}},
              {"tolerances", c.tolerances},
              {"seed", c.seed},
              {"output", c.output.empty() ? c.experiment : c.output}};
}

ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  check_keys(j, {"experiment", "inputs", "params", "caps", "tolerances", "seed", "output"}, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    c.experiment = j.at("experiment").get<std::string>();
    const auto& e = find_experiment(c.experiment);
    if (j.contains("inputs")) c.inputs = j.at("inputs");
    if (j.contains("params")) c.params = j.at("params");
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances");
    check_keys(c.inputs, e.inputs, "input");
    check_keys(c.params, e.params, "param");
    check_keys(c.tolerances, e.tolerances, "tolerance");
    if (j.contains("caps")) {
      const auto& k = j.at("caps");
      check_keys(k, {"word_ball", "bfs_depth", "twist_iterations"}, "cap");
      c.caps.word_ball = k.value("word_ball", c.caps.word_ball);
      c.caps.bfs_depth = k.value("bfs_depth", c.caps.bfs_depth);
      c.caps.twist_iterations = k.value("twist_iterations", c.caps.twist_iterations);
    }
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
        throw Error("schema: seed must be a nonnegative integer");
      c.seed = s.get<std::uint64_t>();
    }
    c.output = j.value("output", c.experiment);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
  if (c.caps.word_ball <= 0 || c.caps.bfs_depth <= 0 || c.caps.twist_iterations <= 0)
    throw Error("schema: caps must be positive");
  if (!safe_relative(c.output)) throw Error("schema: output must be a relative path without . or ..");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(io::read_file(path.string()), path.parent_path().empty() ? "." : path.parent_path());
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunArtifact run_experiment(const ExperimentConfig& cfg) {
  const auto& e = find_experiment(cfg.experiment);
  ExperimentConfig snap = cfg;
  snap.inputs = resolve_inputs(cfg);
  RunArtifact art;
  art.config = to_json(snap);
  // Round trip through the validator so the snapshot is canonical.
  config_from_json(art.config);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(art.config.dump())));
  art.config_hash = hex;
  art.output = art.config.at("output").get<std::string>();
  Context cx{cfg, snap.inputs, art};
  try {
    e.run(cx);
  } catch (const CapExhausted& x) {
    art.status = RunStatus::cap_exhausted;
    art.results["cap_exhausted"] = x.what();
  }
  return art;
}

std::string artifact_json(const RunArtifact& a) {
  Json tables = Json::array(), plots = Json::array();
  for (const auto& t : a.tables) tables.push_back(Json{{"name", t.name}, {"file", t.name + ".csv"}, {"rows", t.rows.size()}});
  for (const auto& p : a.plots) plots.push_back(Json{{"name", p.name}, {"file", p.name + ".svg"}});
  Json j{{"experiment", a.config.at("experiment")},
         {"config_hash", a.config_hash},
         {"seed", a.config.at("seed")},
         {"status", to_string(a.status)},
         {"exit_code", a.exit_code()},
         {"config", a.config},
         {"certificates", a.certificates},
         {"results", a.results},
         {"tables", tables},
         {"plots", plots}};
  return j.dump(2) + "\n";
}

std::string csv(const RunTable& t) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + quote(cells[k]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string svg(const RunPlot& p) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  };
  std::vector<std::pair<double, double>> pts;
  for (auto [x, y] : p.points) {
    if (p.log_y) {
      if (!(y > 0.0)) continue;
      y = std::log10(y);
    }
    if (std::isfinite(x) && std::isfinite(y)) pts.emplace_back(x, y);
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  char buf[256];
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n", W, H,
                W, H);
  s += buf;
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<path d=\"M%g %g L%g %g L%g %g\" fill=\"none\" stroke=\"black\"/>\n", L, T, L, H - B, W - R, H - B);
  s += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">", L);
  s += buf + esc(p.title) + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">",
                (L + W - R) / 2, H - 12);
  s += buf + esc(p.xlabel) + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 16 %g)\">",
                (T + H - B) / 2, (T + H - B) / 2);
  s += buf + esc(p.ylabel) + "</text>\n";
  for (auto [v, x, y, anchor] : {std::tuple{x0, sx(x0), H - B + 16, "middle"}, std::tuple{x1, sx(x1), H - B + 16, "middle"},
                                 std::tuple{y0, L - 6, sy(y0) + 4, "end"}, std::tuple{y1, L - 6, sy(y1) + 4, "end"}}) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.3f\" y=\"%.3f\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"%s\">%.4g</text>\n",
                  x, y, anchor, v);
    s += buf;
  }
  if (!pts.empty()) {
    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k ? " " : "", sx(pts[k].first), sy(pts[k].second));
      s += buf;
    }
    s += "\"/>\n";
    for (auto [x, y] : pts) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"steelblue\"/>\n", sx(x), sy(y));
      s += buf;
    }
  }
  s += "</svg>\n";
  return s;
}

std::filesystem::path output_root(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("GLAB_OUT"); env && *env) return env;
  return fallback;
}

std::vector<std::filesystem::path> write_artifact(const RunArtifact& a, const std::filesystem::path& root) {
  if (!safe_relative(a.output)) throw Error("refusing to write outside the output root: " + a.output);
  auto dir = root / a.output;
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  auto put = [&](const std::string& name, const std::string& text) {
    auto f = dir / name;
    std::ofstream out(f, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + f.string());
    out << text;
    files.push_back(f);
  };
  put("artifact.json", artifact_json(a));
  for (const auto& t : a.tables) put(t.name + ".csv", csv(t));
  for (const auto& p : a.plots) put(p.name + ".svg", svg(p));
  return files;
}

RunArtifact rerun(const std::filesystem::path& artifact_file) {
  Json j = io::read_file(artifact_file.string());
  if (!j.contains("config")) throw Error("schema: artifact has no embedded config");
  return run_experiment(config_from_json(j.at("config"), artifact_file.parent_path()));
}

}  // namespace glab
