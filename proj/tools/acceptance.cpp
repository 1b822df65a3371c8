#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glab/runner.hpp"

using namespace glab;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

MobiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
    if (std::abs(a * d - b * c) > 0.3) return MobiusMap(a, b, c, d);
  }
}

FNCoordinates bent(double eps) {
  FNCoordinates f;
  f.bends = {eps, 0.0, 0.0};
  return f;
}

LaminationSeqSpec handle_one() {
  LaminationSeqSpec s;
  s.m_from = Slope(1, 0);
  s.m_to = Slope(0, 1);
  return s;
}

PantsDecomposition pd(std::initializer_list<const char*> names) {
  PantsDecomposition p;
  for (const char* n : names) p.curves.push_back(CurveClass(n));
  return p;
}

Outcome classification() {
  std::mt19937_64 rng(1);
  const cplx e = std::polar(1.0, std::numbers::pi / 6);
  struct Seed {
    MobiusMap m;
    MobiusType type;
  };
  std::vector<Seed> seeds{{MobiusMap(2.0, 0.0, 0.0, 0.5), MobiusType::loxodromic},
                          {MobiusMap(cplx(1.0, 1.0), 0.0, 0.0, 1.0 / cplx(1.0, 1.0)), MobiusType::loxodromic},
                          {MobiusMap(1.0, 1.0, 0.0, 1.0), MobiusType::parabolic},
                          {MobiusMap(e, 0.0, 0.0, 1.0 / e), MobiusType::elliptic}};
  int wrong = 0, total = 0;
  for (const auto& s : seeds)
    for (int k = 0; k < 1000; ++k, ++total) {
      MobiusMap g = random_map(rng);
      if (classify(g * s.m * g.inverse(), 1e-9).type != s.type) ++wrong;
    }
  bool tr2 = classify_trace_sq(4.0, false) == MobiusType::parabolic &&
             classify_trace_sq(0.0, false) == MobiusType::elliptic &&
             classify_trace_sq(3.999, false) == MobiusType::elliptic &&
             classify_trace_sq(4.001, false) == MobiusType::loxodromic &&
             classify_trace_sq(-0.001, false) == MobiusType::loxodromic &&
             classify_trace_sq(cplx(2.0, 0.001), false) == MobiusType::loxodromic &&
             classify_trace_sq(4.0, true) == MobiusType::identity;
  return {wrong == 0 && tr2, std::to_string(total) + " conjugates, " + std::to_string(wrong) +
                                 " misclassified; trace-square rules " + (tr2 ? "match" : "differ")};
}

Outcome fn_fidelity() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> len(0.5, 4.0), tw(-2.0, 2.0);
  double worst_res = 0.0, worst_len = 0.0;
  auto refs = reference_curves();
  for (int i = 0; i < 10; ++i) {
    FNCoordinates f;
    f.lengths = {len(rng), len(rng), len(rng)};
    f.twists = {tw(rng), tw(rng), tw(rng)};
    auto rho = build_from_fn(f);
    worst_res = std::max(worst_res, rho.relator_residual());
    for (std::size_t k = 0; k < 3; ++k)
      worst_len = std::max(worst_len, std::abs(geodesic_length(rho, refs[k]) - f.lengths[k]));
  }
  return {worst_res < 1e-8 && worst_len < 1e-8,
          "relator residual " + fmt("%.2e", worst_res) + ", length error " + fmt("%.2e", worst_len)};
}

Outcome loxodromic_scan() {
  auto rho = build_from_fn(FNCoordinates{});
  auto rep = purely_loxodromic_scan(rho, 6);
  MobiusMap a(2.0, 0.0, 0.0, 0.5), b(3.0, 0.0, 1.0, 1.0 / 3.0);
  auto ev = endpoint_evidence(a, b);
  cplx tr = (a * b * a.inverse() * b.inverse()).trace();
  bool pass = rep.certified && rep.violations.empty() && rep.endpoint_violations.empty() && ev.shares_endpoint &&
              std::abs(tr - 2.0) < 1e-9;
  return {pass, "radius 6: " + std::to_string(rep.words_checked) + " words, certified " +
                    (rep.certified ? "yes" : "no") + ", " + std::to_string(rep.endpoint_violations.size()) +
                    " endpoint violations; shared-endpoint pair detected " + (ev.shares_endpoint ? "yes" : "no") +
                    ", |tr[A,B] - 2| = " + fmt("%.1e", std::abs(tr - 2.0))};
}

Outcome pants_path() {
  CurveOracle o(build_from_fn(FNCoordinates{}), 3);
  auto from = pd({"a1", "a2", "a1 b1 A1 B1"}), to = pd({"b1", "b2", "a1 b1 A1 B1"});
  auto path = pants_graph_path(o, from, to, {3, 1});
  auto cur = from;
  bool moves_ok = true;
  for (const auto& m : path) {
    int i = o.count(m.removed, m.added);
    moves_ok = moves_ok && (i == 1 || i == 2);
    cur = apply_move(o, cur, m);
    moves_ok = moves_ok && validate_pants_decomposition(o, cur).valid;
  }
  bool reached = same_decomposition(o, cur, to);
  return {moves_ok && reached, std::to_string(path.size()) + " moves at caps {depth 3, word 1}; replay " +
                                   (reached ? "reaches" : "misses") + " the target; intersections " +
                                   (moves_ok ? "all in {1, 2}" : "out of range")};
}

Outcome graft_limit() {
  auto c = GraftedStructure::fuchsian(FNCoordinates{});
  CurveOracle o(c.rho, 3);
  CurveClass a1("a1");
  auto lim = iterate_graft_limit(o, c, a1, 20);
  bool exact = lim.steps.size() == 20;
  for (const auto& s : lim.steps)
    exact = exact && s.tau == c.tau && s.leaves.size() == 1 && s.leaves[0].multiple == s.i &&
            s.leaves[0].weight() == kTwoPi * static_cast<double>(s.i);
  int heavy = 0;
  bool heavy_a1 = false;
  for (const auto& l : lim.limit)
    if (l.heavy) ++heavy, heavy_a1 = l.curve == a1;
  double tl = geodesic_length(c.rho, a1);
  bool pass = exact && heavy == 1 && heavy_a1 && lim.residual < 1e-9 && lim.translation_length == tl;
  return {pass, std::string("tau fixed and weights 2 pi i for i <= 20: ") + (exact ? "yes" : "no") +
                    "; heavy leaves " + std::to_string(heavy) + (heavy_a1 ? " (a1)" : "") +
                    "; boundary length " + fmt("%.15f", lim.boundary_length) + " vs translation " +
                    fmt("%.15f", lim.translation_length) + ", residual " + fmt("%.1e", lim.residual)};
}

Outcome pleated() {
  const std::vector<Word> gens{parse_word("a1"), parse_word("b1"), parse_word("a2"), parse_word("b2")};
  auto dom = build_from_fn(FNCoordinates{});
  auto rho = build_from_fn(bent(0.05));
  double res = 0.0, iso = 0.0, fbend = 0.0;
  for (const auto& nu : {standard_spiral_lamination(), sequence_lamination(handle_one(), 0)}) {
    for (const HolonomyRep* r : {&dom, &rho}) {
      auto b = realize(dom, *r, nu);
      res = std::max(res, equivariance_residual(b, sample_battery(b, 50), gens));
      iso = std::max(iso, stratum_isometry_defect(b));
      if (r == &dom)
        for (const auto& e : bending_angles(b)) fbend = std::max(fbend, std::abs(e.angle));
    }
  }
  auto b = realize(dom, rho, sequence_lamination(handle_one(), 0));
  double control = 0.0;
  for (std::size_t t = 0; t < b.gallery.size(); ++t)
    for (std::size_t v = 0; v < 3; ++v) {
      PleatedSurface f = b;
      auto& s = f.gallery[t].v[v].selector;
      s = s == Selector::attracting ? Selector::repelling : Selector::attracting;
      control = std::max(control, equivariance_residual(f, sample_battery(f, 50), gens));
    }
  bool pass = res < 1e-8 && fbend < 1e-9 && iso < 1e-9 && control > 0.1;
  return {pass, "residual " + fmt("%.1e", res) + ", Fuchsian bends " + fmt("%.1e", fbend) + ", isometry defect " +
                    fmt("%.1e", iso) + ", flipped-selector control " + fmt("%.4f", control) + " (needs > 0.1)"};
}

Outcome convergence() {
  auto t = convergence_experiment(bent(0.05), handle_one(), -12, 12, 24, 4);
  bool ok = true;
  for (const auto& r : t.rows) ok = ok && r.ok;
  bool pass = ok && t.forward_nonincreasing && t.backward_nonincreasing && t.forward_final < 1e-2 &&
              t.backward_final < 1e-2;
  return {pass, std::string("D non-increasing on [4, 12]: ") + (t.forward_nonincreasing ? "yes" : "no") +
                    ", D(12) = " + fmt("%.2e", t.forward_final) + "; mirrored on [-12, -4]: " +
                    (t.backward_nonincreasing ? "yes" : "no") + ", D(-12) = " + fmt("%.2e", t.backward_final)};
}

Outcome schottky() {
  MobiusMap g(4.0, 0.0, 0.0, 0.25), c(2.0, 1.0, 1.0, 1.0);
  auto rho = build_from_fn(FNCoordinates{});
  std::vector<std::pair<std::string, std::vector<MobiusMap>>> cases{
      {"classical", {g, c * g * c.inverse()}},
      {"pants", {rho.evaluate(parse_word("a1")), rho.evaluate(parse_word("b1 A1 B1"))}},
      {"pants (real frame)",
       {rho.realified().evaluate(parse_word("a1")), rho.realified().evaluate(parse_word("b1 A1 B1"))}}};
  bool pass = true;
  std::string detail;
  for (const auto& [name, gens] : cases) {
    auto cert = ping_pong_certify(gens);
    SchottkyCheck chk;
    if (cert.certified) chk = verify_schottky(cert);
    bool ok = cert.certified && chk.ok && chk.disjointness_margin > 0.0 && chk.mapping_margin > 0.0;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + name + " " + (ok ? "certified" : "failed") + ", margins " +
              fmt("%.3g", chk.disjointness_margin) + " / " + fmt("%.3g", chk.mapping_margin);
  }
  return {pass, detail};
}

Outcome density() {
  auto rho = build_from_fn(FNCoordinates{});
  CurveOracle o(rho, 3);
  auto targets = random_multiloop_targets(20, 2026);
  auto res = density_batch(o, targets, 0.05);
  double worst = 0.0;
  bool all = res.size() == 20;
  for (const auto& r : res) {
    worst = std::max(worst, r.distance);
    all = all && r.certified && r.distance < 0.05;
  }
  MeasuredLamination lim;
  lim.limit = TwistLimit{{CurveClass("a1 b1 A1 B1")}, {{CurveClass("b1 b2"), 1.0, false}}};
  auto t = density_experiment(o, lim, 0.05);
  bool pass = all && t.certified && t.distance < 0.05;
  return {pass, "20 targets, worst distance " + fmt("%.4f", worst) + "; twist limit reached at n = " +
                    std::to_string(t.twist) + ", distance " + fmt("%.4f", t.distance)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& configs) {
  auto root = fs::temp_directory_path() / "glab-acceptance";
  fs::remove_all(root);
  int runs = 0, same = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto j = io::read_file(f.string());
    if (!j.contains("experiment")) continue;
    auto art = run_experiment(load_config(f));
    write_artifact(art, root);
    auto dir = root / art.output;
    auto again = rerun(dir / "artifact.json");
    bool eq = artifact_json(again) == slurp(dir / "artifact.json");
    for (const auto& t : again.tables) eq = eq && csv(t) == slurp(dir / (t.name + ".csv"));
    for (const auto& p : again.plots) eq = eq && svg(p) == slurp(dir / (p.name + ".svg"));
    ++runs;
    same += eq;
  }
  fs::remove_all(root);
  return {runs > 0 && same == runs, std::to_string(same) + "/" + std::to_string(runs) +
                                        " experiment configs byte-identical when re-run from the embedded config"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path configs = argc > 1 ? fs::path(argv[1]) : fs::path(GLAB_CONFIG_DIR);
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "classification", 5, classification},
      {2, "FN fidelity", 10, fn_fidelity},
      {3, "loxodromic scan", 0, loxodromic_scan},
      {4, "pants graph path", 60, pants_path},
      {5, "iterated grafting limit", 0, graft_limit},
      {6, "pleated realization", 0, pleated},
      {7, "convergence experiment", 300, convergence},
      {8, "Schottky certification", 0, schottky},
      {9, "density", 60, density},
      {10, "determinism", 0, [&] { return determinism(configs); }},
  };
  int passed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.budget == 0 || secs < c.budget;
    bool pass = o.pass && in_time;
    passed += pass;
    std::printf("criterion %2d %s: %s: %s (%.2f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, all.size());
  return passed == static_cast<int>(all.size()) ? 0 : 1;
}
