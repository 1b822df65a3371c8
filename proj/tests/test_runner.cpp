#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "glab/runner.hpp"

using namespace glab;
using io::Json;
namespace fs = std::filesystem;

namespace {

template <class T>
T roundtrip(const T& v) {
  return io::decode<T>(io::parse(io::encode(v).dump()));
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("glab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig config(const std::string& text) { return config_from_json(io::parse(text)); }

}  // namespace

TEST_CASE("roundtrip: matrices and points") {
  MobiusMap m(cplx(1.3, 0.2), cplx(-0.7, 1.1), cplx(0.4, -0.9), cplx(2.1, 0.05));
  MobiusMap r = roundtrip(m);
  CHECK(r.distance(m) < 1e-12);
  for (int k = 0; k < 4; ++k) CHECK(r.entries()[k] == m.entries()[k]);
  CHECK(roundtrip(ExtPoint::infinity()).is_inf());
  CHECK(roundtrip(ExtPoint(cplx(0.1, -3.0))) == ExtPoint(cplx(0.1, -3.0)));
  CHECK(roundtrip(Slope(-3, 7)) == Slope(-3, 7));
  CHECK(roundtrip(Slope(1, 0)) == Slope(1, 0));
  FareyTriangle t(Slope(1, 0), Slope(0, 1), Slope(-1, 1));
  CHECK(roundtrip(t) == t);
}

TEST_CASE("roundtrip: structures") {
  FNCoordinates f;
  f.lengths = {1.7, 2.3, 2.9};
  f.twists = {0.1, -0.4, 0.25};
  f.bends = {0.05, 0.0, 0.0};
  CHECK(roundtrip(f) == f);

  HolonomyRep rho = build_from_fn(f);
  HolonomyRep back = roundtrip(rho);
  REQUIRE(back.genus() == 2);
  for (int k = 0; k < 4; ++k) CHECK(back.generator(k).distance(rho.generator(k)) < 1e-12);
  CHECK(back.fuchsian() == rho.fuchsian());
  // FN coordinates are accepted where a holonomy is expected.
  CHECK(io::decode<HolonomyRep>(io::encode(f)).generator(1).distance(rho.generator(1)) < 1e-12);

  GraftedStructure c = GraftedStructure::fuchsian(FNCoordinates{});
  c.leaves = {{CurveClass("a1"), 0, true}, {CurveClass("a2"), 3, false}};
  GraftedStructure cb = roundtrip(c);
  CHECK(cb == c);
  CHECK(cb.leaves[0].heavy);
  CHECK_FALSE(cb.leaves[1].heavy);
  CHECK(cb.rho.generator(0).distance(c.rho.generator(0)) < 1e-12);

  MeasuredLamination m = MeasuredLamination::multiloop({{"a1", 0.5}, {"b2", 1.25}});
  m.leaves.push_back({CurveClass("a2"), std::numeric_limits<double>::infinity(), true});
  m.limit = TwistLimit{{CurveClass("a1 b1 A1 B1")}, {{CurveClass("b1 b2"), 1.0, false}}};
  CHECK(roundtrip(m) == m);

  PantsDecomposition p{2, {CurveClass("a1"), CurveClass("a2"), CurveClass("a1 b1 A1 B1")}};
  CHECK(roundtrip(p) == p);
  ElementaryMove mv{CurveClass("a1"), CurveClass("b1"), MoveKind::torus,
                    {MoveKind::torus, {CurveClass("a1 b1 A1 B1")}}};
  ElementaryMove mb = roundtrip(mv);
  CHECK(mb.removed == mv.removed);
  CHECK(mb.added == mv.added);
  CHECK(mb.region.boundary == mv.region.boundary);

  LaminationSeqSpec s;
  s.index = 2;
  s.kind = FareyCase::sphere;
  s.boundary = {CurveClass("a1 b1 A1 B1")};
  s.m_from = Slope(1, 2);
  s.m_to = Slope(1, 3);
  s.handle = 2;
  LaminationSeqSpec sb = roundtrip(s);
  CHECK(sb.index == 2);
  CHECK(sb.kind == FareyCase::sphere);
  CHECK(sb.boundary == s.boundary);
  CHECK(sb.m_from == s.m_from);
  CHECK(sb.m_to == s.m_to);
  CHECK(sb.handle == 2);

  PlanCaps pc;
  pc.path = {3, 1};
  pc.max_twist = 9;
  pc.angle.tol = 2e-4;
  PlanCaps pb = roundtrip(pc);
  CHECK(pb.path.depth == 3);
  CHECK(pb.path.word_cap == 1);
  CHECK(pb.max_twist == 9);
  CHECK(pb.angle.tol == 2e-4);
}

TEST_CASE("malformed input names the byte offset") {
  std::string text = R"({"lengths": [2, 2,)";
  try {
    io::parse(text);
    FAIL("no error");
  } catch (const Error& e) {
    std::string w = e.what();
    CHECK(w.rfind("parse error at byte ", 0) == 0);
    long at = std::stol(w.substr(20));
    CHECK(at >= static_cast<long>(text.size()));
    CHECK(at <= static_cast<long>(text.size()) + 1);
  }
  CHECK_THROWS_WITH_AS(io::parse("[1, 2 x"), doctest::Contains("parse error at byte 7"), Error);
  CHECK_THROWS_WITH_AS(io::decode<FNCoordinates>(io::parse(R"({"lengths": [1, 2]})")), doctest::Contains("schema"),
                       Error);
  CHECK_THROWS_WITH_AS(io::decode<MobiusMap>(io::parse("[1, 2, 3]")), doctest::Contains("schema"), Error);
  CHECK_THROWS_AS(io::decode<Leaf>(io::parse(R"({"weight": 1})")), Error);
}

TEST_CASE("config validation") {
  CHECK_THROWS_WITH_AS(config(R"({"experiment": "nope"})"), doctest::Contains("unknown experiment"), Error);
  CHECK_THROWS_WITH_AS(config(R"({"experiment": "density", "params": {"epsilon": 1}})"),
                       doctest::Contains("unknown param"), Error);
  CHECK_THROWS_WITH_AS(config(R"({"experiment": "density", "caps": {"word_ball": 0}})"),
                       doctest::Contains("caps must be positive"), Error);
  CHECK_THROWS_WITH_AS(config(R"({"experiment": "density", "seed": -1})"), doctest::Contains("seed"), Error);
  CHECK_THROWS_AS(config(R"({"experiment": "density", "output": "../escape"})"), Error);
  CHECK_THROWS_AS(config(R"({"experiment": "density", "output": "/abs"})"), Error);
  CHECK_THROWS_AS(config(R"({"experiment": "density", "colour": 1})"), Error);
  auto c = config(R"({"experiment": "graft-iterate"})");
  CHECK(c.output == "graft-iterate");
  CHECK(c.seed == 2026);
  CHECK(experiment_ids().size() == 6);
}

TEST_CASE("config hash is FNV-1a 64 of the snapshot") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  auto art = run_experiment(config(R"({"experiment": "graft-iterate", "params": {"imax": 2}})"));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(art.config.dump())));
  CHECK(art.config_hash == hex);
  auto other = run_experiment(config(R"({"experiment": "graft-iterate", "params": {"imax": 3}})"));
  CHECK(other.config_hash != art.config_hash);
}

TEST_CASE("graft-iterate: weights 2 pi i on the Fuchsian structure") {
  auto art = run_experiment(config(R"({"experiment": "graft-iterate", "params": {"loop": "a1", "imax": 5}})"));
  CHECK(art.status == RunStatus::certified);
  CHECK(art.exit_code() == 0);
  REQUIRE(art.tables.size() == 1);
  const auto& t = art.tables[0];
  REQUIRE(t.rows.size() == 5);
  for (int i = 1; i <= 5; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i - 1)];
    CHECK(row[0] == std::to_string(i));
    CHECK(row[1] == std::to_string(i));
    CHECK(std::stod(row[2]) == 2.0 * std::numbers::pi * i);
    CHECK(row[4] == "true");
  }
  std::string text = csv(t);
  CHECK(text.rfind("i,multiple,weight,weight_over_2pi,tau_unchanged\n", 0) == 0);
  for (const auto& c : art.certificates) {
    CHECK(c.at("passed").get<bool>());
    CHECK(c.contains("truncation"));
  }
}

TEST_CASE("same config twice gives byte-identical artifacts") {
  for (const char* text : {R"({"experiment": "density", "params": {"count": 6}, "seed": 7})",
                           R"({"experiment": "schottky"})",
                           R"({"experiment": "pleated-realize", "params": {"samples": 12}})"}) {
    auto c = config(text);
    auto a = run_experiment(c), b = run_experiment(c);
    CHECK(artifact_json(a) == artifact_json(b));
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t k = 0; k < a.tables.size(); ++k) CHECK(csv(a.tables[k]) == csv(b.tables[k]));
    for (std::size_t k = 0; k < a.plots.size(); ++k) CHECK(svg(a.plots[k]) == svg(b.plots[k]));
  }
  auto s1 = run_experiment(config(R"({"experiment": "density", "params": {"count": 4}, "seed": 1})"));
  auto s2 = run_experiment(config(R"({"experiment": "density", "params": {"count": 4}, "seed": 2})"));
  CHECK(artifact_json(s1) != artifact_json(s2));
  CHECK(s1.config.at("seed") == 1);
}

TEST_CASE("pleated-converge CSV matches the direct call") {
  auto art = run_experiment(config(R"({"experiment": "pleated-converge",
      "inputs": {"fn": {"bends": [0.05, 0, 0]}},
      "params": {"jmin": 6, "jmax": 12, "samples": 24}})"));
  FNCoordinates fn;
  fn.bends = {0.05, 0.0, 0.0};
  LaminationSeqSpec spec;
  spec.m_from = Slope(1, 0);
  spec.m_to = Slope(0, 1);
  auto direct = convergence_experiment(fn, spec, 6, 12, 24, 0);
  REQUIRE(art.tables.size() == 1);
  REQUIRE(art.tables[0].rows.size() == direct.rows.size());
  for (std::size_t k = 0; k < direct.rows.size(); ++k) {
    CHECK(art.tables[0].rows[k][0] == std::to_string(direct.rows[k].j));
    CHECK(std::stod(art.tables[0].rows[k][1]) == direct.rows[k].distance);
  }
  CHECK(art.status == RunStatus::certified);
}

TEST_CASE("re-running the embedded config reproduces every file") {
  auto root = scratch("rerun");
  fs::path cfg_dir = root / "cfg";
  fs::create_directories(cfg_dir);
  std::ofstream(cfg_dir / "fn.json") << R"({"lengths": [2, 2, 2], "twists": [0.3, 0, 0]})";
  std::ofstream(cfg_dir / "run.json") << R"({"experiment": "graft-iterate", "inputs": {"fn": "fn.json"},
      "params": {"imax": 3}, "output": "runs/first"})";
  auto art = run_experiment(load_config(cfg_dir / "run.json"));
  // The file input is inlined into the snapshot.
  CHECK(art.config.at("inputs").at("fn").at("twists")[0] == 0.3);
  auto files = write_artifact(art, root / "out");
  CHECK(files.size() == 3);
  for (const auto& f : files) CHECK(f.parent_path() == root / "out" / "runs" / "first");
  auto again = rerun(root / "out" / "runs" / "first" / "artifact.json");
  CHECK(artifact_json(again) == slurp(root / "out" / "runs" / "first" / "artifact.json"));
  CHECK(csv(again.tables[0]) == slurp(root / "out" / "runs" / "first" / "steps.csv"));
  CHECK(svg(again.plots[0]) == slurp(root / "out" / "runs" / "first" / "weights.svg"));
  fs::remove_all(root);
}

TEST_CASE("cap exhaustion is a flagged artifact, not a crash") {
  auto art = run_experiment(config(R"({"experiment": "density",
      "inputs": {"target": {"leaves": [], "limit": {"core": ["a1 b1 A1 B1"], "base": [{"curve": "b1 b2"}]}}},
      "caps": {"twist_iterations": 2}})"));
  CHECK(art.status == RunStatus::cap_exhausted);
  CHECK(art.exit_code() == 2);
  CHECK(art.results.at("density").at("targets")[0].at("cap_exhausted") == true);
  auto plan = run_experiment(config(R"({"experiment": "graft-plan",
      "inputs": {"sharp": {"tau": {}, "leaves": [{"curve": "a1", "multiple": 1}]},
                 "flat": {"tau": {}, "leaves": [{"curve": "b1", "multiple": 1}, {"curve": "b2", "multiple": 2}]}},
      "caps": {"bfs_depth": 1}})"));
  CHECK(plan.status == RunStatus::cap_exhausted);
}

TEST_CASE("report formats") {
  RunTable t{"x", {"a", "b"}, {{"1", "has,comma"}, {"2", "say \"hi\""}}};
  CHECK(csv(t) == "a,b\n1,\"has,comma\"\n2,\"say \"\"hi\"\"\"\n");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(2.0 * std::numbers::pi)) == 2.0 * std::numbers::pi);
  RunPlot p{"p", "a < b", "x", "y", true, {{0.0, 1.0}, {1.0, 1e-3}, {2.0, 0.0}}};
  std::string s = svg(p);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("a &lt; b") != std::string::npos);
  // Nonpositive values are dropped on a log axis.
  CHECK(s.find("<circle") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t at = s.find("<circle"); at != std::string::npos; at = s.find("<circle", at + 1)) ++circles;
  CHECK(circles == 2);
}

TEST_CASE("experiments stay inside their output directory") {
  RunArtifact a;
  a.config = Json{{"experiment", "density"}, {"seed", 1}};
  a.output = "../outside";
  CHECK_THROWS_AS(write_artifact(a, scratch("guard")), Error);
  setenv("GLAB_OUT", "/tmp/glab-env-root", 1);
  CHECK(output_root() == fs::path("/tmp/glab-env-root"));
  unsetenv("GLAB_OUT");
  CHECK(output_root("fallback") == fs::path("fallback"));
}
