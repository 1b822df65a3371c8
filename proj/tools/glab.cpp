#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glab/runner.hpp"

namespace fs = std::filesystem;
using glab::io::Json;

namespace {

enum class Kind { file, integer, real, text, reals, texts };

struct Flag {
  std::string name;  // without dashes
  bool input;        // inputs entry, else params entry
  std::string key;
  Kind kind;
  std::string help;
};

const std::map<std::string, std::vector<Flag>>& flag_table() {
  static const std::map<std::string, std::vector<Flag>> t{
      {"graft-iterate",
       {{"fn", true, "fn", Kind::file, "FN coordinates JSON"},
        {"structure", true, "structure", Kind::file, "grafted structure JSON"},
        {"loop", false, "loop", Kind::text, "grafting loop word"},
        {"imax", false, "imax", Kind::integer, "number of iterates"}}},
      {"graft-plan",
       {{"sharp", true, "sharp", Kind::file, "starting grafted structure JSON"},
        {"flat", true, "flat", Kind::file, "target grafted structure JSON"},
        {"delta", false, "delta", Kind::reals, "angle schedule, comma separated"},
        {"caps", true, "caps", Kind::file, "plan caps JSON"},
        {"word-cap", false, "word_cap", Kind::integer, "word length cap for moves"}}},
      {"pleated-realize",
       {{"rep", true, "rep", Kind::file, "holonomy or FN coordinates JSON"},
        {"domain", true, "domain", Kind::file, "Fuchsian domain holonomy JSON"},
        {"lam", true, "lam", Kind::file, "lamination JSON"},
        {"samples", false, "samples", Kind::integer, "sample count"}}},
      {"pleated-converge",
       {{"fn", true, "fn", Kind::file, "FN coordinates JSON"},
        {"spec", true, "spec", Kind::file, "Farey sequence spec JSON"},
        {"jmin", false, "jmin", Kind::integer, "first index"},
        {"jmax", false, "jmax", Kind::integer, "last index"},
        {"samples", false, "samples", Kind::integer, "sample count"},
        {"tail-from", false, "tail_from", Kind::integer, "monotonicity checked for |j| >= this"}}},
      {"schottky",
       {{"rep", true, "rep", Kind::file, "holonomy or FN coordinates JSON"},
        {"matrices", true, "matrices", Kind::file, "JSON array of generator matrices"},
        {"gens", false, "gens", Kind::texts, "generator words, comma separated"},
        {"frame", false, "frame", Kind::text, "raw or realified"},
        {"max-power", false, "max_power", Kind::integer, "isometric circle powers"},
        {"grid", false, "grid", Kind::integer, "disk search grid"},
        {"sweeps", false, "sweeps", Kind::integer, "line search sweeps"},
        {"samples", false, "samples", Kind::integer, "verification samples per circle"}}},
      {"density",
       {{"rep", true, "rep", Kind::file, "holonomy or FN coordinates JSON"},
        {"target", true, "target", Kind::file, "measured lamination JSON"},
        {"eps", false, "eps", Kind::real, "approximation tolerance"},
        {"count", false, "count", Kind::integer, "random targets when no target is given"},
        {"max-denominator", false, "max_denominator", Kind::integer, "weight denominator cap"}}},
  };
  return t;
}

struct Bound {
  std::string experiment;
  CLI::App* app = nullptr;
  std::optional<std::string> config, out, output;
  std::optional<std::uint64_t> seed;
  std::optional<int> word_ball, bfs_depth, twist_iterations;
  std::map<std::string, std::string> values;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

void bind(CLI::App* app, Bound& b) {
  b.app = app;
  app->add_option("--config", b.config, "experiment config JSON");
  app->add_option("--out", b.out, "output root (default: $GLAB_OUT or glab-out)");
  app->add_option("--output", b.output, "output directory under the root");
  app->add_option("--seed", b.seed, "seed for randomized batteries");
  app->add_option("--word-ball", b.word_ball, "word ball radius cap");
  app->add_option("--bfs-depth", b.bfs_depth, "pants graph search depth cap");
  app->add_option("--twist-iterations", b.twist_iterations, "twist iteration cap");
  for (const auto& f : flag_table().at(b.experiment))
    app->add_option_function<std::string>(
        "--" + f.name, [&b, key = f.name](const std::string& v) { b.values[key] = v; }, f.help);
}

glab::ExperimentConfig build_config(const Bound& b) {
  Json j = Json::object();
  fs::path base = ".";
  if (b.config) {
    j = glab::io::read_file(*b.config);
    base = fs::path(*b.config).parent_path();
    if (base.empty()) base = ".";
    if (j.contains("experiment") && j.at("experiment") != b.experiment)
      throw glab::Error("config is for experiment " + j.at("experiment").dump());
  }
  j["experiment"] = b.experiment;
  if (!j.contains("inputs")) j["inputs"] = Json::object();
  if (!j.contains("params")) j["params"] = Json::object();
  if (!j.contains("caps")) j["caps"] = Json::object();
  for (const auto& f : flag_table().at(b.experiment)) {
    auto it = b.values.find(f.name);
    if (it == b.values.end()) continue;
    const std::string& v = it->second;
    Json value;
    try {
      switch (f.kind) {
        case Kind::file:
          value = fs::absolute(v).string();
          break;
        case Kind::integer:
          value = std::stol(v);
          break;
        case Kind::real:
          value = std::stod(v);
          break;
        case Kind::text:
          value = v;
          break;
        case Kind::reals:
          value = Json::array();
          for (const auto& p : split(v)) value.push_back(std::stod(p));
          break;
        case Kind::texts:
          value = split(v);
          break;
      }
    } catch (const std::logic_error&) {
      throw glab::Error("bad value for --" + f.name + ": " + v);
    }
    j[f.input ? "inputs" : "params"][f.key] = value;
  }
  if (b.seed) j["seed"] = *b.seed;
  if (b.output) j["output"] = *b.output;
  if (b.word_ball) j["caps"]["word_ball"] = *b.word_ball;
  if (b.bfs_depth) j["caps"]["bfs_depth"] = *b.bfs_depth;
  if (b.twist_iterations) j["caps"]["twist_iterations"] = *b.twist_iterations;
  return glab::config_from_json(j, base);
}

fs::path root_for(const std::optional<std::string>& out) { return out ? fs::path(*out) : glab::output_root(); }

int run(const Bound& b) {
  auto cfg = build_config(b);
  auto t0 = std::chrono::steady_clock::now();
  auto art = glab::run_experiment(cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto files = glab::write_artifact(art, root_for(b.out));
  std::printf("%s: %s (config %s)\n", cfg.experiment.c_str(), glab::to_string(art.status), art.config_hash.c_str());
  for (const auto& c : art.certificates)
    std::printf("  [%s] %s\n", c.at("passed").get<bool>() ? "ok" : "FAIL", c.at("claim").get<std::string>().c_str());
  for (const auto& f : files) std::printf("  wrote %s\n", f.string().c_str());
  std::printf("  wall-clock %.3f s\n", secs);
  return art.exit_code();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Recomputes every file of an artifact from its embedded config.
int rerun(const std::string& file, const std::optional<std::string>& out) {
  fs::path path(file);
  auto art = glab::rerun(path);
  fs::path dir = path.parent_path();
  std::vector<std::pair<std::string, std::string>> fresh{{"artifact.json", glab::artifact_json(art)}};
  for (const auto& t : art.tables) fresh.emplace_back(t.name + ".csv", glab::csv(t));
  for (const auto& p : art.plots) fresh.emplace_back(p.name + ".svg", glab::svg(p));
  bool same = true;
  for (const auto& [name, text] : fresh) {
    bool eq = fs::exists(dir / name) && slurp(dir / name) == text;
    std::printf("  %s %s\n", eq ? "identical" : "DIFFERS  ", name.c_str());
    same = same && eq;
  }
  if (out) glab::write_artifact(art, fs::path(*out));
  std::printf("rerun %s: %s\n", art.config_hash.c_str(), same ? "byte-identical" : "differs");
  return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glab: grafting and pleated surface experiments"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Bound>> bound;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& id) {
    auto b = std::make_unique<Bound>();
    b->experiment = id;
    bind(parent->add_subcommand(name, "run the " + id + " experiment"), *b);
    bound.push_back(std::move(b));
  };
  for (const auto& id : glab::experiment_ids()) add(&app, id, id);
  auto* graft = app.add_subcommand("graft", "grafting experiments")->require_subcommand(1);
  add(graft, "iterate", "graft-iterate");
  add(graft, "plan", "graft-plan");
  auto* pleated = app.add_subcommand("pleated", "pleated surface experiments")->require_subcommand(1);
  add(pleated, "realize", "pleated-realize");
  add(pleated, "converge", "pleated-converge");
  CLI::App* schottky = nullptr;
  for (auto* s : app.get_subcommands({}))
    if (s->get_name() == "schottky") schottky = s;
  add(schottky, "cert", "schottky");

  auto* list = app.add_subcommand("list", "list experiment ids");
  std::string artifact;
  std::optional<std::string> rerun_out;
  auto* again = app.add_subcommand("rerun", "re-run an artifact's embedded config and compare bytes");
  again->add_option("artifact", artifact, "artifact.json")->required();
  again->add_option("--out", rerun_out, "also write the fresh artifact under this root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (list->parsed()) {
      for (const auto& id : glab::experiment_ids()) std::printf("%s\n", id.c_str());
      return 0;
    }
    if (again->parsed()) return rerun(artifact, rerun_out);
    // The deepest parsed subcommand wins (schottky cert over schottky).
    const Bound* chosen = nullptr;
    for (const auto& b : bound)
      if (b->app->parsed() && (!chosen || b->app->get_parent() == chosen->app)) chosen = b.get();
    if (!chosen) throw glab::Error("no experiment selected");
    return run(*chosen);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "glab: error: %s\n", e.what());
    return 1;
  }
}
