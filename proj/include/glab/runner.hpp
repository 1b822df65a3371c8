#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glab/io.hpp"

namespace glab {

struct ExperimentCaps {
  int word_ball = 3;
  int bfs_depth = 4;
  int twist_iterations = 64;
  bool operator==(const ExperimentCaps& o) const = default;
};

struct ExperimentConfig {
  std::string experiment;
  // Named inputs: a path (relative to the config file) or an inline value.
  io::Json inputs = io::Json::object();
  io::Json params = io::Json::object();
  ExperimentCaps caps;
  io::Json tolerances = io::Json::object();
  std::uint64_t seed = 2026;
  // Relative output directory under the output root; defaults to the id.
  std::string output;
  // Directory that relative input paths resolve against.
  std::filesystem::path base_dir = ".";
};

io::Json to_json(const ExperimentConfig& c);
// Validates caps, seed and the experiment id.
ExperimentConfig config_from_json(const io::Json& j, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& experiment_ids();

struct RunTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunPlot {
  std::string name, title, xlabel, ylabel;
  bool log_y = false;
  std::vector<std::pair<double, double>> points;
};

enum class RunStatus { certified, cap_exhausted, uncertified };
const char* to_string(RunStatus s);

struct RunArtifact {
  io::Json config;  // resolved snapshot, inputs inlined
  std::string config_hash;
  RunStatus status = RunStatus::certified;
  io::Json results = io::Json::object();
  // Numeric claims with thresholds and truncation parameters.
  io::Json certificates = io::Json::array();
  std::vector<RunTable> tables;
  std::vector<RunPlot> plots;
  std::string output;
  // 0 certified, 2 otherwise.
  int exit_code() const;
};

RunArtifact run_experiment(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view s);
std::string format_double(double x);
std::string artifact_json(const RunArtifact& a);
std::string csv(const RunTable& t);
std::string svg(const RunPlot& p);

// GLAB_OUT, else the given default.
std::filesystem::path output_root(const std::filesystem::path& fallback = "glab-out");
// Writes artifact.json, <table>.csv and <plot>.svg under root/output.
std::vector<std::filesystem::path> write_artifact(const RunArtifact& a, const std::filesystem::path& root);
// Re-runs the config embedded in an artifact file.
RunArtifact rerun(const std::filesystem::path& artifact_file);

}  // namespace glab
