#pragma once

// Command-line front end: configuration loading (JSON file + flag
// overrides + defaults, precedence flags > config > defaults), experiment
// orchestration, and persistence of plot-ready CSVs. Every output file
// starts with a '#' comment carrying the effective-config hash, the base
// seed, and the artifact version, so equal hashes imply byte-identical
// data sections.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "activecover/analysis.hpp"
#include "activecover/distribution.hpp"
#include "activecover/simulation.hpp"

namespace activecover::cli {

struct MRule {
  bool recommended = true;  // ceil(n^{D/(D+1)}) per pool size
  std::size_t fixed = 1;
};

struct SigmaRule {
  bool automatic = true;  // 2 * (ln n)^{1/D} per pool size
  double fixed = 1.0;
};

struct LearnerChoice {
  LearnerKind kind = LearnerKind::kPassive;
  MRule m;
  SigmaRule sigma;
};

struct ExperimentConfig {
  std::string preset = "cube-overlap";  // ignored when inline_spec is set
  std::optional<DistributionSpec> inline_spec;
  std::size_t dim = 2;
  double p = 0.3;
  std::vector<std::size_t> ns = {1000};
  std::vector<LearnerChoice> learners = {LearnerChoice{}};
  std::size_t trials = 20;
  std::uint64_t base_seed = 1;
  StopRule stop = StopRule::all_positives_found();
  std::size_t checkpoints = 20;
  std::string out_dir = "results";
  unsigned threads = 0;  // 0 = hardware concurrency
  bool emit_query_logs = false;
};

// Flag values; only set fields override the config file.
struct Overrides {
  std::vector<std::string> learners;
  std::vector<std::size_t> ns;
  std::optional<std::string> preset;
  std::optional<std::size_t> dim;
  std::optional<double> p;
  std::optional<std::string> m;      // "recommended" or an integer
  std::optional<std::string> sigma;  // "auto" or a float
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> stop;   // "all" or "budget:K"
  std::optional<std::size_t> checkpoints;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<bool> emit_query_logs;
};

ExperimentConfig load_config(const std::string& path);
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);
void validate_config(const ExperimentConfig& config);

StopRule parse_stop_rule(const std::string& text);

// FNV-1a 64-bit hash of the canonical JSON form of the effective experiment
// parameters (seeding and statistics inputs only; out_dir and threads do
// not change results and are excluded). Hex string of 16 digits.
std::string config_hash(const ExperimentConfig& config);

// Resolves preset/inline spec plus the per-n learner parameters.
DistributionSpec resolve_spec(const ExperimentConfig& config);
LearnerConfig resolve_learner(const LearnerChoice& choice, std::size_t n, std::size_t dim);

int cmd_run(const ExperimentConfig& config);
int cmd_sweep(const ExperimentConfig& config);
int cmd_gen_data(const std::string& preset, std::size_t dim, double p, std::size_t n,
                 std::uint64_t seed, const std::string& out_path);
int cmd_fit_rate(const std::string& sweep_csv, const std::string& out_dir);

// Full argv entry point used by the binary; returns the process exit code.
int run_main(int argc, char** argv);

}  // namespace activecover::cli
