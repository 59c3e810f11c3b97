#pragma once

// Experiment harness: a JSON-configurable run over (policy, seed) pairs with
// per-seed and aggregated regret curves written as CSV plus a metadata
// echo. Replications are independent, so they parallelize freely; outputs
// are merged in canonical (policy, seed) order and all numbers are printed
// as shortest round-trip decimals, which makes files byte-identical for any
// --jobs value.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvbandit/metrics.hpp"
#include "mvbandit/policies.hpp"

namespace mvbandit {

inline constexpr std::uint64_t kDefaultMasterSeed = 271828;
inline constexpr const char* kVersion = "mvbandit 0.1.0";
inline constexpr const char* kOutputDirEnvVar = "MVBANDIT_OUT";

struct SeedSpec {
  std::vector<std::uint64_t> explicit_seeds;  // wins when nonempty
  std::uint64_t master = kDefaultMasterSeed;
  int count = 20;

  std::vector<std::uint64_t> resolve() const;
};

struct RunConfig {
  std::string scenario = "I";  // I, II, III, or a path to an instance JSON
  int S = 4;
  long long T = 100000;
  int checkpoints = 100;
  SeedSpec seeds;
  std::vector<PolicyConfig> policies;  // empty selects the standard four
  std::string output_dir;              // empty: env var, then "out"
  int jobs = 1;
  bool dump_design = false;
  bool dump_trajectories = false;
  long long enumeration_cap = 1000000;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

// figN presets: the four desk-scale setups (scenario, S) =
// (I, 4), (II, 4), (III, 4), (III, 8) at T = 1e5 with 20 seeds and the four
// standard policies.
RunConfig preset(const std::string& name);

// Throws ConfigError naming the offending field.
void validate_run_config(const RunConfig& cfg);

// Builds the instance for cfg.scenario. Named scenarios go through the
// venue-spec path; anything else is treated as an instance JSON path.
MVInstance build_instance(const RunConfig& cfg);

struct ExperimentResult {
  std::vector<RegretReport> reports;  // one per policy, config order
  std::string per_seed_path;
  std::string aggregate_path;
  std::string metadata_path;
};

ExperimentResult run_experiment(const RunConfig& cfg);

}  // namespace mvbandit
