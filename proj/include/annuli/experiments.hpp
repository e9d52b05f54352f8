#pragma once

#include <array>
#include <string>
#include <vector>

#include "annuli/stats.hpp"

namespace annuli {

// Build identifier embedded in reports (git describe at configure time).
const char* build_describe();

struct ExperimentConfig {
  std::string name;
  double T = 1e4;
  double L = 10.0;
  double M = 1e3;
  uint64_t samples = 1000;
  uint64_t seed = 1;
  WindowKind window = WindowKind::kSmoothBump;
  std::string out_dir = "out";
  int threads = 0;
  std::string sieve_cache;

  // "key = value" lines, '#' comments. Unknown keys are errors. Values from
  // the text override `base`.
  static ExperimentConfig from_text(const std::string& text,
                                    ExperimentConfig base = {});
  static ExperimentConfig from_file(const std::string& path,
                                    ExperimentConfig base = {});
  std::string serialize() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct PresetResult {
  std::string name;
  bool pass = false;
  std::string summary;
  std::vector<std::string> files;
};

const std::vector<std::string>& preset_names();

// Default configuration for a named preset (UsageError for unknown names).
ExperimentConfig preset_defaults(const std::string& name);

// Executes the preset named by config.name over its parameter grid and writes
// report.json, CSVs and summary.txt under config.out_dir. `pass` reflects the
// preset's acceptance band.
PresetResult run_preset(const ExperimentConfig& config);

struct SandwichReport {
  DistributionReport uniform;
  DistributionReport bump;
  double delta_ks = 0.0;
  std::array<double, 7> moment_delta{};
  std::array<double, 7> combined_se{};
  bool ks_pass = false;      // |delta KS| <= 0.03
  bool moments_pass = false; // every |delta m| <= 3 * combined SE
};

// Runs the smooth-statistic experiment under both windows with the same seed
// and reports the discrepancy of the two distribution reports.
SandwichReport sandwich_comparison(double T, double L, double M,
                                   uint64_t samples, uint64_t seed,
                                   const RTable& table,
                                   const ExperimentOptions& opts = {});

}  // namespace annuli
