#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "atsp/bnb.hpp"

namespace atsp {

inline constexpr const char* kToolVersion = "atsp-lab 1.0.0";
inline constexpr const char* kOutDirEnv = "ATSP_LAB_OUT_DIR";

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitSoftCheck = 1,
  kExitUsage = 2,
  kExitGuard = 3,
};

// Effective experiment configuration. Everything a record needs to be
// regenerated lives here and is embedded in the output header.
struct HarnessConfig {
  std::vector<int> n_values{10};
  int seeds = 10;
  std::uint64_t seed_start = 1;
  double epsilon = 0.2;
  std::optional<int> zeta;  // default ceil(n^eps)
  std::optional<int> d;     // default ceil(n^{eps/3})
  int depth = 2;
  std::string method = "bnb";
  BnbOptions bnb;
  bool control = false;       // structure-scan: add a zeta = n - 1 row per n
  bool smoke = true;          // gap-scan: add a constant-matrix row per n
  bool runtime = false;       // add wall-clock columns (breaks byte-identity)
  std::string input;          // solve: matrix file; empty = generate from n and seed_start
  long counting_max_n = 12;   // nodes-scan: exact counting sub-check up to this n
};

nlohmann::json to_json(const HarnessConfig& config);
// Overlays the keys present in `j` onto `config`. Unknown keys raise InvalidInput.
void merge_config(HarnessConfig& config, const nlohmann::json& j);
HarnessConfig config_from_file(const std::string& path);

// "10,12,14" or "10:20:2" (inclusive range with step) or a mix of both.
std::vector<int> parse_n_list(const std::string& text);

struct CommandOutput {
  std::string text;
  int exit_code = kExitOk;
  std::string extension;  // "csv" or "json"
};

// Per-seed Z_AP, Z_ATSP and gap indicator, plus per-n summaries.
CommandOutput cmd_gap_scan(const HarnessConfig& config);
// Per-seed branch-and-bound node counts, per-n medians and a log-linear fit.
CommandOutput cmd_nodes_scan(const HarnessConfig& config);
// Diameters, dual and matching-edge magnitudes, alternatives and leaf fraction.
CommandOutput cmd_structure_scan(const HarnessConfig& config);
// Witness tree for n_values[0] and seed_start. Throws InvalidRange if depth > d.
CommandOutput cmd_witness(const HarnessConfig& config);
// Single-instance solve with config.method. Guard errors propagate.
CommandOutput cmd_solve(const HarnessConfig& config);
// Writes the matrix for n_values[0] and seed_start in the on-disk format.
CommandOutput cmd_generate(const HarnessConfig& config);

// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Ordinary least squares y ~ intercept + slope x. Needs two distinct x values.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace atsp
