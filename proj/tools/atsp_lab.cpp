// atsp_lab: seeded experiment campaigns for the random ATSP branch-and-bound lab.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "atsp/error.hpp"
#include "atsp/harness.hpp"

namespace {

using atsp::HarnessConfig;

struct Flags {
  std::string config_path;
  std::string n;
  int seeds = 0;
  std::uint64_t seed_start = 0;
  double epsilon = 0.0;
  int zeta = 0;
  int d = 0;
  int depth = 0;
  std::string method;
  std::string branch_rule;
  std::string search_order;
  std::string incumbent_init;
  bool prune_ties = true;
  long timeout_ms = 0;
  long node_limit = 0;
  bool control = false;
  bool no_smoke = false;
  bool runtime = false;
  std::string input;
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its keys")
      ->check(CLI::ExistingFile);
  cmd->add_option("--n", f.n, "Sizes: comma list and/or lo:hi[:step] ranges");
  cmd->add_option("--seeds", f.seeds, "Seeds per size")->check(CLI::PositiveNumber);
  cmd->add_option("--seed-start", f.seed_start, "First seed");
  cmd->add_option("--epsilon", f.epsilon, "Analysis exponent in (0, 1)");
  cmd->add_option("--zeta", f.zeta, "Neighbour count override")->check(CLI::PositiveNumber);
  cmd->add_option("--d", f.d, "Branching factor override")->check(CLI::PositiveNumber);
  cmd->add_option("--depth", f.depth, "Witness tree depth")->check(CLI::NonNegativeNumber);
  cmd->add_option("--method", f.method, "bnb | held-karp | brute | patch")
      ->check(CLI::IsMember({"bnb", "held-karp", "brute", "patch"}));
  cmd->add_option("--branch-rule", f.branch_rule, "shortest-subcycle | max-regret")
      ->check(CLI::IsMember({"shortest-subcycle", "max-regret"}));
  cmd->add_option("--search-order", f.search_order, "best-first | depth-first")
      ->check(CLI::IsMember({"best-first", "depth-first"}));
  cmd->add_option("--incumbent-init", f.incumbent_init, "karp-patch | none")
      ->check(CLI::IsMember({"karp-patch", "none"}));
  cmd->add_option("--prune-ties", f.prune_ties, "Prune nodes whose bound equals the incumbent");
  cmd->add_option("--timeout-ms", f.timeout_ms, "Per-instance B&B time limit, 0 = none")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--node-limit", f.node_limit, "Per-instance B&B node limit, 0 = none")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--control", f.control, "structure-scan: add a zeta = n-1 control row");
  cmd->add_flag("--no-smoke", f.no_smoke, "gap-scan: skip the constant-matrix row");
  cmd->add_flag("--runtime", f.runtime, "Add wall-clock columns (output no longer reproducible)");
  cmd->add_option("--input", f.input, "solve: cost matrix file");
  cmd->add_option("--out", f.out, "Output file, '-' for stdout");
}

HarnessConfig effective_config(const CLI::App* cmd, const Flags& f) {
  HarnessConfig c = f.config_path.empty() ? HarnessConfig{} : atsp::config_from_file(f.config_path);
  auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
  nlohmann::json overrides = nlohmann::json::object();
  if (given("--n")) overrides["n"] = f.n;
  if (given("--seeds")) overrides["seeds"] = f.seeds;
  if (given("--seed-start")) overrides["seed_start"] = f.seed_start;
  if (given("--epsilon")) overrides["epsilon"] = f.epsilon;
  if (given("--zeta")) overrides["zeta"] = f.zeta;
  if (given("--d")) overrides["d"] = f.d;
  if (given("--depth")) overrides["depth"] = f.depth;
  if (given("--method")) overrides["method"] = f.method;
  if (given("--branch-rule")) overrides["branch_rule"] = f.branch_rule;
  if (given("--search-order")) overrides["search_order"] = f.search_order;
  if (given("--incumbent-init")) overrides["incumbent_init"] = f.incumbent_init;
  if (given("--prune-ties")) overrides["prune_ties"] = f.prune_ties;
  if (given("--timeout-ms")) overrides["timeout_ms"] = f.timeout_ms;
  if (given("--node-limit")) overrides["node_limit"] = f.node_limit;
  if (given("--control")) overrides["control"] = true;
  if (given("--no-smoke")) overrides["smoke"] = false;
  if (given("--runtime")) overrides["runtime"] = true;
  if (given("--input")) overrides["input"] = f.input;
  atsp::merge_config(c, overrides);
  return c;
}

void emit(const std::string& command, const atsp::CommandOutput& output, const std::string& out) {
  std::string target = out;
  if (target.empty()) {
    if (const char* dir = std::getenv(atsp::kOutDirEnv); dir && *dir) {
      std::filesystem::create_directories(dir);
      target = (std::filesystem::path(dir) / (command + "." + output.extension)).string();
    }
  }
  if (target.empty() || target == "-") {
    std::cout << output.text;
    return;
  }
  std::ofstream file(target, std::ios::binary);
  if (!file) throw atsp::InvalidInput("cannot open '" + target + "' for writing");
  file << output.text;
  if (!file) throw atsp::InvalidInput("write to '" + target + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random ATSP branch-and-bound laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", atsp::kToolVersion);

  using Command = std::function<atsp::CommandOutput(const HarnessConfig&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"gap-scan", "Z_ATSP - Z_AP against n^-1.5 per seed", atsp::cmd_gap_scan},
      {"nodes-scan", "Branch-and-bound node counts and growth fit", atsp::cmd_nodes_scan},
      {"structure-scan", "Neighbour-digraph diameters and dual statistics", atsp::cmd_structure_scan},
      {"witness", "Near-optimal matching witness tree", atsp::cmd_witness},
      {"solve", "Solve one instance", atsp::cmd_solve},
      {"generate", "Write a random cost matrix", atsp::cmd_generate},
  };
  Flags flags;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    subs.emplace_back(sub, &fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? atsp::kExitOk : atsp::kExitUsage;
  }

  for (const auto& [sub, fn] : subs) {
    if (!sub->parsed()) continue;
    try {
      const HarnessConfig config = effective_config(sub, flags);
      const atsp::CommandOutput output = (*fn)(config);
      emit(sub->get_name(), output, flags.out);
      return output.exit_code;
    } catch (const atsp::SizeGuard& e) {
      std::cerr << "error: " << e.what() << "\n";
      return atsp::kExitGuard;
    } catch (const atsp::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return atsp::kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return atsp::kExitUsage;
    }
  }
  return atsp::kExitUsage;
}
