#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/exact.hpp"
#include "atsp/instance.hpp"
#include "atsp/restriction.hpp"
#include "atsp/tour.hpp"

namespace atsp {

enum class BranchRule {
  kShortestSubcycle,  // walk the edges of a shortest cycle of the node's cover
  kMaxRegret,         // matching edge with the largest cheapest-replacement penalty
};
enum class SearchOrder { kBestFirst, kDepthFirst };
enum class IncumbentInit { kNone, kKarpPatch };

struct BnbOptions {
  BranchRule branch_rule = BranchRule::kShortestSubcycle;
  SearchOrder search_order = SearchOrder::kBestFirst;
  IncumbentInit incumbent_init = IncumbentInit::kKarpPatch;
  bool prune_ties = true;   // prune on bound >= incumbent (else bound > incumbent)
  long node_limit = 0;      // 0 = unlimited
  long timeout_ms = 0;      // 0 = unlimited
  bool record_tree = false; // keep every node in BnbRun::nodes
};

std::string to_string(BranchRule rule);
std::string to_string(SearchOrder order);
std::string to_string(IncumbentInit init);
BranchRule parse_branch_rule(const std::string& text);
SearchOrder parse_search_order(const std::string& text);
IncumbentInit parse_incumbent_init(const std::string& text);

enum class NodeFate { kOpen, kBranched, kFathomed, kPruned, kInfeasible };

struct BnbNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  Edge branch_edge{-1, -1};
  char direction = ' ';      // '+' forced in, '-' forced out, ' ' root
  double bound = 0.0;        // Z_AP(F(node)); +inf when infeasible
  NodeFate fate = NodeFate::kOpen;
  EdgeSet forced_in;
  EdgeSet forced_out;
};

struct IncumbentUpdate {
  double cost;
  long node;  // -1 for the root heuristic
};

struct BnbRun {
  Tour tour;
  long nodes_explored = 0;   // AP(F) solves, including pruned and infeasible nodes
  long nodes_pruned_by_bound = 0;
  long nodes_fathomed_as_tours = 0;
  long nodes_infeasible = 0;
  int max_depth = 0;
  bool completed = true;     // false when a node or time limit stopped the search
  std::vector<IncumbentUpdate> incumbent_history;
  BnbOptions options;
  std::vector<BnbNode> nodes;  // filled when options.record_tree
};

// Exact ATSP by branch and bound over edge inclusion/exclusion with the
// restricted assignment bound Z_AP(F). Each node's AP is warm-started from
// its parent's duals and matching.
BnbRun solve_bnb(const CostMatrix& costs, const BnbOptions& options = {});

struct CountingReport {
  long nodes_explored = 0;
  long cheap_matchings = 0;  // matchings with cost < Z_ATSP
  bool holds = false;        // nodes_explored >= cheap_matchings
  double z_ap = 0.0;
  double z_atsp = 0.0;
  double gap = 0.0;
};

// Compares the node count of a finished run with the number of perfect
// matchings cheaper than its optimal tour.
CountingReport verify_counting_bound(const BnbRun& run, const CostMatrix& costs,
                                     const ExactLimits& limits = kExactLimits);

struct WitnessNode {
  int parent = -1;
  int depth = 0;
  Edge edge{-1, -1};          // distinguishing edge forced in at this node
  EdgeSet forced_in;
  EdgeSet forced_out;
  std::vector<int> matching;  // M^(node); the AP(F) optimum at the root
  double cost = 0.0;
  double z_ap = 0.0;          // Z_AP(F^(node))
  std::vector<int> children;
  bool shortfall = false;     // fewer than d alternatives found here
};

struct WitnessTree {
  int d = 0;
  int depth_limit = 0;
  double z_ap = 0.0;          // root Z_AP
  double alt_threshold = 0.0;
  std::vector<WitnessNode> nodes;  // nodes[0] is the root
  bool complete = false;      // every internal node got d children down to depth_limit

  std::vector<int> leaves() const;
};

// d-ary tree of restrictions and near-optimal matchings: the children of a
// node with F = (F1, F0) are F1 u {e_i}, F0 u {e_j : j != i}, labelled M_i,
// for the alternatives (e_i, M_i) of AP(F). A node without d alternatives
// is kept as a flagged leaf. Throws InvalidRange if depth_limit > params.d.
WitnessTree build_witness_tree(const CostMatrix& costs, const AnalysisParams& params,
                               int depth_limit);

struct WitnessCheck {
  bool leaves_distinct = false;
  bool bookkeeping_exact = false;  // |F1| = depth, |F0| = depth (d - 1) at every node
  bool feasible = false;           // each matching respects its own F
  bool cost_window = false;        // Z_AP(F) <= C(M) <= Z_AP + depth * alt_threshold
  bool ok() const { return leaves_distinct && bookkeeping_exact && feasible && cost_window; }
};

WitnessCheck verify_witness_tree(const CostMatrix& costs, const WitnessTree& tree);

}  // namespace atsp
