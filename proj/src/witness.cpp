#include <algorithm>
#include <deque>
#include <set>

#include "atsp/bnb.hpp"
#include "atsp/error.hpp"

namespace atsp {

std::vector<int> WitnessTree::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].children.empty()) out.push_back(i);
  }
  return out;
}

WitnessTree build_witness_tree(const CostMatrix& costs, const AnalysisParams& params,
                               int depth_limit) {
  if (depth_limit < 0 || depth_limit > params.d) {
    throw InvalidRange("witness depth must lie in [0, d]");
  }
  const int n = costs.n();
  WitnessTree tree;
  tree.d = params.d;
  tree.depth_limit = depth_limit;
  tree.alt_threshold = params.alt_threshold;
  tree.complete = true;

  const ApSolution root_solution = solve_ap(costs, Restriction(n));
  tree.z_ap = root_solution.value;
  WitnessNode root;
  root.matching = root_solution.assignment;
  root.cost = root_solution.value;
  root.z_ap = root_solution.value;
  tree.nodes.push_back(std::move(root));

  AlternativesOptions options;
  options.require_forcing_feasible = true;

  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    if (tree.nodes[id].depth >= depth_limit) continue;

    const Restriction restriction(n, tree.nodes[id].forced_in, tree.nodes[id].forced_out);
    const ApSolution solution = solve_ap(costs, restriction);
    const auto alts = alternatives(costs, restriction, solution, params, options);
    if (alts.shortfall) {
      tree.nodes[id].shortfall = true;
      tree.complete = false;
      continue;
    }

    for (std::size_t i = 0; i < alts.items.size(); ++i) {
      WitnessNode child;
      child.parent = id;
      child.depth = tree.nodes[id].depth + 1;
      child.edge = alts.items[i].edge;
      child.forced_in = tree.nodes[id].forced_in;
      child.forced_in.insert(alts.items[i].edge);
      child.forced_out = tree.nodes[id].forced_out;
      for (std::size_t j = 0; j < alts.items.size(); ++j) {
        if (j != i) child.forced_out.insert(alts.items[j].edge);
      }
      child.matching = alts.items[i].matching;
      child.cost = alts.items[i].cost;
      child.z_ap = solve_ap(costs, Restriction(n, child.forced_in, child.forced_out)).value;
      const int child_id = static_cast<int>(tree.nodes.size());
      tree.nodes[id].children.push_back(child_id);
      tree.nodes.push_back(std::move(child));
      queue.push_back(child_id);
    }
  }
  return tree;
}

WitnessCheck verify_witness_tree(const CostMatrix& costs, const WitnessTree& tree) {
  const int n = costs.n();
  WitnessCheck check;
  check.bookkeeping_exact = true;
  check.feasible = true;
  check.cost_window = true;

  for (const auto& node : tree.nodes) {
    const long in = static_cast<long>(node.forced_in.size());
    const long out = static_cast<long>(node.forced_out.size());
    if (in != node.depth || out != static_cast<long>(node.depth) * (tree.d - 1)) {
      check.bookkeeping_exact = false;
    }
    try {
      const Restriction restriction(n, node.forced_in, node.forced_out);
      if (!MatchingConstraints(restriction).admits(node.matching)) check.feasible = false;
      const double cost = assignment_cost(costs, node.matching);
      const double z = solve_ap(costs, restriction).value;
      const double slack = 1e-9 * std::max(1.0, std::abs(cost));
      if (z > cost + slack || cost > tree.z_ap + node.depth * tree.alt_threshold + slack) {
        check.cost_window = false;
      }
    } catch (const Error&) {
      check.feasible = false;
    }
  }

  std::set<std::vector<int>> seen;
  check.leaves_distinct = true;
  for (int leaf : tree.leaves()) {
    if (!seen.insert(tree.nodes[leaf].matching).second) check.leaves_distinct = false;
  }
  return check;
}

}  // namespace atsp
