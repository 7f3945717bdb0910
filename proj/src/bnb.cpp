#include "atsp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

#include "atsp/error.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pending {
  int id;
  int depth;
  double bound;
  Restriction restriction;
  ApSolution solution;
};

struct LaterBound {
  bool operator()(const Pending& a, const Pending& b) const {
    return a.bound != b.bound ? a.bound > b.bound : a.id > b.id;
  }
};

// First edge not yet forced in along a shortest non-Hamiltonian cycle,
// walking from the cycle's smallest vertex.
Edge shortest_subcycle_edge(const Restriction& restriction, const ApSolution& sol) {
  const auto cover = cycle_cover(sol);
  const std::vector<int>* shortest = nullptr;
  for (const auto& cycle : cover.cycles) {
    if (!shortest || cycle.size() < shortest->size()) shortest = &cycle;
  }
  const auto& cycle = *shortest;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    const Edge e{cycle[t], cycle[(t + 1) % cycle.size()]};
    if (!restriction.forced_in().contains(e)) return e;
  }
  throw InconsistentRestriction("subcycle consists of forced edges only");
}

// Matching edge on a short cycle whose cheapest row and column replacements
// cost the most, measured in reduced costs.
Edge max_regret_edge(const CostMatrix& costs, const Restriction& restriction,
                     const ApSolution& sol) {
  const int n = sol.n();
  const auto cover = cycle_cover(sol);
  const auto& cons = *sol.constraints;
  double best = -1.0;
  Edge choice{-1, -1};
  for (const auto& cycle : cover.cycles) {
    for (int i : cycle) {
      const Edge e{i, sol.assignment[i]};
      if (restriction.forced_in().contains(e)) continue;
      double row_alt = kInf;
      double col_alt = kInf;
      for (int k = 0; k < n; ++k) {
        if (k != e.head && cons.allowed(i, k)) row_alt = std::min(row_alt, sol.reduced_cost(costs, i, k));
        if (k != i && cons.allowed(k, e.head)) col_alt = std::min(col_alt, sol.reduced_cost(costs, k, e.head));
      }
      const double regret = row_alt + col_alt;
      if (regret > best || (regret == best && e < choice)) {
        best = regret;
        choice = e;
      }
    }
  }
  if (choice.tail < 0) throw InconsistentRestriction("no branchable edge on a subcycle");
  return choice;
}

bool is_tour(const ApSolution& sol) { return is_single_cycle(sol.assignment); }

class Search {
 public:
  Search(const CostMatrix& costs, const BnbOptions& options)
      : costs_(costs), options_(options), start_(std::chrono::steady_clock::now()) {
    run_.options = options;
  }

  BnbRun run() {
    const Restriction root(costs_.n());
    auto root_solution = solve(root, nullptr);
    if (options_.incumbent_init == IncumbentInit::kKarpPatch && root_solution) {
      const Tour patched = karp_patch(costs_, *root_solution);
      offer(patched, -1);
    }
    const int root_id = record(-1, 0, Edge{-1, -1}, ' ', root, root_solution);
    classify(Pending{root_id, 0, root_solution ? root_solution->value : kInf, root,
                     root_solution ? std::move(*root_solution) : ApSolution{}},
             root_solution.has_value());

    while (!frontier_empty()) {
      if (limit_hit()) {
        run_.completed = false;
        break;
      }
      Pending node = pop();
      if (prunable(node.bound)) {
        ++run_.nodes_pruned_by_bound;
        set_fate(node.id, NodeFate::kPruned);
        continue;
      }
      branch(std::move(node));
    }

    if (!have_incumbent_) {
      // Only reachable when a limit stopped the search before any tour was seen.
      offer(karp_patch(costs_, solve_ap(costs_, Restriction(costs_.n()))), -1);
    }
    run_.tour = incumbent_;
    return std::move(run_);
  }

 private:
  std::optional<ApSolution> solve(const Restriction& r, const ApSolution* parent) {
    ++run_.nodes_explored;
    try {
      if (parent) {
        const WarmStart warm = warm_start_from(*parent);
        return solve_ap(costs_, r, &warm);
      }
      return solve_ap(costs_, r);
    } catch (const Infeasible&) {
      return std::nullopt;
    }
  }

  int record(int parent, int depth, Edge e, char direction, const Restriction& r,
             const std::optional<ApSolution>& sol) {
    const int id = next_id_++;
    run_.max_depth = std::max(run_.max_depth, depth);
    if (options_.record_tree) {
      BnbNode node;
      node.id = id;
      node.parent = parent;
      node.depth = depth;
      node.branch_edge = e;
      node.direction = direction;
      node.bound = sol ? sol->value : kInf;
      node.forced_in = r.forced_in();
      node.forced_out = r.forced_out();
      run_.nodes.push_back(std::move(node));
    }
    return id;
  }

  void set_fate(int id, NodeFate fate) {
    if (options_.record_tree) run_.nodes[static_cast<std::size_t>(id)].fate = fate;
  }

  bool prunable(double bound) const {
    if (!have_incumbent_) return false;
    return options_.prune_ties ? bound >= incumbent_.cost : bound > incumbent_.cost;
  }

  void offer(const Tour& tour, long node) {
    if (!have_incumbent_ || tour.cost < incumbent_.cost) {
      incumbent_ = tour;
      have_incumbent_ = true;
      run_.incumbent_history.push_back({tour.cost, node});
    }
  }

  // Settles a freshly solved node or queues it for branching.
  void classify(Pending node, bool feasible) {
    if (!feasible) {
      ++run_.nodes_infeasible;
      set_fate(node.id, NodeFate::kInfeasible);
      return;
    }
    if (prunable(node.bound)) {
      ++run_.nodes_pruned_by_bound;
      set_fate(node.id, NodeFate::kPruned);
      return;
    }
    if (is_tour(node.solution)) {
      ++run_.nodes_fathomed_as_tours;
      set_fate(node.id, NodeFate::kFathomed);
      offer(tour_from_successor(costs_, node.solution.assignment), node.id);
      return;
    }
    push(std::move(node));
  }

  void branch(Pending node) {
    set_fate(node.id, NodeFate::kBranched);
    const Edge e = options_.branch_rule == BranchRule::kShortestSubcycle
                       ? shortest_subcycle_edge(node.restriction, node.solution)
                       : max_regret_edge(costs_, node.restriction, node.solution);

    std::vector<std::pair<Pending, bool>> children;
    {
      Restriction minus = node.restriction.with_forced_out(e);
      auto sol = solve(minus, &node.solution);
      const int id = record(node.id, node.depth + 1, e, '-', minus, sol);
      const bool ok = sol.has_value();
      children.emplace_back(Pending{id, node.depth + 1, ok ? sol->value : kInf, std::move(minus),
                                    ok ? std::move(*sol) : ApSolution{}},
                            ok);
    }
    if (node.restriction.admissible(e)) {
      Restriction plus = node.restriction.with_forced_in(e);
      auto sol = solve(plus, &node.solution);
      const int id = record(node.id, node.depth + 1, e, '+', plus, sol);
      const bool ok = sol.has_value();
      children.emplace_back(Pending{id, node.depth + 1, ok ? sol->value : kInf, std::move(plus),
                                    ok ? std::move(*sol) : ApSolution{}},
                            ok);
    }
    // Depth-first pops the cheaper child first (the '-' child on ties).
    if (options_.search_order == SearchOrder::kDepthFirst && children.size() == 2 &&
        children[1].first.bound < children[0].first.bound) {
      std::swap(children[0], children[1]);
    }
    if (options_.search_order == SearchOrder::kDepthFirst) {
      std::reverse(children.begin(), children.end());
    }
    for (auto& [child, ok] : children) classify(std::move(child), ok);
  }

  void push(Pending node) {
    if (options_.search_order == SearchOrder::kBestFirst) {
      best_first_.push(std::move(node));
    } else {
      stack_.push_back(std::move(node));
    }
  }

  Pending pop() {
    if (options_.search_order == SearchOrder::kBestFirst) {
      Pending node = best_first_.top();
      best_first_.pop();
      return node;
    }
    Pending node = std::move(stack_.back());
    stack_.pop_back();
    return node;
  }

  bool frontier_empty() const {
    return options_.search_order == SearchOrder::kBestFirst ? best_first_.empty() : stack_.empty();
  }

  bool limit_hit() const {
    if (options_.node_limit > 0 && run_.nodes_explored >= options_.node_limit) return true;
    if (options_.timeout_ms > 0) {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start_);
      if (elapsed.count() >= options_.timeout_ms) return true;
    }
    return false;
  }

  const CostMatrix& costs_;
  BnbOptions options_;
  std::chrono::steady_clock::time_point start_;
  BnbRun run_;
  Tour incumbent_;
  bool have_incumbent_ = false;
  int next_id_ = 0;
  std::priority_queue<Pending, std::vector<Pending>, LaterBound> best_first_;
  std::vector<Pending> stack_;
};

}  // namespace

std::string to_string(BranchRule rule) {
  return rule == BranchRule::kShortestSubcycle ? "shortest-subcycle" : "max-regret";
}

std::string to_string(SearchOrder order) {
  return order == SearchOrder::kBestFirst ? "best-first" : "depth-first";
}

std::string to_string(IncumbentInit init) {
  return init == IncumbentInit::kKarpPatch ? "karp-patch" : "none";
}

BranchRule parse_branch_rule(const std::string& text) {
  if (text == "shortest-subcycle") return BranchRule::kShortestSubcycle;
  if (text == "max-regret") return BranchRule::kMaxRegret;
  throw InvalidInput("unknown branch rule '" + text + "'");
}

SearchOrder parse_search_order(const std::string& text) {
  if (text == "best-first") return SearchOrder::kBestFirst;
  if (text == "depth-first") return SearchOrder::kDepthFirst;
  throw InvalidInput("unknown search order '" + text + "'");
}

IncumbentInit parse_incumbent_init(const std::string& text) {
  if (text == "karp-patch") return IncumbentInit::kKarpPatch;
  if (text == "none") return IncumbentInit::kNone;
  throw InvalidInput("unknown incumbent init '" + text + "'");
}

BnbRun solve_bnb(const CostMatrix& costs, const BnbOptions& options) {
  if (options.node_limit < 0 || options.timeout_ms < 0) {
    throw InvalidRange("node_limit and timeout_ms must be >= 0");
  }
  return Search(costs, options).run();
}

CountingReport verify_counting_bound(const BnbRun& run, const CostMatrix& costs,
                                     const ExactLimits& limits) {
  CountingReport report;
  report.nodes_explored = run.nodes_explored;
  report.z_atsp = run.tour.cost;
  report.z_ap = solve_ap(costs, Restriction(costs.n())).value;
  report.gap = report.z_atsp - report.z_ap;
  report.cheap_matchings = count_matchings_below(costs, report.z_atsp, limits);
  report.holds = report.nodes_explored >= report.cheap_matchings;
  return report;
}

}  // namespace atsp
