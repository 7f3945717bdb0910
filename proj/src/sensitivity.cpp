#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "atsp/assignment.hpp"
#include "atsp/error.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest alternating paths from a matched row in the residual graph:
// non-matching edges row -> column cost C-bar (clamped at 0), matching edges
// column -> row cost 0. The start row's own column is blocked, so every path
// to column c is the completion of an alternating cycle through (a, b) with
// a = inv[c] and the start row = inv[b].
struct AlternatingPaths {
  std::vector<double> dist;     // by column
  std::vector<int> pred_row;    // row preceding the column on the path
};

AlternatingPaths alternating_paths(const CostMatrix& costs, const ApSolution& sol,
                                   const std::vector<int>& inv, int start_row, double cutoff) {
  const auto& cons = *sol.constraints;
  const int n = sol.n();
  AlternatingPaths out{std::vector<double>(n, kInf), std::vector<int>(n, -1)};
  std::vector<char> done(n, 0);
  const int blocked = sol.assignment[start_row];
  done[blocked] = 1;

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  auto relax = [&](int row, double base) {
    for (int j = 0; j < n; ++j) {
      if (done[j] || j == sol.assignment[row] || !cons.allowed(row, j)) continue;
      const double d = base + std::max(0.0, sol.reduced_cost(costs, row, j));
      if (d < out.dist[j] && d <= cutoff) {
        out.dist[j] = d;
        out.pred_row[j] = row;
        heap.emplace(d, j);
      }
    }
  };
  relax(start_row, 0.0);
  while (!heap.empty()) {
    const auto [d, j] = heap.top();
    heap.pop();
    if (done[j] || d > out.dist[j]) continue;
    done[j] = 1;
    relax(inv[j], d);
  }
  return out;
}

// Applies the alternating cycle closed by edge (a, b) whose completion ends
// at column sol.assignment[a].
std::vector<int> apply_cycle(const ApSolution& sol, const AlternatingPaths& paths, Edge e,
                             int start_row) {
  std::vector<int> next = sol.assignment;
  next[e.tail] = e.head;
  int column = sol.assignment[e.tail];
  while (true) {
    const int row = paths.pred_row[column];
    const int old_column = sol.assignment[row];
    next[row] = column;
    if (row == start_row) break;
    column = old_column;
  }
  return next;
}

void require_omega(const Restriction& restriction, const ApSolution& sol, Edge e) {
  if (e.tail < 0 || e.head < 0 || e.tail >= restriction.n() || e.head >= restriction.n()) {
    throw InvalidEdge("edge out of range");
  }
  const bool in_matching = sol.contains(e);
  if (in_matching && sol.row_free(e.tail)) return;
  if (!restriction.admissible(e) || !sol.row_free(e.tail) || !sol.col_free(e.head)) {
    throw InvalidEdge("edge (" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                      ") is forced, forced out, inadmissible or diagonal");
  }
}

}  // namespace

Insertion insertion_cost(const CostMatrix& costs, const Restriction& restriction,
                         const ApSolution& solution, Edge e) {
  require_omega(restriction, solution, e);
  if (solution.contains(e)) return Insertion{0.0, solution.assignment, solution.value};

  const auto inv = solution.inverse();
  const int start_row = inv[e.head];
  const int target = solution.assignment[e.tail];
  const auto paths = alternating_paths(costs, solution, inv, start_row, kInf);
  if (paths.dist[target] == kInf) return Insertion{kInf, {}, kInf};

  Insertion out;
  out.matching = apply_cycle(solution, paths, e, start_row);
  out.cost = assignment_cost(costs, out.matching);
  out.delta = std::max(0.0, out.cost - solution.value);
  return out;
}

AlternativesResult alternatives(const CostMatrix& costs, const Restriction& restriction,
                                const AnalysisParams& params, const AlternativesOptions& options) {
  return alternatives(costs, restriction, solve_ap(costs, restriction), params, options);
}

AlternativesResult alternatives(const CostMatrix& costs, const Restriction& restriction,
                                const ApSolution& solution, const AnalysisParams& params,
                                const AlternativesOptions& options) {
  AlternativesResult result;
  result.base_value = solution.value;
  result.outside_size_condition = !restriction.within_size_condition(params.epsilon);

  const int n = solution.n();
  const double limit = params.alt_threshold;
  const auto inv = solution.inverse();

  // Candidate edges grouped by the row that loses its column.
  std::map<int, std::vector<Edge>> by_start;
  for (int i = 0; i < n; ++i) {
    if (!solution.row_free(i)) continue;
    for (int j = 0; j < n; ++j) {
      const Edge e{i, j};
      if (solution.contains(e) || !restriction.admissible(e) || !solution.col_free(j)) continue;
      if (solution.reduced_cost(costs, i, j) <= limit) by_start[inv[j]].push_back(e);
    }
  }

  struct Candidate {
    double delta;
    Edge edge;
    std::vector<int> matching;
    double cost;
  };
  std::vector<Candidate> candidates;
  for (const auto& [start_row, edges] : by_start) {
    double cheapest = kInf;
    for (const Edge& e : edges) {
      cheapest = std::min(cheapest, std::max(0.0, solution.reduced_cost(costs, e.tail, e.head)));
    }
    const auto paths = alternating_paths(costs, solution, inv, start_row, limit - cheapest);
    for (const Edge& e : edges) {
      const int target = solution.assignment[e.tail];
      if (paths.dist[target] == kInf) continue;
      auto matching = apply_cycle(solution, paths, e, start_row);
      const double cost = assignment_cost(costs, matching);
      const double delta = std::max(0.0, cost - solution.value);
      if (delta > limit) continue;
      candidates.push_back({delta, e, std::move(matching), cost});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.delta, x.edge) < std::tie(y.delta, y.edge);
  });

  for (auto& cand : candidates) {
    if (static_cast<int>(result.items.size()) >= params.d) break;
    bool compatible = true;
    for (const auto& chosen : result.items) {
      if (chosen.matching == cand.matching || chosen.matching[cand.edge.tail] == cand.edge.head ||
          cand.matching[chosen.edge.tail] == chosen.edge.head) {
        compatible = false;
        break;
      }
    }
    if (!compatible) continue;
    if (options.require_forcing_feasible) {
      const MatchingConstraints child(restriction.with_forced_in(cand.edge));
      if (!child.admits(cand.matching)) continue;
    }
    result.items.push_back({cand.edge, std::move(cand.matching), cand.cost});
  }
  result.shortfall = static_cast<int>(result.items.size()) < params.d;
  return result;
}

bool verify_alternatives(const CostMatrix& costs, const Restriction& restriction,
                         const AlternativesResult& result, double alt_threshold) {
  const MatchingConstraints cons(restriction);
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < result.items.size(); ++i) {
    const auto& item = result.items[i];
    if (!cons.admits(item.matching)) return false;
    const double cost = assignment_cost(costs, item.matching);
    if (cost != item.cost) return false;
    if (cost - result.base_value > alt_threshold + kTightTolerance) return false;
    if (item.matching[item.edge.tail] != item.edge.head) return false;
    if (!restriction.admissible(item.edge)) return false;
    if (!seen.insert(item.matching).second) return false;
    for (std::size_t j = 0; j < result.items.size(); ++j) {
      if (j != i && result.items[j].matching[item.edge.tail] == item.edge.head) return false;
    }
  }
  return true;
}

BasisTree basis_tree(const CostMatrix& costs, const ApSolution& solution, double tolerance) {
  const auto& cons = *solution.constraints;
  const int n = solution.n();
  const auto rows = cons.free_rows();
  const auto cols = cons.free_cols();

  std::vector<int> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  BasisTree tree;
  tree.vertex_count = static_cast<int>(rows.size() + cols.size());
  auto try_add = [&](int i, int j) {
    const int a = find(i);
    const int b = find(n + j);
    if (a == b) return false;
    parent[a] = b;
    tree.edges.push_back({i, j});
    return true;
  };

  for (int i : rows) try_add(i, solution.assignment[i]);

  struct Slack {
    double reduced;
    Edge edge;
  };
  std::vector<Slack> loose;
  for (int i : rows) {
    for (int j : cols) {
      if (!cons.allowed(i, j) || solution.assignment[i] == j) continue;
      const double rc = solution.reduced_cost(costs, i, j);
      if (rc <= tolerance) {
        try_add(i, j);
      } else {
        loose.push_back({rc, {i, j}});
      }
    }
  }
  const auto wanted = static_cast<std::size_t>(std::max(0, tree.vertex_count - 1));
  if (tree.edges.size() < wanted) {
    std::sort(loose.begin(), loose.end(), [](const Slack& x, const Slack& y) {
      return std::tie(x.reduced, x.edge) < std::tie(y.reduced, y.edge);
    });
    for (const auto& s : loose) {
      if (tree.edges.size() == wanted) break;
      if (try_add(s.edge.tail, s.edge.head)) tree.degenerate = true;
    }
  }
  tree.spanning = tree.edges.size() == wanted;
  return tree;
}

}  // namespace atsp
