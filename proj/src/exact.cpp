#include "atsp/exact.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "atsp/error.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Partial sums may be pruned only when clearly worse than the incumbent.
constexpr double kPruneMargin = 1e-9;

void guard(int n, int limit, const char* what) {
  if (n > limit) {
    throw SizeGuard(std::string(what) + " limited to n <= " + std::to_string(limit) +
                    ", got n = " + std::to_string(n));
  }
}

// Depth-first enumeration of permutations feasible for `cons`, calling
// visit(assignment) at each leaf whose partial cost stays within `bound()`.
template <typename Bound, typename Visit>
void enumerate(const CostMatrix& costs, const MatchingConstraints& cons, Bound bound, Visit visit) {
  const int n = costs.n();
  std::vector<int> forced_col(n, -1);
  std::vector<char> used(n, 0);
  for (const Edge& e : cons.forced()) {
    forced_col[e.tail] = e.head;
    used[e.head] = 1;
  }
  std::vector<int> assignment(n, -1);
  auto recurse = [&](auto&& self, int row, double partial) -> void {
    if (partial > bound() + kPruneMargin) return;
    if (row == n) {
      visit(assignment);
      return;
    }
    if (forced_col[row] != -1) {
      assignment[row] = forced_col[row];
      self(self, row + 1, partial + costs(row, forced_col[row]));
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j] || !cons.allowed(row, j)) continue;
      used[j] = 1;
      assignment[row] = j;
      self(self, row + 1, partial + costs(row, j));
      used[j] = 0;
    }
  };
  recurse(recurse, 0, 0.0);
}

}  // namespace

MatchingOptimum brute_force_ap(const CostMatrix& costs, const Restriction& restriction,
                               const ExactLimits& limits) {
  guard(costs.n(), limits.brute_force_max_n, "brute_force_ap");
  const MatchingConstraints cons(restriction);
  MatchingOptimum best{kInf, {}};
  enumerate(
      costs, cons, [&] { return best.cost; },
      [&](const std::vector<int>& assignment) {
        const double cost = assignment_cost(costs, assignment);
        if (cost < best.cost) best = {cost, assignment};
      });
  if (best.assignment.empty()) {
    throw Infeasible("no permutation is feasible for the restriction", {});
  }
  return best;
}

std::vector<MatchingOptimum> enumerate_matchings(const CostMatrix& costs,
                                                 const Restriction& restriction,
                                                 const ExactLimits& limits) {
  guard(costs.n(), limits.brute_force_max_n, "enumerate_matchings");
  const MatchingConstraints cons(restriction);
  std::vector<MatchingOptimum> all;
  enumerate(
      costs, cons, [] { return kInf; },
      [&](const std::vector<int>& assignment) {
        all.push_back({assignment_cost(costs, assignment), assignment});
      });
  std::stable_sort(all.begin(), all.end(),
                   [](const MatchingOptimum& a, const MatchingOptimum& b) { return a.cost < b.cost; });
  return all;
}

Tour brute_force_atsp(const CostMatrix& costs, const ExactLimits& limits) {
  const int n = costs.n();
  guard(n, limits.brute_force_max_n, "brute_force_atsp");
  std::vector<int> order(n);
  std::vector<char> used(n, 0);
  order[0] = 0;
  used[0] = 1;
  Tour best{{}, kInf};
  auto recurse = [&](auto&& self, int depth, double partial) -> void {
    if (partial > best.cost + kPruneMargin) return;
    if (depth == n) {
      std::vector<int> succ(n);
      for (int t = 0; t < n; ++t) succ[order[t]] = order[(t + 1) % n];
      const double cost = assignment_cost(costs, succ);
      if (cost < best.cost) best = {order, cost};
      return;
    }
    for (int v = 1; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      order[depth] = v;
      self(self, depth + 1, partial + costs(order[depth - 1], v));
      used[v] = 0;
    }
  };
  recurse(recurse, 1, 0.0);
  return best;
}

Tour held_karp(const CostMatrix& costs, const ExactLimits& limits) {
  const int n = costs.n();
  guard(n, limits.held_karp_max_n, "held_karp");
  const int m = n - 1;  // vertices 1..n-1 map to bits 0..m-1
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> dp(subsets * static_cast<std::size_t>(m), kInf);
  auto at = [&](std::size_t mask, int last) -> double& {
    return dp[mask * static_cast<std::size_t>(m) + static_cast<std::size_t>(last)];
  };
  for (int j = 0; j < m; ++j) at(std::size_t{1} << j, j) = costs(0, j + 1);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (int last = 0; last < m; ++last) {
      if (!(mask >> last & 1U)) continue;
      const double base = at(mask, last);
      if (base == kInf) continue;
      for (int next = 0; next < m; ++next) {
        if (mask >> next & 1U) continue;
        double& slot = at(mask | (std::size_t{1} << next), next);
        const double cand = base + costs(last + 1, next + 1);
        if (cand < slot) slot = cand;
      }
    }
  }

  const std::size_t full = subsets - 1;
  int last = 0;
  double best = kInf;
  for (int j = 0; j < m; ++j) {
    const double cand = at(full, j) + costs(j + 1, 0);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  // Walk back through the table; each predecessor reproduces its entry exactly.
  std::vector<int> reversed{last + 1};
  std::size_t mask = full;
  while (mask != (std::size_t{1} << last)) {
    const std::size_t prev_mask = mask & ~(std::size_t{1} << last);
    int prev = -1;
    for (int k = 0; k < m; ++k) {
      if ((prev_mask >> k & 1U) && at(prev_mask, k) + costs(k + 1, last + 1) == at(mask, last)) {
        prev = k;
        break;
      }
    }
    mask = prev_mask;
    last = prev;
    reversed.push_back(last + 1);
  }
  std::vector<int> order{0};
  order.insert(order.end(), reversed.rbegin(), reversed.rend());
  std::vector<int> succ(n);
  for (int t = 0; t < n; ++t) succ[order[t]] = order[(t + 1) % n];
  return Tour{order, assignment_cost(costs, succ)};
}

KBestStream::KBestStream(const CostMatrix& costs, const Restriction& restriction,
                         double cost_limit, long count_limit)
    : costs_(&costs), cost_limit_(cost_limit), count_limit_(count_limit) {
  try {
    push(MatchingConstraints(restriction), nullptr);
  } catch (const Infeasible&) {
    // Empty stream.
  }
}

void KBestStream::push(MatchingConstraints constraints, const WarmStart* warm) {
  ++solves_;
  ApSolution sol = solve_ap(*costs_, constraints, warm);
  const double cost = sol.value;
  frontier_.push(Node{cost, seq_++, std::move(constraints), std::move(sol)});
}

std::optional<MatchingOptimum> KBestStream::next() {
  if (emitted_ >= count_limit_ || frontier_.empty()) return std::nullopt;
  if (frontier_.top().cost > cost_limit_) return std::nullopt;
  Node node = frontier_.top();
  frontier_.pop();
  ++emitted_;

  const WarmStart warm = warm_start_from(node.solution);
  MatchingConstraints branch = node.constraints;
  for (int i = 0; i < costs_->n(); ++i) {
    if (!node.constraints.row_free(i)) continue;
    const Edge e{i, node.solution.assignment[i]};
    MatchingConstraints child = branch;
    child.forbid(e);
    try {
      push(std::move(child), &warm);
    } catch (const Infeasible&) {
      // This part of the partition holds no matching.
    }
    branch.force(e);
  }
  return MatchingOptimum{node.cost, node.solution.assignment};
}

KBestStream kbest_matchings(const CostMatrix& costs, const Restriction& restriction,
                            double cost_limit, long count_limit) {
  return KBestStream(costs, restriction, cost_limit, count_limit);
}

long count_matchings_below(const CostMatrix& costs, double threshold, const ExactLimits& limits) {
  return count_matchings_below(costs, Restriction(costs.n()), threshold, limits);
}

long count_matchings_below(const CostMatrix& costs, const Restriction& restriction,
                           double threshold, const ExactLimits& limits) {
  KBestStream stream(costs, restriction, threshold, limits.kbest_max_count + 1);
  long count = 0;
  while (auto m = stream.next()) {
    if (m->cost >= threshold) break;
    if (++count > limits.kbest_max_count) {
      throw SizeGuard("more than " + std::to_string(limits.kbest_max_count) +
                      " matchings below the threshold");
    }
  }
  return count;
}

}  // namespace atsp
