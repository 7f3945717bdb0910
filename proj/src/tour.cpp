#include "atsp/tour.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "atsp/error.hpp"

namespace atsp {

std::vector<int> Tour::successor() const {
  const int n = static_cast<int>(order.size());
  std::vector<int> succ(n);
  for (int t = 0; t < n; ++t) succ[order[t]] = order[(t + 1) % n];
  return succ;
}

bool is_single_cycle(const std::vector<int>& successor) {
  const int n = static_cast<int>(successor.size());
  if (n < 2) return false;
  std::vector<char> seen(n, 0);
  for (int v : successor) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  int v = 0;
  for (int steps = 1; steps < n; ++steps) {
    v = successor[v];
    if (v == 0) return false;
  }
  return successor[v] == 0;
}

Tour tour_from_successor(const CostMatrix& costs, const std::vector<int>& successor) {
  if (static_cast<int>(successor.size()) != costs.n() || !is_single_cycle(successor)) {
    throw InvalidInput("successor permutation is not a single n-cycle");
  }
  Tour tour;
  int v = 0;
  do {
    tour.order.push_back(v);
    v = successor[v];
  } while (v != 0);
  tour.cost = assignment_cost(costs, successor);
  return tour;
}

bool validate_tour(const Tour& tour, int n) {
  if (static_cast<int>(tour.order.size()) != n || n < 2) return false;
  std::vector<char> seen(n, 0);
  for (int v : tour.order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return is_single_cycle(tour.successor());
}

std::vector<int> CycleCover::lengths() const {
  std::vector<int> out;
  for (const auto& c : cycles) out.push_back(static_cast<int>(c.size()));
  return out;
}

std::vector<int> CycleCover::length_counts() const {
  int n = 0;
  for (const auto& c : cycles) n += static_cast<int>(c.size());
  std::vector<int> counts(n + 1, 0);
  for (const auto& c : cycles) ++counts[c.size()];
  return counts;
}

CycleCover cycle_cover(const std::vector<int>& assignment) {
  const int n = static_cast<int>(assignment.size());
  CycleCover cover;
  std::vector<char> seen(n, 0);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    for (int v = start; !seen[v]; v = assignment[v]) {
      seen[v] = 1;
      cycle.push_back(v);
    }
    cover.cycles.push_back(std::move(cycle));
  }
  return cover;
}

CycleCover cycle_cover(const ApSolution& solution) { return cycle_cover(solution.assignment); }

std::string to_string(PatchOrder order) {
  switch (order) {
    case PatchOrder::kTwoLargest:
      return "two-largest";
  }
  return "unknown";
}

Tour karp_patch(const CostMatrix& costs, const ApSolution& solution, PatchOrder order) {
  return karp_patch(costs, solution.assignment, order);
}

Tour karp_patch(const CostMatrix& costs, const std::vector<int>& assignment, PatchOrder order) {
  (void)order;
  std::vector<int> succ = assignment;
  while (true) {
    auto cover = cycle_cover(succ);
    if (cover.cycle_count() == 1) break;
    std::stable_sort(cover.cycles.begin(), cover.cycles.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    auto first = cover.cycles[0];
    auto second = cover.cycles[1];
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());

    double best = std::numeric_limits<double>::infinity();
    Edge choice{-1, -1};
    for (int a : first) {
      for (int b : second) {
        const double delta =
            costs(a, succ[b]) + costs(b, succ[a]) - costs(a, succ[a]) - costs(b, succ[b]);
        if (delta < best) {
          best = delta;
          choice = {std::min(a, b), std::max(a, b)};
        }
      }
    }
    std::swap(succ[choice.tail], succ[choice.head]);
  }
  return tour_from_successor(costs, succ);
}

Substitution k_substitution(const CostMatrix& costs, const ApSolution& solution,
                            const std::vector<Edge>& removed, const std::vector<int>& next) {
  const int n = solution.n();
  const int k = static_cast<int>(removed.size());
  if (k == 0) throw InvalidSubstitution("no edges removed");
  if (static_cast<int>(next.size()) != k) {
    throw InvalidSubstitution("path order must list one successor per path");
  }

  std::vector<int> path_of_tail(n, -1);
  for (int t = 0; t < k; ++t) {
    const Edge e = removed[t];
    if (e.tail < 0 || e.tail >= n || solution.assignment[e.tail] != e.head) {
      throw InvalidSubstitution("removed edge is not a matching edge");
    }
    if (path_of_tail[e.tail] != -1) throw InvalidSubstitution("edge removed twice");
    path_of_tail[e.tail] = t;
  }
  const auto cover = cycle_cover(solution);
  for (const auto& cycle : cover.cycles) {
    const bool hit = std::any_of(cycle.begin(), cycle.end(),
                                 [&](int v) { return path_of_tail[v] != -1; });
    if (!hit) throw InvalidSubstitution("removed edges do not cover every cycle");
  }

  // Path t runs from removed[t].head along the matching to the next removed tail.
  std::vector<int> path_end(k);
  for (int t = 0; t < k; ++t) {
    int v = removed[t].head;
    while (path_of_tail[v] == -1) v = solution.assignment[v];
    path_end[t] = v;
  }
  std::vector<int> succ = solution.assignment;
  for (int t = 0; t < k; ++t) {
    if (next[t] < 0 || next[t] >= k) throw InvalidSubstitution("path index out of range");
    succ[path_end[t]] = removed[next[t]].head;
  }
  if (!is_single_cycle(succ)) throw InvalidSubstitution("substitution does not produce a tour");

  Substitution out;
  out.tour = tour_from_successor(costs, succ);
  out.delta = out.tour.cost - solution.value;
  return out;
}

Substitution min_k_substitution(const CostMatrix& costs, const ApSolution& solution) {
  const int n = solution.n();
  if (n > kMaxExhaustiveSubstitution) {
    throw SizeGuard("exhaustive k-substitution limited to n <= " +
                    std::to_string(kMaxExhaustiveSubstitution));
  }
  const auto cover = cycle_cover(solution);
  std::vector<int> cycle_of(n);
  for (int c = 0; c < cover.cycle_count(); ++c) {
    for (int v : cover.cycles[c]) cycle_of[v] = c;
  }

  Substitution best;
  best.delta = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<char> hit(cover.cycle_count(), 0);
    std::vector<Edge> removed;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1U) {
        removed.push_back({v, solution.assignment[v]});
        hit[cycle_of[v]] = 1;
      }
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) continue;
    const int k = static_cast<int>(removed.size());
    std::vector<int> rest(k - 1);
    std::iota(rest.begin(), rest.end(), 1);
    do {
      std::vector<int> next(k);
      int prev = 0;
      for (int t : rest) {
        next[prev] = t;
        prev = t;
      }
      next[prev] = 0;
      auto sub = k_substitution(costs, solution, removed, next);
      if (sub.delta < best.delta) best = std::move(sub);
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return best;
}

}  // namespace atsp
