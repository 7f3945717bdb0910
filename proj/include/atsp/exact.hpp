#pragma once

#include <optional>
#include <queue>
#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/instance.hpp"
#include "atsp/restriction.hpp"
#include "atsp/tour.hpp"

namespace atsp {

// Size guards for the exponential oracles.
struct ExactLimits {
  int brute_force_max_n = 10;
  int held_karp_max_n = 22;
  long kbest_max_count = 20'000'000;
};

inline const ExactLimits kExactLimits{};

struct MatchingOptimum {
  double cost = 0.0;
  std::vector<int> assignment;
};

// Exhaustive minimum over permutations feasible for F.
MatchingOptimum brute_force_ap(const CostMatrix& costs, const Restriction& restriction,
                               const ExactLimits& limits = kExactLimits);

// Exhaustive minimum over cyclic permutations.
Tour brute_force_atsp(const CostMatrix& costs, const ExactLimits& limits = kExactLimits);

// Subset dynamic programme over (visited set, last vertex), start fixed at 0.
Tour held_karp(const CostMatrix& costs, const ExactLimits& limits = kExactLimits);

// Every feasible perfect matching as a cost-sorted list. Exhaustive.
std::vector<MatchingOptimum> enumerate_matchings(const CostMatrix& costs,
                                                 const Restriction& restriction,
                                                 const ExactLimits& limits = kExactLimits);

// Matchings of AP(F) in nondecreasing cost order by Murty partitioning.
// Each emitted matching's subproblem is split along its free edges in row
// order: child t forces the first t-1 of them in and the t-th out. Forcing
// here is plain matching semantics (no cycle-closure exclusions).
//
// The stream keeps a pointer to `costs`, which must outlive it.
class KBestStream {
 public:
  KBestStream(const CostMatrix& costs, const Restriction& restriction, double cost_limit,
              long count_limit);
  KBestStream(const CostMatrix&& costs, const Restriction& restriction, double cost_limit,
              long count_limit) = delete;

  // Next matching with cost <= cost_limit, or nullopt once either limit binds
  // or the feasible set is exhausted.
  std::optional<MatchingOptimum> next();
  long emitted() const { return emitted_; }
  long solves() const { return solves_; }

 private:
  struct Node {
    double cost;
    long seq;
    MatchingConstraints constraints;
    ApSolution solution;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      return a.cost != b.cost ? a.cost > b.cost : a.seq > b.seq;
    }
  };

  void push(MatchingConstraints constraints, const WarmStart* warm);

  const CostMatrix* costs_;
  double cost_limit_;
  long count_limit_;
  long emitted_ = 0;
  long solves_ = 0;
  long seq_ = 0;
  std::priority_queue<Node, std::vector<Node>, Later> frontier_;
};

KBestStream kbest_matchings(const CostMatrix& costs, const Restriction& restriction,
                            double cost_limit, long count_limit);
KBestStream kbest_matchings(const CostMatrix&& costs, const Restriction& restriction,
                            double cost_limit, long count_limit) = delete;

// Number of perfect matchings of AP(F) with cost strictly below `threshold`.
long count_matchings_below(const CostMatrix& costs, double threshold,
                           const ExactLimits& limits = kExactLimits);
long count_matchings_below(const CostMatrix& costs, const Restriction& restriction,
                           double threshold, const ExactLimits& limits = kExactLimits);

}  // namespace atsp
