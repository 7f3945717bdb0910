#pragma once

#include <string>
#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/instance.hpp"

namespace atsp {

// Hamilton cycle as a visiting order starting at vertex 0.
struct Tour {
  std::vector<int> order;
  double cost = 0.0;

  // successor()[v] is the vertex after v.
  std::vector<int> successor() const;
};

// Builds a tour from a successor permutation that is a single n-cycle.
// Throws InvalidInput otherwise.
Tour tour_from_successor(const CostMatrix& costs, const std::vector<int>& successor);

bool validate_tour(const Tour& tour, int n);
// True iff `successor` is a permutation forming one n-cycle without fixed points.
bool is_single_cycle(const std::vector<int>& successor);

// Cycle decomposition of a permutation; each cycle starts at its smallest
// vertex and cycles are ordered by that vertex.
struct CycleCover {
  std::vector<std::vector<int>> cycles;

  int cycle_count() const { return static_cast<int>(cycles.size()); }
  // lengths()[k] = number of cycles of length k (k_i in the gap analysis).
  std::vector<int> length_counts() const;
  std::vector<int> lengths() const;
};

CycleCover cycle_cover(const std::vector<int>& assignment);
CycleCover cycle_cover(const ApSolution& solution);

enum class PatchOrder { kTwoLargest };

// Repeatedly merges the two largest cycles by the cheapest crosswise
// exchange of one edge from each, until a single cycle remains. Ties by
// (length desc, smallest vertex) for cycles and lexicographic for edges.
Tour karp_patch(const CostMatrix& costs, const ApSolution& solution,
                PatchOrder order = PatchOrder::kTwoLargest);
Tour karp_patch(const CostMatrix& costs, const std::vector<int>& assignment,
                PatchOrder order = PatchOrder::kTwoLargest);

std::string to_string(PatchOrder order);

struct Substitution {
  double delta = 0.0;  // tour cost - Z_AP
  Tour tour;
};

// Deletes the matching edges `removed` (one or more per cycle), which splits
// the cover into paths P_t starting at removed[t].head, and closes each path
// P_t into P_{next[t]}. `next` must be a single cyclic permutation of the path
// indices. Throws InvalidSubstitution when an edge is not a matching edge, a
// cycle is missed, or the result is not a tour.
Substitution k_substitution(const CostMatrix& costs, const ApSolution& solution,
                            const std::vector<Edge>& removed, const std::vector<int>& next);

// Minimum of the substitution delta over every removal set and path order.
// Exhaustive; guarded to n <= kMaxExhaustiveSubstitution.
inline constexpr int kMaxExhaustiveSubstitution = 8;
Substitution min_k_substitution(const CostMatrix& costs, const ApSolution& solution);

}  // namespace atsp
