#pragma once

#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/instance.hpp"
#include "atsp/restriction.hpp"

namespace atsp {

// Alternating digraph on A u B: vertex i is row a_i, vertex n + j is column
// b_j. Backward arcs b_{pi(x)} -> a_x reverse the matching; forward arcs
// a_x -> b_y join x to its zeta cheapest usable out-neighbours and y to its
// zeta cheapest usable in-neighbours, minus F0, F1 and F0hat.
struct NeighborDigraph {
  int n = 0;
  int zeta = 0;
  std::vector<std::vector<int>> forward;  // forward[x] = sorted heads y (column indices)
  std::vector<int> matching;              // backward arc b_{matching[x]} -> a_x

  int vertex_count() const { return 2 * n; }
  std::size_t forward_edge_count() const;
};

NeighborDigraph build_neighbor_digraph(const CostMatrix& costs, const Restriction& restriction,
                                       const ApSolution& solution, int zeta);

enum class DiameterMode { kUnweighted, kWeighted };

struct DiameterOptions {
  DiameterMode mode = DiameterMode::kUnweighted;
  // Weighted mode only: charge backward (matching) arcs their cost instead of 0.
  bool charge_matching_arcs = false;
};

// max over pairs (a_i, b_j), i != j, of the shortest a_i -> b_j path length;
// +inf if some pair is unreachable. Diagonal pairs are skipped since (a_i, b_i)
// is never an edge.
double ab_diameter(const NeighborDigraph& g, const CostMatrix& costs,
                   const DiameterOptions& options = {});

// Shortest path from a_source to b_target as a vertex sequence (empty if
// unreachable). Vertex numbering as in NeighborDigraph.
std::vector<int> shortest_path(const NeighborDigraph& g, const CostMatrix& costs, int source,
                               int target, const DiameterOptions& options = {});

// For every pair, the weighted distance is at most
// (arcs on an unweighted shortest path) x (max forward cost on that path).
bool weighted_within_hop_bound(const NeighborDigraph& g, const CostMatrix& costs);

double max_dual_magnitude(const ApSolution& solution);

// Largest C over matching edges of free rows (F1 edges excluded).
double max_matching_edge_cost(const ApSolution& solution, const CostMatrix& costs);

struct ContractedDegrees {
  std::vector<int> out_degree;  // indexed by vertex; contracted rows report 0
  int vertex_count = 0;         // free rows contracted
  int edge_count = 0;           // non-matching tree edges
  int leaf_count = 0;           // vertices of total degree 1
  double leaf_fraction() const {
    return vertex_count > 0 ? static_cast<double>(leaf_count) / vertex_count : 0.0;
  }
};

// Contracts each matching edge (i, pi(i)) of the tree to vertex i; every
// other tree edge (i1, pi(i2)) becomes i1 -> i2. Throws InvalidInput if the
// tree misses a matching edge or is not a spanning tree.
ContractedDegrees contract_and_degrees(const BasisTree& tree, const ApSolution& solution);

}  // namespace atsp
