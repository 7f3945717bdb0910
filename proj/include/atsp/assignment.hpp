#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

#include "atsp/instance.hpp"
#include "atsp/restriction.hpp"

namespace atsp {

// Reduced costs within this absolute distance of zero count as tight.
inline constexpr double kTightTolerance = 1e-9;

// Optimal solution of AP(F) together with a basic optimal dual solution.
//
// `assignment[i]` is the column matched to row i, forced pairs included.
// Duals live on the free rows A_F and free columns B_F; entries for
// contracted rows and columns are zero and excluded from every statistic.
// The duals come from a spanning tree of tight edges (an LP basis) whenever
// the admissible graph allows one, and are normalised so that u at the
// smallest free row is zero.
struct ApSolution {
  std::vector<int> assignment;
  double value = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  int n_free = 0;
  long m_free = 0;
  int imin = -1;
  std::shared_ptr<const MatchingConstraints> constraints;

  int n() const { return static_cast<int>(assignment.size()); }
  bool row_free(int i) const { return constraints->row_free(i); }
  bool col_free(int j) const { return constraints->col_free(j); }
  bool contains(Edge e) const { return assignment[e.tail] == e.head; }
  std::vector<int> inverse() const;
  double reduced_cost(const CostMatrix& costs, int i, int j) const {
    return costs.dense()(i, j) - u(i) - v(j);
  }
};

// Sum of C(i, assignment[i]) over rows in index order. Every cost the library
// reports for a permutation goes through this so equal permutations always
// compare equal.
double assignment_cost(const CostMatrix& costs, const std::vector<int>& assignment);

struct WarmStart {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::vector<int> assignment;
};

// Minimum-cost perfect matching for AP(F) by successive shortest augmenting
// paths with dual maintenance. F1 pairs are contracted out; F0 and F0hat
// are membership filters. Throws Infeasible with a Hall-violator row set.
ApSolution solve_ap(const CostMatrix& costs, const Restriction& restriction,
                    const WarmStart* warm = nullptr);
ApSolution solve_ap(const CostMatrix& costs, const MatchingConstraints& constraints,
                    const WarmStart* warm = nullptr);

WarmStart warm_start_from(const ApSolution& solution);

// Dense C - u 1^T - 1 v^T; +inf on the diagonal.
Eigen::MatrixXd reduced_costs(const CostMatrix& costs, const ApSolution& solution);

struct SolutionCheck {
  bool feasible = false;                // permutation respects the constraints
  double min_reduced_cost = 0.0;        // over allowed free pairs
  double max_matching_reduced = 0.0;    // max |C-bar| over free matching edges
  double duality_gap = 0.0;             // value - (sum u + sum v + cost(F1))
  bool ok(double tol = kTightTolerance) const {
    return feasible && min_reduced_cost >= -tol && max_matching_reduced <= tol &&
           std::abs(duality_gap) <= tol;
  }
};

SolutionCheck check_solution(const CostMatrix& costs, const ApSolution& solution);

// Shifts free duals by (u - lambda, v + lambda) and returns the new solution.
ApSolution shift_duals(const ApSolution& solution, double lambda);

// Derived constants of the near-optimal-matching analysis for given (n, eps).
struct AnalysisParams {
  int n = 0;
  double epsilon = 0.0;
  int zeta = 0;                // ceil(n^eps)
  double gamma = 0.0;          // 30 zeta / (eps n)
  int d = 0;                   // ceil(n^{eps/3})
  double gap_threshold = 0.0;  // n^{-3/2}
  double alt_threshold = 0.0;  // n^{-3/2 - 2 eps}
  double xi = 0.0;             // eps / 3

  static AnalysisParams make(int n, double epsilon);
  AnalysisParams with_d(int branching) const;
};

struct Insertion {
  double delta = 0.0;           // C(M_e) - Z_AP(F); +inf if no matching contains e
  std::vector<int> matching;    // M_e, empty when delta is infinite
  double cost = 0.0;
};

// Cheapest matching of AP(F) that contains e, as C-bar(e) plus the shortest
// alternating completion in the reduced-cost residual graph.
Insertion insertion_cost(const CostMatrix& costs, const Restriction& restriction,
                         const ApSolution& solution, Edge e);

struct Alternative {
  Edge edge;
  std::vector<int> matching;
  double cost = 0.0;
};

struct AlternativesOptions {
  // Keep a candidate only if its matching stays feasible once its
  // distinguishing edge is forced in (F1 u {e}, with cycle-closure rules).
  bool require_forcing_feasible = false;
};

struct AlternativesResult {
  std::vector<Alternative> items;
  double base_value = 0.0;
  bool shortfall = false;               // fewer than d found
  bool outside_size_condition = false;  // |F1|, |F0| exceed the analysed regime
};

// Up to params.d near-optimal matchings M_i, each within params.alt_threshold
// of Z_AP(F), with distinguishing edges e_i in M_i and in no other M_j.
// Candidates are ranked by (cost increase, edge) and filtered greedily.
AlternativesResult alternatives(const CostMatrix& costs, const Restriction& restriction,
                                const AnalysisParams& params,
                                const AlternativesOptions& options = {});
AlternativesResult alternatives(const CostMatrix& costs, const Restriction& restriction,
                                const ApSolution& solution, const AnalysisParams& params,
                                const AlternativesOptions& options = {});

// Recomputes each C(M_i) and re-checks feasibility, distinctness,
// distinguishing edges and the cost bound.
bool verify_alternatives(const CostMatrix& costs, const Restriction& restriction,
                         const AlternativesResult& result, double alt_threshold);

// Spanning tree over the free vertices (rows 0..n-1, columns as bipartite
// pairs) built from tight edges after the matching edges. `degenerate` is
// set if non-tight edges were needed to connect it.
struct BasisTree {
  std::vector<Edge> edges;  // (row, column) pairs
  int vertex_count = 0;     // 2 n_F
  bool degenerate = false;
  bool spanning = false;
};

BasisTree basis_tree(const CostMatrix& costs, const ApSolution& solution,
                     double tolerance = kTightTolerance);

}  // namespace atsp
