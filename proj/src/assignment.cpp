#include "atsp/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "atsp/error.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Warm-started solutions that drift further than this from complementary
// slackness are recomputed from scratch.
constexpr double kWarmRecheckTolerance = 1e-7;

// Shortest-augmenting-path solver over the free rows and columns of a
// MatchingConstraints. Potentials stay dual feasible and matched edges stay
// tight after every augmentation.
class AugmentingSolver {
 public:
  AugmentingSolver(const CostMatrix& costs, const MatchingConstraints& constraints)
      : costs_(costs.dense()),
        constraints_(constraints),
        rows_(constraints.free_rows()),
        cols_(constraints.free_cols()),
        m_(static_cast<int>(rows_.size())),
        u_(Eigen::VectorXd::Zero(m_)),
        v_(Eigen::VectorXd::Zero(m_)),
        row_match_(m_, -1),
        col_match_(m_, -1) {
    if (rows_.size() != cols_.size()) {
      throw InvalidInput("free rows and columns differ in number");
    }
    allowed_.resize(m_, m_);
    for (int r = 0; r < m_; ++r) {
      for (int k = 0; k < m_; ++k) allowed_(r, k) = constraints.allowed(rows_[r], cols_[k]);
    }
  }

  void warm_start(const WarmStart& warm) {
    std::vector<int> local_col(constraints_.n(), -1);
    for (int k = 0; k < m_; ++k) local_col[cols_[k]] = k;
    for (int r = 0; r < m_; ++r) {
      u_(r) = warm.u(rows_[r]);
    }
    for (int k = 0; k < m_; ++k) v_(k) = warm.v(cols_[k]);
    for (int r = 0; r < m_; ++r) {
      const int j = warm.assignment[rows_[r]];
      const int k = j >= 0 ? local_col[j] : -1;
      if (k < 0 || !allowed_(r, k) || col_match_[k] != -1) continue;
      if (std::abs(reduced(r, k)) > kTightTolerance) continue;
      row_match_[r] = k;
      col_match_[k] = r;
    }
    // Duals must be feasible on the (smaller) allowed set; repair otherwise.
    for (int r = 0; r < m_; ++r) {
      for (int k = 0; k < m_; ++k) {
        if (allowed_(r, k) && reduced(r, k) < -kTightTolerance) {
          reset();
          return;
        }
      }
    }
  }

  void run() {
    for (int r = 0; r < m_; ++r) {
      if (row_match_[r] == -1) augment(r);
    }
  }

  const std::vector<int>& rows() const { return rows_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<int>& row_match() const { return row_match_; }
  const Eigen::VectorXd& u() const { return u_; }
  const Eigen::VectorXd& v() const { return v_; }

 private:
  double reduced(int r, int k) const { return costs_(rows_[r], cols_[k]) - u_(r) - v_(k); }

  void reset() {
    u_.setZero();
    v_.setZero();
    std::fill(row_match_.begin(), row_match_.end(), -1);
    std::fill(col_match_.begin(), col_match_.end(), -1);
  }

  void augment(int root) {
    std::vector<double> dist(m_, kInf);
    std::vector<int> pred(m_, -1);
    std::vector<char> done(m_, 0);
    std::vector<int> done_order;
    int row = root;
    double row_dist = 0.0;
    int sink = -1;
    while (sink == -1) {
      for (int k = 0; k < m_; ++k) {
        if (done[k] || !allowed_(row, k)) continue;
        const double candidate = row_dist + reduced(row, k);
        if (candidate < dist[k]) {
          dist[k] = candidate;
          pred[k] = row;
        }
      }
      int best = -1;
      for (int k = 0; k < m_; ++k) {
        if (!done[k] && (best == -1 || dist[k] < dist[best])) best = k;
      }
      if (best == -1 || dist[best] == kInf) {
        std::vector<int> witness{rows_[root]};
        for (int k : done_order) witness.push_back(rows_[col_match_[k]]);
        std::sort(witness.begin(), witness.end());
        throw Infeasible("no perfect matching respects the restriction (Hall violator of " +
                             std::to_string(witness.size()) + " rows)",
                         std::move(witness));
      }
      done[best] = 1;
      done_order.push_back(best);
      if (col_match_[best] == -1) {
        sink = best;
      } else {
        row = col_match_[best];
        row_dist = dist[best];
      }
    }

    const double total = dist[sink];
    u_(root) += total;
    for (int k : done_order) {
      if (k == sink) continue;
      const double shift = total - dist[k];
      u_(col_match_[k]) += shift;
      v_(k) -= shift;
    }

    for (int k = sink;;) {
      const int r = pred[k];
      const int previous = row_match_[r];
      row_match_[r] = k;
      col_match_[k] = r;
      if (r == root) break;
      k = previous;
    }
  }

  const Eigen::MatrixXd& costs_;
  const MatchingConstraints& constraints_;
  std::vector<int> rows_;
  std::vector<int> cols_;
  int m_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> allowed_;
  Eigen::VectorXd u_;
  Eigen::VectorXd v_;
  std::vector<int> row_match_;
  std::vector<int> col_match_;
};

// Moves the duals to a vertex of the dual polyhedron: grows the tight
// component of the smallest free row and, while it is not spanning, shifts
// every outside vertex by the smallest reduced cost of a crossing edge. The
// objective is unchanged because the outside set holds matched pairs only.
void make_basic(const CostMatrix& costs, ApSolution& sol) {
  const auto& cons = *sol.constraints;
  const int n = sol.n();
  const auto rows = cons.free_rows();
  const auto cols = cons.free_cols();
  if (rows.empty()) return;
  const auto& c = costs.dense();
  auto tight = [&](int i, int j) {
    return sol.assignment[i] == j || std::abs(c(i, j) - sol.u(i) - sol.v(j)) <= kTightTolerance;
  };

  std::vector<char> row_in(n, 0);
  std::vector<char> col_in(n, 0);
  std::vector<int> queue;  // rows as i, columns as n + j
  auto push = [&](int vertex) {
    auto& flag = vertex < n ? row_in[vertex] : col_in[vertex - n];
    if (!flag) {
      flag = 1;
      queue.push_back(vertex);
    }
  };
  push(rows.front());

  const std::size_t target = rows.size() + cols.size();
  std::size_t head = 0;
  while (true) {
    for (; head < queue.size(); ++head) {
      const int vertex = queue[head];
      if (vertex < n) {
        for (int j : cols) {
          if (!col_in[j] && cons.allowed(vertex, j) && tight(vertex, j)) push(n + j);
        }
      } else {
        const int j = vertex - n;
        for (int i : rows) {
          if (!row_in[i] && cons.allowed(i, j) && tight(i, j)) push(i);
        }
      }
    }
    if (queue.size() == target) return;

    double into = kInf;    // outside row -> inside column
    double out_of = kInf;  // inside row -> outside column
    for (int i : rows) {
      for (int j : cols) {
        if (!cons.allowed(i, j) || row_in[i] == col_in[j]) continue;
        const double rc = c(i, j) - sol.u(i) - sol.v(j);
        if (col_in[j]) {
          into = std::min(into, rc);
        } else {
          out_of = std::min(out_of, rc);
        }
      }
    }
    if (into == kInf && out_of == kInf) return;  // admissible graph itself is disconnected
    const double lambda = into <= out_of ? std::max(into, 0.0) : -std::max(out_of, 0.0);
    for (int i : rows) {
      if (!row_in[i]) sol.u(i) += lambda;
    }
    for (int j : cols) {
      if (!col_in[j]) sol.v(j) -= lambda;
    }
    // Rescan every inside vertex for the edge that just became tight.
    head = 0;
  }
}

void normalize(ApSolution& sol) {
  if (sol.imin < 0) return;
  const double lambda = sol.u(sol.imin);
  sol = shift_duals(sol, lambda);
}

ApSolution assemble(const CostMatrix& costs, const AugmentingSolver& solver,
                    std::shared_ptr<const MatchingConstraints> constraints) {
  const int n = costs.n();
  ApSolution sol;
  sol.assignment.assign(n, -1);
  sol.u = Eigen::VectorXd::Zero(n);
  sol.v = Eigen::VectorXd::Zero(n);
  for (const Edge& e : constraints->forced()) sol.assignment[e.tail] = e.head;
  const auto& rows = solver.rows();
  const auto& cols = solver.cols();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sol.assignment[rows[r]] = cols[solver.row_match()[r]];
    sol.u(rows[r]) = solver.u()(static_cast<Eigen::Index>(r));
  }
  for (std::size_t k = 0; k < cols.size(); ++k) sol.v(cols[k]) = solver.v()(static_cast<Eigen::Index>(k));
  sol.n_free = static_cast<int>(rows.size());
  sol.m_free = constraints->count_allowed();
  sol.imin = rows.empty() ? -1 : rows.front();
  sol.value = assignment_cost(costs, sol.assignment);
  sol.constraints = std::move(constraints);
  return sol;
}

}  // namespace

std::vector<int> ApSolution::inverse() const {
  std::vector<int> inv(assignment.size(), -1);
  for (std::size_t i = 0; i < assignment.size(); ++i) inv[assignment[i]] = static_cast<int>(i);
  return inv;
}

double assignment_cost(const CostMatrix& costs, const std::vector<int>& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    total += costs.dense()(static_cast<Eigen::Index>(i), assignment[i]);
  }
  return total;
}

ApSolution solve_ap(const CostMatrix& costs, const Restriction& restriction, const WarmStart* warm) {
  if (restriction.n() != costs.n()) throw InvalidInput("restriction size does not match matrix");
  return solve_ap(costs, MatchingConstraints(restriction), warm);
}

ApSolution solve_ap(const CostMatrix& costs, const MatchingConstraints& constraints,
                    const WarmStart* warm) {
  if (constraints.n() != costs.n()) throw InvalidInput("constraint size does not match matrix");
  auto shared = std::make_shared<const MatchingConstraints>(constraints);

  auto attempt = [&](const WarmStart* start) {
    AugmentingSolver solver(costs, *shared);
    if (start) solver.warm_start(*start);
    solver.run();
    ApSolution sol = assemble(costs, solver, shared);
    make_basic(costs, sol);
    normalize(sol);
    return sol;
  };

  ApSolution sol = attempt(warm);
  if (warm && !check_solution(costs, sol).ok(kWarmRecheckTolerance)) sol = attempt(nullptr);
  return sol;
}

WarmStart warm_start_from(const ApSolution& solution) {
  return WarmStart{solution.u, solution.v, solution.assignment};
}

Eigen::MatrixXd reduced_costs(const CostMatrix& costs, const ApSolution& solution) {
  const Eigen::Index n = costs.n();
  return costs.dense() - solution.u * Eigen::RowVectorXd::Ones(n) -
         Eigen::VectorXd::Ones(n) * solution.v.transpose();
}

SolutionCheck check_solution(const CostMatrix& costs, const ApSolution& solution) {
  const auto& cons = *solution.constraints;
  SolutionCheck check;
  check.feasible = cons.admits(solution.assignment);
  check.min_reduced_cost = kInf;
  double dual_sum = 0.0;
  double forced_cost = 0.0;
  for (const Edge& e : cons.forced()) forced_cost += costs(e);
  for (int i = 0; i < cons.n(); ++i) {
    if (cons.row_free(i)) dual_sum += solution.u(i);
    if (cons.col_free(i)) dual_sum += solution.v(i);
    for (int j = 0; j < cons.n(); ++j) {
      if (!cons.allowed(i, j)) continue;
      const double rc = solution.reduced_cost(costs, i, j);
      check.min_reduced_cost = std::min(check.min_reduced_cost, rc);
      if (solution.assignment[i] == j) {
        check.max_matching_reduced = std::max(check.max_matching_reduced, std::abs(rc));
      }
    }
  }
  if (check.min_reduced_cost == kInf) check.min_reduced_cost = 0.0;
  check.duality_gap = solution.value - (dual_sum + forced_cost);
  return check;
}

ApSolution shift_duals(const ApSolution& solution, double lambda) {
  ApSolution out = solution;
  const auto& cons = *solution.constraints;
  for (int i = 0; i < cons.n(); ++i) {
    if (cons.row_free(i)) out.u(i) -= lambda;
    if (cons.col_free(i)) out.v(i) += lambda;
  }
  return out;
}

AnalysisParams AnalysisParams::make(int n, double epsilon) {
  if (n < 1) throw InvalidSize("analysis parameters need n >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidRange("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  // Guard ceil() against pow() landing one ulp above an integer.
  auto ceil_pow = [n](double exponent) {
    const double x = std::pow(static_cast<double>(n), exponent);
    return static_cast<int>(std::ceil(x * (1.0 - 1e-12)));
  };
  AnalysisParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.zeta = ceil_pow(epsilon);
  p.gamma = 30.0 * p.zeta / (epsilon * n);
  p.d = ceil_pow(epsilon / 3.0);
  p.gap_threshold = std::pow(static_cast<double>(n), -1.5);
  p.alt_threshold = std::pow(static_cast<double>(n), -1.5 - 2.0 * epsilon);
  p.xi = epsilon / 3.0;
  return p;
}

AnalysisParams AnalysisParams::with_d(int branching) const {
  if (branching < 1) throw InvalidRange("d must be >= 1");
  AnalysisParams p = *this;
  p.d = branching;
  return p;
}

}  // namespace atsp
