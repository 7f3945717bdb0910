#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <set>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

using EdgeSet = std::set<Edge>;

// Edges made unusable by a forced-in set F1 on n vertices: edges leaving an
// F1 tail or entering an F1 head (other than the F1 edge itself), plus the
// closing edge of every F1 path that would form a cycle shorter than n.
// Throws InconsistentRestriction when F1 has a vertex of in- or out-degree
// above one, a cycle shorter than n, a diagonal edge, or an index out of range.
EdgeSet derive_inadmissible(const EdgeSet& forced_in, int n);

// A branch-and-bound node label (F0, F1, F0hat). F0hat is derived from F1;
// edges already listed in F0 are not repeated in it, so the three sets are
// pairwise disjoint and F0 u F0hat = F0 u derive_inadmissible(F1, n).
class Restriction {
 public:
  enum class Status : std::uint8_t { kFree, kForcedIn, kForcedOut, kInadmissible, kDiagonal };

  explicit Restriction(int n);
  Restriction(int n, EdgeSet forced_in, EdgeSet forced_out);

  int n() const { return n_; }
  const EdgeSet& forced_in() const { return forced_in_; }
  const EdgeSet& forced_out() const { return forced_out_; }
  const EdgeSet& inadmissible() const { return inadmissible_; }

  Status status(Edge e) const { return static_cast<Status>(status_(e.tail, e.head)); }
  // e may still be added to F1: not in D, F0, F1 or F0hat.
  bool admissible(Edge e) const { return status(e) == Status::kFree; }
  // e is an edge of K_{A,B:F}: not in D, F0 or F0hat.
  bool usable(Edge e) const {
    const auto s = status(e);
    return s == Status::kFree || s == Status::kForcedIn;
  }

  // |F1| <= n^{3 eps / 8} and |F0| <= n^{3 eps / 4}.
  bool within_size_condition(double epsilon) const;

  Restriction with_forced_in(Edge e) const;
  Restriction with_forced_out(Edge e) const;

 private:
  int n_;
  EdgeSet forced_in_;
  EdgeSet forced_out_;
  EdgeSet inadmissible_;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> status_;
};

// Plain perfect-matching constraints: contracted (forced) pairs plus an
// allowed-edge mask over the remaining rows and columns. Unlike Restriction,
// forcing an edge here does not add cycle-closure exclusions; this is what
// K-best enumeration partitions on.
class MatchingConstraints {
 public:
  explicit MatchingConstraints(const Restriction& restriction);

  int n() const { return n_; }
  bool row_free(int i) const { return row_free_[i] != 0; }
  bool col_free(int j) const { return col_free_[j] != 0; }
  bool allowed(int i, int j) const { return row_free_[i] && col_free_[j] && mask_(i, j); }
  const std::vector<Edge>& forced() const { return forced_; }

  // Throws InvalidEdge if e is not currently allowed.
  void force(Edge e);
  void forbid(Edge e);

  std::vector<int> free_rows() const;
  std::vector<int> free_cols() const;
  long count_allowed() const;

  // Permutation feasibility: contains every forced pair and otherwise uses
  // allowed pairs only.
  bool admits(const std::vector<int>& assignment) const;

 private:
  int n_;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> mask_;
  std::vector<std::uint8_t> row_free_;
  std::vector<std::uint8_t> col_free_;
  std::vector<Edge> forced_;
};

}  // namespace atsp
