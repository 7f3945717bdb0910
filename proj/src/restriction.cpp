#include "atsp/restriction.hpp"

#include <cmath>
#include <string>

#include "atsp/error.hpp"

namespace atsp {

namespace {

std::string edge_text(Edge e) {
  return "(" + std::to_string(e.tail) + "," + std::to_string(e.head) + ")";
}

void check_edge(Edge e, int n, const char* set_name) {
  if (e.tail < 0 || e.head < 0 || e.tail >= n || e.head >= n) {
    throw InconsistentRestriction(std::string(set_name) + " edge " + edge_text(e) + " out of range");
  }
  if (e.tail == e.head) {
    throw InconsistentRestriction(std::string(set_name) + " contains diagonal edge " + edge_text(e));
  }
}

}  // namespace

EdgeSet derive_inadmissible(const EdgeSet& forced_in, int n) {
  std::vector<int> next(n, -1);
  std::vector<int> prev(n, -1);
  for (const Edge& e : forced_in) {
    check_edge(e, n, "F1");
    if (next[e.tail] != -1) {
      throw InconsistentRestriction("F1 has out-degree 2 at vertex " + std::to_string(e.tail));
    }
    if (prev[e.head] != -1) {
      throw InconsistentRestriction("F1 has in-degree 2 at vertex " + std::to_string(e.head));
    }
    next[e.tail] = e.head;
    prev[e.head] = e.tail;
  }

  EdgeSet out;
  for (const Edge& e : forced_in) {
    for (int k = 0; k < n; ++k) {
      if (k != e.tail && k != e.head) {
        out.insert({e.tail, k});
        out.insert({k, e.head});
      }
    }
  }

  // Each F1 component is a path or a Hamilton cycle. A path s -> ... -> t on
  // k < n vertices makes (t, s) close a short cycle.
  std::vector<char> seen(n, 0);
  for (int v = 0; v < n; ++v) {
    if (seen[v] || next[v] == -1) continue;
    int start = v;
    int steps = 0;
    while (prev[start] != -1 && prev[start] != v && steps++ < n) start = prev[start];
    int end = start;
    int count = 1;
    seen[start] = 1;
    while (next[end] != -1 && next[end] != start) {
      end = next[end];
      seen[end] = 1;
      ++count;
    }
    const bool closed = next[end] == start;
    if (closed && count < n) {
      throw InconsistentRestriction("F1 contains a cycle of length " + std::to_string(count) +
                                    " < n = " + std::to_string(n));
    }
    if (!closed && count < n) out.insert({end, start});
  }
  return out;
}

Restriction::Restriction(int n) : Restriction(n, {}, {}) {}

Restriction::Restriction(int n, EdgeSet forced_in, EdgeSet forced_out)
    : n_(n), forced_in_(std::move(forced_in)), forced_out_(std::move(forced_out)) {
  if (n < 1) throw InvalidSize("restriction needs n >= 1");
  for (const Edge& e : forced_out_) {
    check_edge(e, n, "F0");
    if (forced_in_.contains(e)) {
      throw InconsistentRestriction("edge " + edge_text(e) + " is in both F1 and F0");
    }
  }
  for (const Edge& e : derive_inadmissible(forced_in_, n)) {
    if (!forced_out_.contains(e)) inadmissible_.insert(e);
  }

  status_.setConstant(n, n, static_cast<std::uint8_t>(Status::kFree));
  for (int i = 0; i < n; ++i) status_(i, i) = static_cast<std::uint8_t>(Status::kDiagonal);
  for (const Edge& e : forced_in_) status_(e.tail, e.head) = static_cast<std::uint8_t>(Status::kForcedIn);
  for (const Edge& e : forced_out_) status_(e.tail, e.head) = static_cast<std::uint8_t>(Status::kForcedOut);
  for (const Edge& e : inadmissible_) {
    status_(e.tail, e.head) = static_cast<std::uint8_t>(Status::kInadmissible);
  }
}

bool Restriction::within_size_condition(double epsilon) const {
  const double n = static_cast<double>(n_);
  return static_cast<double>(forced_in_.size()) <= std::pow(n, 3.0 * epsilon / 8.0) &&
         static_cast<double>(forced_out_.size()) <= std::pow(n, 3.0 * epsilon / 4.0);
}

Restriction Restriction::with_forced_in(Edge e) const {
  if (!admissible(e)) {
    throw InconsistentRestriction("edge " + edge_text(e) + " is not admissible");
  }
  EdgeSet in = forced_in_;
  in.insert(e);
  return Restriction(n_, std::move(in), forced_out_);
}

Restriction Restriction::with_forced_out(Edge e) const {
  EdgeSet out = forced_out_;
  out.insert(e);
  return Restriction(n_, forced_in_, std::move(out));
}

MatchingConstraints::MatchingConstraints(const Restriction& restriction)
    : n_(restriction.n()), row_free_(n_, 1), col_free_(n_, 1) {
  mask_.setZero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      mask_(i, j) = restriction.status({i, j}) == Restriction::Status::kFree ? 1 : 0;
    }
  }
  for (const Edge& e : restriction.forced_in()) {
    row_free_[e.tail] = 0;
    col_free_[e.head] = 0;
    forced_.push_back(e);
  }
}

void MatchingConstraints::force(Edge e) {
  if (!allowed(e.tail, e.head)) {
    throw InvalidEdge("cannot force edge " + edge_text(e) + ": not allowed");
  }
  row_free_[e.tail] = 0;
  col_free_[e.head] = 0;
  forced_.push_back(e);
}

void MatchingConstraints::forbid(Edge e) { mask_(e.tail, e.head) = 0; }

std::vector<int> MatchingConstraints::free_rows() const {
  std::vector<int> rows;
  for (int i = 0; i < n_; ++i) {
    if (row_free_[i]) rows.push_back(i);
  }
  return rows;
}

std::vector<int> MatchingConstraints::free_cols() const {
  std::vector<int> cols;
  for (int j = 0; j < n_; ++j) {
    if (col_free_[j]) cols.push_back(j);
  }
  return cols;
}

long MatchingConstraints::count_allowed() const {
  long count = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) count += allowed(i, j) ? 1 : 0;
  }
  return count;
}

bool MatchingConstraints::admits(const std::vector<int>& assignment) const {
  if (static_cast<int>(assignment.size()) != n_) return false;
  std::vector<char> used(n_, 0);
  for (int i = 0; i < n_; ++i) {
    const int j = assignment[i];
    if (j < 0 || j >= n_ || used[j]) return false;
    used[j] = 1;
  }
  std::vector<int> forced_col(n_, -1);
  for (const Edge& e : forced_) forced_col[e.tail] = e.head;
  for (int i = 0; i < n_; ++i) {
    if (forced_col[i] != -1) {
      if (assignment[i] != forced_col[i]) return false;
    } else if (!allowed(i, assignment[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace atsp
