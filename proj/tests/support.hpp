#pragma once

// Shared generators and brute-force oracles for the test binaries. The
// oracles deliberately avoid the library's own search code: they walk raw
// permutations with std::next_permutation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "atsp/instance.hpp"
#include "atsp/restriction.hpp"

namespace testing {

using atsp::CostMatrix;
using atsp::Edge;
using atsp::EdgeSet;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// The 3x3 example instance, 0-based: optimum 0->1->2->0 at 0.6, the other
// derangement at 2.1.
inline CostMatrix small3() {
  Eigen::MatrixXd c(3, 3);
  c << 0, 0.2, 0.7,
       0.5, 0, 0.1,
       0.3, 0.9, 0;
  return CostMatrix::from_dense(c);
}

inline double perm_cost(const CostMatrix& c, const std::vector<int>& p) {
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) s += c.dense()(i, p[i]);
  return s;
}

// Visits every permutation of [n] with no fixed point.
inline void for_each_derangement(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = p[i] != i;
    if (ok) f(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

inline bool one_cycle(const std::vector<int>& p) {
  int v = 0;
  int len = 0;
  do {
    v = p[v];
    ++len;
  } while (v != 0 && len <= static_cast<int>(p.size()));
  return len == static_cast<int>(p.size());
}

// Feasibility straight from the definitions: contains F1, avoids F0 and the
// inadmissible set.
inline bool respects(const atsp::Restriction& r, const std::vector<int>& p) {
  for (const Edge& e : r.forced_in()) {
    if (p[e.tail] != e.head) return false;
  }
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    const Edge e{i, p[i]};
    if (r.forced_out().contains(e) || r.inadmissible().contains(e)) return false;
  }
  return true;
}

inline std::optional<double> oracle_ap(const CostMatrix& c, const atsp::Restriction& r) {
  std::optional<double> best;
  for_each_derangement(c.n(), [&](const std::vector<int>& p) {
    if (!respects(r, p)) return;
    const double v = perm_cost(c, p);
    if (!best || v < *best) best = v;
  });
  return best;
}

inline double oracle_atsp(const CostMatrix& c) {
  double best = kInf;
  for_each_derangement(c.n(), [&](const std::vector<int>& p) {
    if (one_cycle(p)) best = std::min(best, perm_cost(c, p));
  });
  return best;
}

inline std::vector<double> oracle_matching_costs(const CostMatrix& c) {
  std::vector<double> out;
  for_each_derangement(c.n(), [&](const std::vector<int>& p) { out.push_back(perm_cost(c, p)); });
  std::sort(out.begin(), out.end());
  return out;
}

// Random restriction with |F1| <= max_in and |F0| <= max_out that still
// admits at least one perfect matching. F1 is grown along random admissible
// edges so it stays a union of short paths.
inline atsp::Restriction random_restriction(int n, atsp::SplitMix64& rng, int max_in, int max_out) {
  while (true) {
    EdgeSet in;
    const int k_in = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_in + 1)));
    for (int t = 0; t < k_in; ++t) {
      const atsp::Restriction current(n, in, {});
      std::vector<Edge> candidates;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j && current.admissible({i, j})) candidates.push_back({i, j});
        }
      }
      if (candidates.empty()) break;
      in.insert(candidates[rng.next_below(candidates.size())]);
    }
    EdgeSet out;
    const int k_out = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_out + 1)));
    while (static_cast<int>(out.size()) < k_out) {
      const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      if (i != j && !in.contains({i, j})) out.insert({i, j});
    }
    atsp::Restriction r(n, in, out);
    bool feasible = false;
    for_each_derangement(n, [&](const std::vector<int>& p) { feasible = feasible || respects(r, p); });
    if (feasible) return r;
  }
}

inline bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace testing
