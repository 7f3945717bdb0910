#include <doctest.h>

#include <queue>

#include "atsp/assignment.hpp"
#include "atsp/error.hpp"
#include "atsp/structure.hpp"
#include "support.hpp"

using namespace atsp;

namespace {

struct Setup {
  CostMatrix costs;
  Restriction restriction;
  ApSolution solution;
};

Setup setup(int n, std::uint64_t seed, Restriction r) {
  CostMatrix c = generate_uniform(n, seed);
  ApSolution s = solve_ap(c, r);
  return {std::move(c), std::move(r), std::move(s)};
}

// Plain BFS over an explicit adjacency list: independent hop-count oracle.
double oracle_unweighted_diameter(const NeighborDigraph& g) {
  const int n = g.n;
  std::vector<std::vector<int>> adj(2 * n);
  for (int x = 0; x < n; ++x) {
    for (int y : g.forward[x]) adj[x].push_back(n + y);
    adj[n + g.matching[x]].push_back(x);
  }
  double worst = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(2 * n, -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (j == s) continue;
      if (dist[n + j] < 0) return testing::kInf;
      worst = std::max(worst, static_cast<double>(dist[n + j]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("saturated neighbour digraph has diameter one") {
  for (int n : {3, 6, 11}) {
    const auto s = setup(n, 5, Restriction(n));
    const NeighborDigraph g = build_neighbor_digraph(s.costs, s.restriction, s.solution, n - 1);
    CHECK(g.forward_edge_count() == static_cast<std::size_t>(n * (n - 1)));
    CHECK(ab_diameter(g, s.costs) == 1.0);
  }
}

TEST_CASE("zeta = 1 on the 3x3 example keeps row minima") {
  const CostMatrix c = testing::small3();
  const ApSolution s = solve_ap(c, Restriction(3));
  const NeighborDigraph g = build_neighbor_digraph(c, Restriction(3), s, 1);
  CHECK(g.forward[0] == std::vector<int>{1});
  CHECK(g.forward[1] == std::vector<int>{2});
  CHECK(g.forward[2] == std::vector<int>{0});
  CHECK(g.matching == s.assignment);
  CHECK_THROWS_AS(build_neighbor_digraph(c, Restriction(3), s, 0), InvalidRange);
}

TEST_CASE("excluded edges never appear as forward arcs") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6 + trial % 5;
    const Restriction r = testing::random_restriction(n, rng, 2, 4);
    const auto s = setup(n, 40 + trial, r);
    const NeighborDigraph g = build_neighbor_digraph(s.costs, r, s.solution, 3);
    for (int x = 0; x < n; ++x) {
      for (int y : g.forward[x]) {
        const Edge e{x, y};
        CHECK(x != y);
        CHECK_FALSE(r.forced_out().contains(e));
        CHECK_FALSE(r.forced_in().contains(e));
        CHECK_FALSE(r.inadmissible().contains(e));
      }
    }
  }
}

TEST_CASE("forward arcs come from the zeta cheapest per row or column") {
  const int n = 12;
  const int zeta = 3;
  const auto s = setup(n, 21, Restriction(n));
  const NeighborDigraph g = build_neighbor_digraph(s.costs, s.restriction, s.solution, zeta);
  for (int x = 0; x < n; ++x) {
    for (int y : g.forward[x]) {
      int cheaper_in_row = 0;
      int cheaper_in_col = 0;
      for (int k = 0; k < n; ++k) {
        if (k != x && k != y && s.costs(x, k) < s.costs(x, y)) ++cheaper_in_row;
        if (k != y && k != x && s.costs(k, y) < s.costs(x, y)) ++cheaper_in_col;
      }
      CHECK((cheaper_in_row < zeta || cheaper_in_col < zeta));
    }
    CHECK(g.forward[x].size() >= static_cast<std::size_t>(zeta));
  }
}

TEST_CASE("diameter properties") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const int n = 20 + static_cast<int>(seed);
    const auto s = setup(n, seed, Restriction(n));
    double prev_hops = testing::kInf;
    double prev_weight = testing::kInf;
    for (int zeta = 1; zeta <= 6; ++zeta) {
      const NeighborDigraph g = build_neighbor_digraph(s.costs, s.restriction, s.solution, zeta);
      const double hops = ab_diameter(g, s.costs);
      const double weight = ab_diameter(g, s.costs, {DiameterMode::kWeighted, false});
      CHECK(hops == oracle_unweighted_diameter(g));
      CHECK(hops <= prev_hops);
      CHECK(weight <= prev_weight + 1e-12);
      prev_hops = hops;
      prev_weight = weight;
      if (std::isfinite(hops)) CHECK(static_cast<long>(hops) % 2 == 1);
      CHECK(weighted_within_hop_bound(g, s.costs));
      const double charged = ab_diameter(g, s.costs, {DiameterMode::kWeighted, true});
      CHECK(charged >= weight - 1e-12);
    }
  }
}

TEST_CASE("shortest paths alternate sides") {
  const auto s = setup(15, 3, Restriction(15));
  const NeighborDigraph g = build_neighbor_digraph(s.costs, s.restriction, s.solution, 2);
  for (int a = 0; a < 15; ++a) {
    for (int b = 0; b < 15; ++b) {
      if (a == b) continue;
      const auto path = shortest_path(g, s.costs, a, 15 + b);
      if (path.empty()) continue;
      CHECK(path.front() == a);
      CHECK(path.back() == 15 + b);
      for (std::size_t k = 0; k < path.size(); ++k) CHECK((path[k] < 15) == (k % 2 == 0));
    }
  }
}

TEST_CASE("dual and matching-edge magnitudes") {
  const CostMatrix flat = CostMatrix::constant(7, 0.35);
  const ApSolution fs = solve_ap(flat, Restriction(7));
  CHECK(max_dual_magnitude(fs) == doctest::Approx(0.35));
  CHECK(max_matching_edge_cost(fs, flat) == 0.35);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = setup(30, seed, Restriction(30));
    CHECK(max_dual_magnitude(s.solution) >= 0.0);
    double m = 0;
    for (int i = 0; i < 30; ++i) m = std::max(m, s.costs(i, s.solution.assignment[i]));
    CHECK(max_matching_edge_cost(s.solution, s.costs) == m);
  }

  // An expensive forced edge is left out of the statistic.
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(5, 5, 0.1);
  d(0, 1) = 0.95;
  const CostMatrix c = CostMatrix::from_dense(d);
  const ApSolution forced = solve_ap(c, Restriction(5, {{0, 1}}, {}));
  CHECK(max_matching_edge_cost(forced, c) == 0.1);
}

TEST_CASE("contracted degrees") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 10 + static_cast<int>(seed);
    const auto s = setup(n, seed, Restriction(n));
    const ContractedDegrees cd = contract_and_degrees(basis_tree(s.costs, s.solution), s.solution);
    int sum = 0;
    for (int k : cd.out_degree) sum += k;
    CHECK(sum == n - 1);
    CHECK(cd.vertex_count == n);
    CHECK(cd.leaf_count >= 2);
    CHECK(cd.leaf_fraction() <= 1.0);
  }
}

TEST_CASE("star-shaped basis tree") {
  const int n = 6;
  const CostMatrix c = CostMatrix::constant(n, 0.5);
  const ApSolution s = solve_ap(c, Restriction(n));
  BasisTree star;
  for (int i = 0; i < n; ++i) star.edges.push_back({i, s.assignment[i]});
  // Row 0 reaches every other matched column.
  for (int i = 1; i < n; ++i) star.edges.push_back({0, s.assignment[i]});
  star.spanning = true;
  const ContractedDegrees cd = contract_and_degrees(star, s);
  CHECK(cd.out_degree[0] == n - 1);
  CHECK(cd.leaf_count == n - 1);

  BasisTree missing = star;
  missing.edges.erase(missing.edges.begin());
  CHECK_THROWS_AS(contract_and_degrees(missing, s), InvalidInput);
}
