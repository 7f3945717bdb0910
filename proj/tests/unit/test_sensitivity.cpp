#include <doctest.h>

#include <set>

#include "atsp/assignment.hpp"
#include "atsp/error.hpp"
#include "support.hpp"

using namespace atsp;
using testing::near;

namespace {

// Cheapest feasible permutation through e, by enumeration.
double oracle_insertion(const CostMatrix& c, const Restriction& r, Edge e) {
  double best = testing::kInf;
  testing::for_each_derangement(c.n(), [&](const std::vector<int>& p) {
    if (p[e.tail] == e.head && testing::respects(r, p)) best = std::min(best, testing::perm_cost(c, p));
  });
  return best;
}

}  // namespace

TEST_CASE("insertion cost examples") {
  const CostMatrix c = testing::small3();
  const Restriction r(3);
  const ApSolution s = solve_ap(c, r);
  const Insertion ins = insertion_cost(c, r, s, {0, 2});
  CHECK(near(ins.delta, 1.5));
  CHECK(ins.matching == std::vector<int>{2, 0, 1});
  CHECK(near(ins.cost, 2.1));

  const Insertion same = insertion_cost(c, r, s, {0, 1});
  CHECK(same.delta == 0.0);
  CHECK(same.matching == s.assignment);

  const CostMatrix flat = CostMatrix::constant(6, 0.4);
  const ApSolution fs = solve_ap(flat, Restriction(6));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i != j) CHECK(insertion_cost(flat, Restriction(6), fs, {i, j}).delta == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("insertion into excluded edges is rejected") {
  const CostMatrix c = generate_uniform(5, 1);
  const Restriction r(5, {{0, 1}}, {{2, 3}});
  const ApSolution s = solve_ap(c, r);
  CHECK_THROWS_AS(insertion_cost(c, r, s, {2, 3}), InvalidEdge);
  CHECK_THROWS_AS(insertion_cost(c, r, s, {1, 0}), InvalidEdge);
  CHECK_THROWS_AS(insertion_cost(c, r, s, {0, 1}), InvalidEdge);
  CHECK_THROWS_AS(insertion_cost(c, r, s, {3, 3}), InvalidEdge);
}

TEST_CASE("property: insertion cost equals the exhaustive forced-edge minimum") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + trial % 4;
    const CostMatrix c = generate_uniform(n, 1000 + trial);
    const Restriction r = testing::random_restriction(n, rng, 2, 3);
    const ApSolution s = solve_ap(c, r);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Edge e{i, j};
        if (i == j || s.contains(e) || !r.admissible(e)) continue;
        const Insertion ins = insertion_cost(c, r, s, e);
        const double oracle = oracle_insertion(c, r, e);
        if (oracle == testing::kInf) {
          CHECK(ins.delta == testing::kInf);
        } else {
          CHECK(near(ins.delta, oracle - s.value));
          CHECK(testing::respects(r, ins.matching));
          CHECK(ins.matching[i] == j);
        }
      }
    }
  }
}

TEST_CASE("alternatives on a constant matrix") {
  const CostMatrix c = CostMatrix::constant(6, 0.3);
  AnalysisParams p = AnalysisParams::make(6, 0.2).with_d(3);
  const auto alts = alternatives(c, Restriction(6), p);
  REQUIRE(alts.items.size() == 3);
  CHECK_FALSE(alts.shortfall);
  for (const auto& a : alts.items) CHECK(near(a.cost, 6 * 0.3));
  CHECK(verify_alternatives(c, Restriction(6), alts, p.alt_threshold));
}

TEST_CASE("alternatives shortfall on the 3x3 example") {
  AnalysisParams p = AnalysisParams::make(3, 0.2);
  p.alt_threshold = 1.0;
  const auto alts = alternatives(testing::small3(), Restriction(3), p);
  CHECK(alts.items.empty());
  CHECK(alts.shortfall);
}

TEST_CASE("property: alternatives satisfy their contract") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 5 + trial % 6;
    const CostMatrix c = generate_uniform(n, 500 + trial);
    const Restriction r = testing::random_restriction(n, rng, 1, 2);
    AnalysisParams p = AnalysisParams::make(n, 0.2).with_d(3);
    p.alt_threshold = 0.15;
    for (bool forcing : {false, true}) {
      const auto alts = alternatives(c, r, p, {forcing});
      CHECK(verify_alternatives(c, r, alts, p.alt_threshold));
      CHECK(alts.shortfall == (static_cast<int>(alts.items.size()) < p.d));
      std::set<std::vector<int>> distinct;
      for (const auto& a : alts.items) {
        distinct.insert(a.matching);
        CHECK(a.cost - alts.base_value <= p.alt_threshold + 1e-12);
        if (forcing) CHECK(MatchingConstraints(r.with_forced_in(a.edge)).admits(a.matching));
      }
      CHECK(distinct.size() == alts.items.size());
    }
  }
}

TEST_CASE("alternatives at n = 50 (measured)") {
  int enough = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const CostMatrix c = generate_uniform(50, seed);
    const auto alts = alternatives(c, Restriction(50), AnalysisParams::make(50, 0.2));
    if (alts.items.size() >= 2) ++enough;
  }
  MESSAGE("n=50 seeds with >= 2 alternatives: " << enough << "/100");
}

TEST_CASE("basis tree") {
  SUBCASE("3x3 example") {
    const CostMatrix c = testing::small3();
    const ApSolution s = solve_ap(c, Restriction(3));
    const BasisTree t = basis_tree(c, s);
    CHECK(t.edges.size() == 5);
    CHECK(t.spanning);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::find(t.edges.begin(), t.edges.end(), Edge{i, s.assignment[i]}) != t.edges.end());
    }
  }
  SUBCASE("random instances") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const int n = 5 + static_cast<int>(seed % 20);
      const CostMatrix c = generate_uniform(n, seed);
      const ApSolution s = solve_ap(c, Restriction(n));
      const BasisTree t = basis_tree(c, s);
      CHECK(t.spanning);
      CHECK(static_cast<int>(t.edges.size()) == 2 * n - 1);
      CHECK_FALSE(t.degenerate);
      for (const Edge& e : t.edges) CHECK(std::abs(s.reduced_cost(c, e.tail, e.head)) <= 1e-9);
    }
  }
  SUBCASE("constant matrix") {
    const CostMatrix c = CostMatrix::constant(6, 0.5);
    const ApSolution s = solve_ap(c, Restriction(6));
    const BasisTree t = basis_tree(c, s);
    CHECK(t.spanning);
    CHECK(t.edges.size() == 11);
  }
  SUBCASE("restricted problem spans the free vertices") {
    const CostMatrix c = generate_uniform(8, 3);
    const ApSolution s = solve_ap(c, Restriction(8, {{0, 1}, {4, 5}}, {}));
    const BasisTree t = basis_tree(c, s);
    CHECK(t.vertex_count == 12);
    CHECK(t.edges.size() == 11);
  }
}

TEST_CASE("alternatives agree with ranked matchings") {
  // With k matchings within the threshold, at most k - 1 alternatives exist,
  // and a second matching within reach guarantees at least one.
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 6 + static_cast<int>(seed % 4);
    const CostMatrix c = generate_uniform(n, seed);
    AnalysisParams p = AnalysisParams::make(n, 0.2).with_d(4);
    p.alt_threshold = 0.02 * static_cast<double>(seed % 5 + 1);
    const auto all = testing::oracle_matching_costs(c);
    long within = 0;
    for (double x : all) within += x - all.front() <= p.alt_threshold ? 1 : 0;
    const auto alts = alternatives(c, Restriction(n), p);
    CHECK(static_cast<long>(alts.items.size()) <= within - 1);
    if (within >= 2) CHECK(alts.items.size() >= 1);
  }
}
