#include <doctest.h>

#include <set>

#include "atsp/error.hpp"
#include "atsp/exact.hpp"
#include "support.hpp"

using namespace atsp;
using testing::near;

TEST_CASE("brute force AP examples") {
  CHECK(near(brute_force_ap(testing::small3(), Restriction(3)).cost, 0.6));
  CHECK(near(brute_force_ap(CostMatrix::constant(4, 0.25), Restriction(4)).cost, 1.0));
  EdgeSet out;
  for (int j = 1; j < 4; ++j) out.insert({0, j});
  CHECK_THROWS_AS(brute_force_ap(generate_uniform(4, 1), Restriction(4, {}, out)), Infeasible);
  CHECK_THROWS_AS(brute_force_ap(generate_uniform(11, 1), Restriction(11)), SizeGuard);
}

TEST_CASE("ATSP oracles") {
  CHECK(near(brute_force_atsp(testing::small3()).cost, 0.6));
  CHECK(near(held_karp(testing::small3()).cost, 0.6));
  CHECK(near(brute_force_atsp(CostMatrix::constant(5, 0.2)).cost, 1.0));
  CHECK(near(held_karp(CostMatrix::constant(12, 0.3)).cost, 3.6));
  CHECK_THROWS_AS(brute_force_atsp(generate_uniform(11, 1)), SizeGuard);
  CHECK_THROWS_AS(held_karp(generate_uniform(23, 1)), SizeGuard);
}

TEST_CASE("held-karp, brute force and the permutation oracle agree") {
  for (int n = 3; n <= 8; ++n) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const CostMatrix c = generate_uniform(n, seed * 7 + n);
      const Tour hk = held_karp(c);
      const Tour bf = brute_force_atsp(c);
      CHECK(near(hk.cost, bf.cost));
      CHECK(near(hk.cost, testing::oracle_atsp(c)));
      CHECK(validate_tour(hk, n));
      CHECK(hk.order.front() == 0);
      CHECK(hk.cost == assignment_cost(c, hk.successor()));
      CHECK(brute_force_ap(c, Restriction(n)).cost <= bf.cost + 1e-12);
    }
  }
}

TEST_CASE("k-best on the 3x3 example and a constant matrix") {
  const CostMatrix c3 = testing::small3();
  KBestStream s = kbest_matchings(c3, Restriction(3), 3.0, 100);
  auto a = s.next();
  auto b = s.next();
  REQUIRE(a);
  REQUIRE(b);
  CHECK(near(a->cost, 0.6));
  CHECK(near(b->cost, 2.1));
  CHECK_FALSE(s.next());

  const CostMatrix c4 = CostMatrix::constant(4, 0.5);
  KBestStream flat = kbest_matchings(c4, Restriction(4), 1e9, 9);
  std::set<std::vector<int>> seen;
  while (auto m = flat.next()) {
    CHECK(near(m->cost, 2.0));
    seen.insert(m->assignment);
  }
  CHECK(seen.size() == 9);
  KBestStream all = kbest_matchings(c4, Restriction(4), 1e9, 100);
  int count = 0;
  while (all.next()) ++count;
  CHECK(count == 9);  // derangements of four elements
}

TEST_CASE("k-best matches the sorted exhaustive list") {
  for (int n = 4; n <= 7; ++n) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const CostMatrix c = generate_uniform(n, seed + 100 * n);
      const auto expected = testing::oracle_matching_costs(c);
      KBestStream s(c, Restriction(n), testing::kInf, 1000000);
      std::vector<double> got;
      std::set<std::vector<int>> seen;
      while (auto m = s.next()) {
        got.push_back(m->cost);
        CHECK(seen.insert(m->assignment).second);
      }
      REQUIRE(got.size() == expected.size());
      for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == expected[k]);
      CHECK(s.emitted() == static_cast<long>(got.size()));
    }
  }
}

TEST_CASE("k-best respects a restriction") {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial % 3;
    const CostMatrix c = generate_uniform(n, 900 + trial);
    const Restriction r = testing::random_restriction(n, rng, 2, 3);
    std::vector<double> expected;
    testing::for_each_derangement(n, [&](const std::vector<int>& p) {
      if (testing::respects(r, p)) expected.push_back(testing::perm_cost(c, p));
    });
    std::sort(expected.begin(), expected.end());
    KBestStream s(c, r, testing::kInf, 1000000);
    std::vector<double> got;
    while (auto m = s.next()) {
      CHECK(testing::respects(r, m->assignment));
      got.push_back(m->cost);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("counting matchings below a threshold") {
  const CostMatrix c3 = testing::small3();
  CHECK(count_matchings_below(c3, 1.0) == 1);
  CHECK(count_matchings_below(c3, 0.6) == 0);
  CHECK(count_matchings_below(c3, 3.0) == 2);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CostMatrix c = generate_uniform(8, seed);
    const auto all = testing::oracle_matching_costs(c);
    const double z_ap = all.front();
    const double z_atsp = testing::oracle_atsp(c);
    CHECK(count_matchings_below(c, z_ap) == 0);
    const long expected = std::lower_bound(all.begin(), all.end(), z_atsp) - all.begin();
    CHECK(count_matchings_below(c, z_atsp) == expected);
    long prev = 0;
    for (double t = z_ap; t <= z_atsp + 0.2; t += 0.02) {
      const long k = count_matchings_below(c, t);
      CHECK(k >= prev);
      prev = k;
    }
  }
  ExactLimits tight;
  tight.kbest_max_count = 3;
  CHECK_THROWS_AS(count_matchings_below(CostMatrix::constant(5, 0.1), 10.0, tight), SizeGuard);
}
