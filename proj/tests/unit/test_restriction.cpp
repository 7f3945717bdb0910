#include <doctest.h>

#include "atsp/error.hpp"
#include "atsp/restriction.hpp"
#include "support.hpp"

using namespace atsp;

TEST_CASE("empty F1 has no inadmissible edges") {
  CHECK(derive_inadmissible({}, 5).empty());
}

TEST_CASE("two-edge path on four vertices") {
  // Path 0 -> 1 -> 2 on n = 4.
  const EdgeSet f1{{0, 1}, {1, 2}};
  EdgeSet expected;
  for (int j = 0; j < 4; ++j) {
    if (j != 0 && j != 1) expected.insert({0, j});
    if (j != 1 && j != 2) expected.insert({1, j});
  }
  for (int i = 0; i < 4; ++i) {
    if (i != 0 && i != 1) expected.insert({i, 1});
    if (i != 1 && i != 2) expected.insert({i, 2});
  }
  expected.insert({2, 0});
  CHECK(derive_inadmissible(f1, 4) == expected);
}

TEST_CASE("Hamilton path leaves only the closing edge") {
  const int n = 4;
  const EdgeSet path{{0, 1}, {1, 2}, {2, 3}};
  const Restriction r(n, path, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Edge e{i, j};
      if (e == Edge{3, 0}) {
        CHECK(r.admissible(e));
      } else {
        CHECK((r.forced_in().contains(e) || r.inadmissible().contains(e)));
      }
    }
  }
}

TEST_CASE("inconsistent F1 is rejected") {
  CHECK_THROWS_AS(derive_inadmissible({{0, 1}, {0, 2}}, 4), InconsistentRestriction);
  CHECK_THROWS_AS(derive_inadmissible({{0, 2}, {1, 2}}, 4), InconsistentRestriction);
  CHECK_THROWS_AS(derive_inadmissible({{0, 1}, {1, 0}}, 4), InconsistentRestriction);
  CHECK_THROWS_AS(derive_inadmissible({{1, 1}}, 4), InconsistentRestriction);
  CHECK_THROWS_AS(derive_inadmissible({{0, 7}}, 4), InconsistentRestriction);
  CHECK_NOTHROW(derive_inadmissible({{0, 1}, {1, 2}, {2, 0}}, 3));
  CHECK_THROWS_AS(Restriction(4, {{0, 1}}, {{0, 1}}), InconsistentRestriction);
}

TEST_CASE("sets stay pairwise disjoint when F0 overlaps the derived set") {
  const Restriction r(4, {{0, 1}}, {{0, 2}, {2, 3}});
  for (const Edge& e : r.inadmissible()) {
    CHECK_FALSE(r.forced_out().contains(e));
    CHECK_FALSE(r.forced_in().contains(e));
  }
  EdgeSet derived = derive_inadmissible(r.forced_in(), 4);
  EdgeSet both = r.inadmissible();
  both.insert(r.forced_out().begin(), r.forced_out().end());
  for (const Edge& e : derived) CHECK(both.contains(e));
}

TEST_CASE("property: an edge is inadmissible iff forcing it breaks F1") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(5));
    const Restriction r = testing::random_restriction(n, rng, 3, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || r.forced_in().contains({i, j})) continue;
        EdgeSet grown = r.forced_in();
        grown.insert({i, j});
        bool breaks = false;
        try {
          derive_inadmissible(grown, n);
        } catch (const InconsistentRestriction&) {
          breaks = true;
        }
        CHECK(breaks == r.inadmissible().contains({i, j}));
      }
    }
  }
}

TEST_CASE("matching constraints contract forced pairs") {
  const Restriction r(4, {{0, 1}}, {{2, 3}});
  MatchingConstraints m(r);
  CHECK_FALSE(m.row_free(0));
  CHECK_FALSE(m.col_free(1));
  CHECK_FALSE(m.allowed(2, 3));
  CHECK_FALSE(m.allowed(1, 0));  // closes a 2-cycle with (0, 1)
  CHECK(m.allowed(2, 0));
  CHECK(m.free_rows() == std::vector<int>{1, 2, 3});
  CHECK(m.admits({1, 2, 0, 3}) == false);  // fixed point
  CHECK(m.admits({1, 3, 0, 2}));
  CHECK_FALSE(m.admits({2, 3, 0, 1}));      // misses (0, 1)
  m.force({1, 2});
  CHECK_FALSE(m.row_free(1));
  CHECK_THROWS_AS(m.force({3, 2}), InvalidEdge);
  m.forbid({3, 0});
  CHECK_FALSE(m.allowed(3, 0));
}

TEST_CASE("size condition") {
  const Restriction r(1000, {{0, 1}, {1, 2}}, {{5, 6}});
  CHECK_FALSE(r.within_size_condition(0.2));  // |F1| = 2 > 1000^0.075
  const Restriction small(1000, {{0, 1}}, {{5, 6}});
  CHECK(small.within_size_condition(0.2));
}
