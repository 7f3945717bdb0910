#include <doctest.h>

#include <map>

#include "atsp/bnb.hpp"
#include "atsp/error.hpp"
#include "atsp/serialize.hpp"
#include "support.hpp"

using namespace atsp;
using testing::near;

namespace {

std::vector<BnbOptions> all_options() {
  std::vector<BnbOptions> out;
  for (auto rule : {BranchRule::kShortestSubcycle, BranchRule::kMaxRegret}) {
    for (auto order : {SearchOrder::kBestFirst, SearchOrder::kDepthFirst}) {
      for (auto init : {IncumbentInit::kNone, IncumbentInit::kKarpPatch}) {
        for (bool ties : {true, false}) {
          BnbOptions o;
          o.branch_rule = rule;
          o.search_order = order;
          o.incumbent_init = init;
          o.prune_ties = ties;
          out.push_back(o);
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("branch and bound is exact under every option combination") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int n = 5 + static_cast<int>(seed % 7);
    const CostMatrix c = generate_uniform(n, seed);
    const double opt = held_karp(c).cost;
    for (const auto& o : all_options()) {
      const BnbRun run = solve_bnb(c, o);
      CHECK(run.completed);
      CHECK(near(run.tour.cost, opt));
      CHECK(validate_tour(run.tour, n));
      CHECK(run.nodes_explored >= 1);
    }
  }
}

TEST_CASE("constant matrix") {
  const BnbRun run = solve_bnb(CostMatrix::constant(7, 0.3));
  CHECK(near(run.tour.cost, 2.1));
}

TEST_CASE("recorded tree obeys the branching contract") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const int n = 8 + static_cast<int>(seed % 4);
    const CostMatrix c = generate_uniform(n, seed);
    for (auto o : all_options()) {
      o.record_tree = true;
      const BnbRun run = solve_bnb(c, o);
      REQUIRE(static_cast<long>(run.nodes.size()) == run.nodes_explored);

      std::map<NodeFate, long> fates;
      std::map<int, std::vector<int>> children;
      for (const auto& node : run.nodes) {
        ++fates[node.fate];
        if (node.parent >= 0) children[node.parent].push_back(node.id);
      }
      CHECK(fates[NodeFate::kOpen] == 0);
      CHECK(fates[NodeFate::kPruned] == run.nodes_pruned_by_bound);
      CHECK(fates[NodeFate::kFathomed] == run.nodes_fathomed_as_tours);
      CHECK(fates[NodeFate::kInfeasible] == run.nodes_infeasible);
      CHECK(run.nodes_explored == run.nodes_pruned_by_bound + run.nodes_fathomed_as_tours +
                                      run.nodes_infeasible + fates[NodeFate::kBranched]);

      for (const auto& node : run.nodes) {
        const auto& kids = children[node.id];
        if (node.fate != NodeFate::kBranched) {
          CHECK(kids.empty());
          continue;
        }
        REQUIRE((kids.size() == 1 || kids.size() == 2));
        for (int k : kids) {
          const BnbNode& child = run.nodes[static_cast<std::size_t>(k)];
          CHECK(child.bound >= node.bound - 1e-9);
          EdgeSet in = node.forced_in;
          EdgeSet out = node.forced_out;
          (child.direction == '+' ? in : out).insert(child.branch_edge);
          CHECK(child.forced_in == in);
          CHECK(child.forced_out == out);
        }
        if (kids.size() == 1) {
          // The + child is skipped only for an edge that cannot be forced.
          const BnbNode& only = run.nodes[static_cast<std::size_t>(kids[0])];
          CHECK(only.direction == '-');
          CHECK_FALSE(Restriction(n, node.forced_in, node.forced_out).admissible(only.branch_edge));
        }
      }
    }
  }
}

TEST_CASE("fathomed nodes carry tours and the incumbent only improves") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CostMatrix c = generate_uniform(10, seed);
    BnbOptions o;
    o.incumbent_init = IncumbentInit::kNone;
    const BnbRun run = solve_bnb(c, o);
    REQUIRE_FALSE(run.incumbent_history.empty());
    for (std::size_t k = 1; k < run.incumbent_history.size(); ++k) {
      CHECK(run.incumbent_history[k].cost < run.incumbent_history[k - 1].cost);
    }
    CHECK(run.incumbent_history.back().cost == run.tour.cost);
  }
}

TEST_CASE("node limit stops the search") {
  const CostMatrix c = generate_uniform(16, 4);
  BnbOptions o;
  o.node_limit = 3;
  o.incumbent_init = IncumbentInit::kNone;
  const BnbRun run = solve_bnb(c, o);
  CHECK(run.nodes_explored <= 5);
  CHECK(validate_tour(run.tour, 16));
  BnbOptions bad;
  bad.node_limit = -1;
  CHECK_THROWS_AS(solve_bnb(c, bad), InvalidRange);
}

TEST_CASE("option names round trip") {
  for (auto r : {BranchRule::kShortestSubcycle, BranchRule::kMaxRegret}) {
    CHECK(parse_branch_rule(to_string(r)) == r);
  }
  for (auto s : {SearchOrder::kBestFirst, SearchOrder::kDepthFirst}) {
    CHECK(parse_search_order(to_string(s)) == s);
  }
  for (auto i : {IncumbentInit::kNone, IncumbentInit::kKarpPatch}) {
    CHECK(parse_incumbent_init(to_string(i)) == i);
  }
  CHECK_THROWS_AS(parse_branch_rule("random"), InvalidInput);
}

TEST_CASE("run serializes counters, options and trace") {
  const BnbRun run = solve_bnb(generate_uniform(9, 2));
  const nlohmann::json j = to_json(run);
  CHECK(j.at("nodes_explored").get<long>() == run.nodes_explored);
  CHECK(j.at("options").at("branch_rule") == "shortest-subcycle");
  CHECK(j.at("incumbent_history").size() == run.incumbent_history.size());
  CHECK(j.at("tour").at("order").get<std::vector<int>>() == run.tour.order);
  CHECK_FALSE(j.contains("nodes"));
}

TEST_CASE("counting report echoes its inputs") {
  const CostMatrix c = generate_uniform(8, 3);
  const BnbRun run = solve_bnb(c);
  const CountingReport r = verify_counting_bound(run, c);
  CHECK(r.nodes_explored == run.nodes_explored);
  CHECK(near(r.z_atsp, testing::oracle_atsp(c)));
  CHECK(near(r.gap, r.z_atsp - r.z_ap));
  const auto all = testing::oracle_matching_costs(c);
  CHECK(r.cheap_matchings == std::lower_bound(all.begin(), all.end(), r.z_atsp) - all.begin());
  CHECK(r.holds == (r.nodes_explored >= r.cheap_matchings));
}

TEST_CASE("forcing an edge drops matchings that use its reverse") {
  // Matchings through both (a, b) and (b, a) are in neither child: the -
  // child forbids (a, b) and the + child marks (b, a) inadmissible.
  const CostMatrix c = generate_uniform(6, 1);
  const Restriction root(6);
  const Edge e{0, 1};
  const MatchingConstraints minus(root.with_forced_out(e));
  const MatchingConstraints plus(root.with_forced_in(e));
  long lost = 0;
  testing::for_each_derangement(6, [&](const std::vector<int>& p) {
    if (!minus.admits(p) && !plus.admits(p)) {
      CHECK(p[0] == 1);
      CHECK(p[1] == 0);
      ++lost;
    }
  });
  CHECK(lost == 9);  // derangements of the other four vertices
}
