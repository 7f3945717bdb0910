#include "atsp/serialize.hpp"

#include <cmath>

#include "atsp/error.hpp"

namespace atsp {

using nlohmann::json;

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw InvalidInput("expected a real number in JSON");
}

json to_json(const Edge& e) { return json::array({e.tail, e.head}); }

json to_json(const EdgeSet& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back(to_json(e));
  return out;
}

json to_json(const Tour& tour) { return {{"order", tour.order}, {"cost", real_to_json(tour.cost)}}; }

namespace {

json vector_to_json(const Eigen::VectorXd& x) {
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(real_to_json(x(i)));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = real_from_json(j[i]);
  return x;
}

const char* fate_name(NodeFate fate) {
  switch (fate) {
    case NodeFate::kOpen:
      return "open";
    case NodeFate::kBranched:
      return "branched";
    case NodeFate::kFathomed:
      return "fathomed";
    case NodeFate::kPruned:
      return "pruned";
    case NodeFate::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

}  // namespace

json to_json(const ApSolution& solution) {
  json forced = json::array();
  if (solution.constraints) {
    for (const Edge& e : solution.constraints->forced()) forced.push_back(to_json(e));
  }
  return {{"assignment", solution.assignment}, {"value", real_to_json(solution.value)},
          {"u", vector_to_json(solution.u)},   {"v", vector_to_json(solution.v)},
          {"n_free", solution.n_free},         {"m_free", solution.m_free},
          {"imin", solution.imin},             {"forced", forced}};
}

ApSolution ap_solution_from_json(const json& j) {
  try {
    ApSolution s;
    s.assignment = j.at("assignment").get<std::vector<int>>();
    s.value = real_from_json(j.at("value"));
    s.u = vector_from_json(j.at("u"));
    s.v = vector_from_json(j.at("v"));
    s.n_free = j.at("n_free").get<int>();
    s.m_free = j.at("m_free").get<long>();
    s.imin = j.at("imin").get<int>();
    EdgeSet forced;
    for (const auto& e : j.at("forced")) forced.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    const int n = static_cast<int>(s.assignment.size());
    s.constraints = std::make_shared<const MatchingConstraints>(Restriction(n, forced, {}));
    return s;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed ApSolution JSON: ") + e.what());
  }
}

json to_json(const AnalysisParams& p) {
  return {{"n", p.n},
          {"epsilon", real_to_json(p.epsilon)},
          {"zeta", p.zeta},
          {"gamma", real_to_json(p.gamma)},
          {"d", p.d},
          {"gap_threshold", real_to_json(p.gap_threshold)},
          {"alt_threshold", real_to_json(p.alt_threshold)},
          {"xi", real_to_json(p.xi)}};
}

json to_json(const BnbOptions& o) {
  return {{"branch_rule", to_string(o.branch_rule)},
          {"search_order", to_string(o.search_order)},
          {"incumbent_init", to_string(o.incumbent_init)},
          {"prune_ties", o.prune_ties},
          {"node_limit", o.node_limit},
          {"timeout_ms", o.timeout_ms}};
}

json to_json(const BnbRun& run) {
  json history = json::array();
  for (const auto& h : run.incumbent_history) {
    history.push_back({{"cost", real_to_json(h.cost)}, {"node", h.node}});
  }
  json out = {{"tour", to_json(run.tour)},
              {"nodes_explored", run.nodes_explored},
              {"nodes_pruned_by_bound", run.nodes_pruned_by_bound},
              {"nodes_fathomed_as_tours", run.nodes_fathomed_as_tours},
              {"nodes_infeasible", run.nodes_infeasible},
              {"max_depth", run.max_depth},
              {"completed", run.completed},
              {"incumbent_history", history},
              {"options", to_json(run.options)}};
  if (!run.nodes.empty()) {
    json nodes = json::array();
    for (const auto& node : run.nodes) {
      json entry = {{"id", node.id},
                    {"parent", node.parent},
                    {"depth", node.depth},
                    {"bound", real_to_json(node.bound)},
                    {"fate", fate_name(node.fate)},
                    {"forced_in", to_json(node.forced_in)},
                    {"forced_out", to_json(node.forced_out)}};
      if (node.parent >= 0) {
        entry["branch_edge"] = to_json(node.branch_edge);
        entry["direction"] = std::string(1, node.direction);
      }
      nodes.push_back(std::move(entry));
    }
    out["nodes"] = std::move(nodes);
  }
  return out;
}

json to_json(const CountingReport& r) {
  return {{"nodes_explored", r.nodes_explored}, {"cheap_matchings", r.cheap_matchings},
          {"holds", r.holds},                   {"z_ap", real_to_json(r.z_ap)},
          {"z_atsp", real_to_json(r.z_atsp)},   {"gap", real_to_json(r.gap)}};
}

json to_json(const WitnessTree& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json entry = {{"parent", node.parent},
                  {"depth", node.depth},
                  {"forced_in", to_json(node.forced_in)},
                  {"forced_out", to_json(node.forced_out)},
                  {"matching", node.matching},
                  {"cost", real_to_json(node.cost)},
                  {"z_ap", real_to_json(node.z_ap)},
                  {"children", node.children},
                  {"shortfall", node.shortfall}};
    if (node.parent >= 0) entry["edge"] = to_json(node.edge);
    nodes.push_back(std::move(entry));
  }
  return {{"d", tree.d},
          {"depth_limit", tree.depth_limit},
          {"z_ap", real_to_json(tree.z_ap)},
          {"alt_threshold", real_to_json(tree.alt_threshold)},
          {"complete", tree.complete},
          {"leaves", tree.leaves()},
          {"nodes", nodes}};
}

json to_json(const WitnessCheck& c) {
  return {{"leaves_distinct", c.leaves_distinct},
          {"bookkeeping_exact", c.bookkeeping_exact},
          {"feasible", c.feasible},
          {"cost_window", c.cost_window},
          {"ok", c.ok()}};
}

}  // namespace atsp
