#pragma once

#include <json.hpp>

#include "atsp/assignment.hpp"
#include "atsp/bnb.hpp"
#include "atsp/tour.hpp"

namespace atsp {

// JSON number for finite values, the strings "inf"/"-inf"/"nan" otherwise.
nlohmann::json real_to_json(double x);
double real_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Edge& e);
nlohmann::json to_json(const EdgeSet& edges);
nlohmann::json to_json(const Tour& tour);
nlohmann::json to_json(const ApSolution& solution);
nlohmann::json to_json(const AnalysisParams& params);
nlohmann::json to_json(const BnbOptions& options);
// Counters, options and incumbent trace; the node list only if recorded.
nlohmann::json to_json(const BnbRun& run);
nlohmann::json to_json(const CountingReport& report);
nlohmann::json to_json(const WitnessTree& tree);
nlohmann::json to_json(const WitnessCheck& check);

// Inverse of to_json(ApSolution) for the matching, value and duals. The
// constraint set is not stored; the result has an unrestricted one.
ApSolution ap_solution_from_json(const nlohmann::json& j);

}  // namespace atsp
