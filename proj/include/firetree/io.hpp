#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "firetree/core.hpp"

namespace firetree {

// Instance files: {n, edges, root, target_set, weights?, budget|budgets,
// forbidden?, meta?}. Unknown keys are rejected.
nlohmann::ordered_json instance_to_json(
    const TreeInstance& inst, const std::map<std::string, double>& meta = {});
TreeInstance instance_from_json(const nlohmann::json& j,
                                std::map<std::string, double>* meta = nullptr);

// Strategy files: {moves: [{vertex, time}]}.
nlohmann::ordered_json strategy_to_json(const Strategy& strat);
Strategy strategy_from_json(const nlohmann::json& j);

nlohmann::ordered_json outcome_to_json(const SimulationOutcome& out, bool trace);
SimulationOutcome outcome_from_json(const nlohmann::json& j);

// Parse a file's JSON, throwing Error(BadInput) with the parse message.
nlohmann::json load_json_file(const std::string& path);

// Write-then-rename so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace firetree
