#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

/// Parsed belief interchange file: per-agent utilities, wealths and
/// per-instance beliefs, plus optional targets. Belief rows arrive floored
/// and renormalised; rows that needed renormalising are listed in
/// `warnings`. Wealths default to uniform when the file omits them.
struct BeliefFile {
    std::size_t num_goods = 0;
    std::vector<std::string> agent_ids;
    std::vector<UtilitySpec> utilities;
    std::vector<double> wealths;  // normalised to sum 1
    std::vector<SimplexVec> belief_rows;  // agent-major, num_agents x num_instances
    std::size_t num_instances = 0;
    std::optional<std::vector<std::size_t>> targets;  // zero-based good indices
    std::vector<std::string> warnings;

    BeliefMatrix matrix() const { return BeliefMatrix(agent_ids.size(), num_instances, belief_rows); }

    /// Market for one instance (agents carry their file wealths).
    MarketInstance market_for_instance(std::size_t instance) const;

    /// Targets are required for wealth updates; throws ValidationError if absent.
    LabeledBeliefSet labeled() const;
};

/// Loads and validates the JSON belief interchange format. Throws IoError if
/// the file cannot be read, ParseError (naming the agent and row) on
/// malformed content.
BeliefFile load_belief_matrix(const std::filesystem::path& path);

}  // namespace mlmarket
