#include "mlmarket/wealth.hpp"

#include <string>

#include "mlmarket/errors.hpp"

namespace mlmarket {

namespace {

MarketInstance build_market(const SimplexVec& wealths, const std::vector<UtilitySpec>& utilities,
                            const std::vector<SimplexVec>& beliefs) {
    if (wealths.size() != utilities.size() || wealths.size() != beliefs.size()) {
        throw ValidationError("wealths, utilities and beliefs must have one entry per agent");
    }
    std::vector<Agent> agents;
    agents.reserve(wealths.size());
    for (std::size_t i = 0; i < wealths.size(); ++i) {
        agents.push_back(Agent{"agent_" + std::to_string(i), utilities[i], wealths[i], beliefs[i]});
    }
    return MarketInstance(std::move(agents), beliefs.front().size());
}

// Wealth shares after paying out good `target` at the instance equilibrium.
std::vector<double> payoff_shares(const MarketInstance& market, std::size_t target,
                                  const SolverConfig& config) {
    const EquilibriumResult eq = solve_equilibrium(market, config);
    const std::vector<SimplexVec> effective = effective_beliefs(market, eq.c);
    std::vector<double> shares(market.num_agents());
    for (std::size_t i = 0; i < shares.size(); ++i) {
        shares[i] = market.agents()[i].wealth * effective[i][target];
    }
    return shares;
}

}  // namespace

Responsibilities::Responsibilities(std::size_t num_agents, std::size_t num_instances)
    : num_agents_(num_agents),
      num_instances_(num_instances),
      values_(num_agents * num_instances, 0.0) {
    if (num_agents_ == 0 || num_instances_ == 0) {
        throw ValidationError("responsibilities need at least one agent and one instance");
    }
}

SimplexVec Responsibilities::column(std::size_t instance) const {
    std::vector<double> col(num_agents_);
    for (std::size_t i = 0; i < num_agents_; ++i) {
        col[i] = at(i, instance);
    }
    return SimplexVec(std::move(col));
}

SimplexVec online_update_step(const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const std::vector<SimplexVec>& instance_beliefs,
                              std::size_t target, const SolverConfig& config) {
    if (instance_beliefs.empty() || target >= instance_beliefs.front().size()) {
        throw ValidationError("target index out of range");
    }
    const MarketInstance market = build_market(wealths, utilities, instance_beliefs);
    return normalize_simplex(payoff_shares(market, target, config));
}

OnlineEpochResult run_online_epoch(const SimplexVec& initial_wealths,
                                   const std::vector<UtilitySpec>& utilities,
                                   const LabeledBeliefSet& data, const SolverConfig& config) {
    OnlineEpochResult out{initial_wealths, {initial_wealths}};
    out.trajectory.reserve(data.targets.size() + 1);
    for (std::size_t t = 0; t < data.targets.size(); ++t) {
        out.final_wealths = online_update_step(out.final_wealths, utilities,
                                               data.beliefs.instance_beliefs(t), data.targets[t],
                                               config);
        out.trajectory.push_back(out.final_wealths);
    }
    return out;
}

Responsibilities batch_responsibilities(const SimplexVec& wealths,
                                        const std::vector<UtilitySpec>& utilities,
                                        const LabeledBeliefSet& data, const SolverConfig& config) {
    const std::size_t num_instances = data.targets.size();
    Responsibilities resp(wealths.size(), num_instances);
    // Start-of-epoch wealths fixed for every instance in the batch.
    for (std::size_t t = 0; t < num_instances; ++t) {
        const MarketInstance market =
            build_market(wealths, utilities, data.beliefs.instance_beliefs(t));
        const SimplexVec shares = normalize_simplex(payoff_shares(market, data.targets[t], config));
        for (std::size_t i = 0; i < wealths.size(); ++i) {
            resp.at(i, t) = shares[i];
        }
    }
    return resp;
}

SimplexVec batch_update_epoch(const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const LabeledBeliefSet& data, const SolverConfig& config) {
    const Responsibilities resp = batch_responsibilities(wealths, utilities, data, config);
    const double inv_count = 1.0 / static_cast<double>(resp.num_instances());
    std::vector<double> next(wealths.size(), 0.0);
    for (std::size_t i = 0; i < next.size(); ++i) {
        for (std::size_t t = 0; t < resp.num_instances(); ++t) {
            next[i] += resp.at(i, t);
        }
        next[i] *= inv_count;
    }
    return normalize_simplex(next);
}

}  // namespace mlmarket
