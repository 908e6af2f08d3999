#include "mlmarket/market.hpp"

#include <cmath>
#include <numeric>

#include "mlmarket/errors.hpp"

namespace mlmarket {

UtilitySpec UtilitySpec::isoelastic(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw ValidationError("isoelastic eta must be positive and finite");
    }
    if (eta == 1.0) {
        return logarithmic();
    }
    return UtilitySpec(UtilityFamily::Isoelastic, eta);
}

double UtilitySpec::eta() const {
    if (family_ == UtilityFamily::Exponential) {
        throw UsageError("exponential utility has no eta parameter");
    }
    return eta_;
}

std::string to_string(UtilityFamily family) {
    switch (family) {
        case UtilityFamily::Logarithmic: return "logarithmic";
        case UtilityFamily::Exponential: return "exponential";
        case UtilityFamily::Isoelastic: return "isoelastic";
    }
    return "unknown";
}

MarketInstance::MarketInstance(std::vector<Agent> agents, std::size_t num_goods)
    : agents_(std::move(agents)), num_goods_(num_goods) {
    if (agents_.empty()) {
        throw ValidationError("market needs at least one agent");
    }
    if (num_goods_ == 0) {
        throw ValidationError("market needs at least one good");
    }
    double total_wealth = 0.0;
    for (const Agent& agent : agents_) {
        if (agent.belief.size() != num_goods_) {
            throw ValidationError("agent '" + agent.id + "' has belief length " +
                                  std::to_string(agent.belief.size()) + ", market has " +
                                  std::to_string(num_goods_) + " goods");
        }
        if (!(agent.wealth >= 0.0) || !std::isfinite(agent.wealth)) {
            throw ValidationError("agent '" + agent.id + "' has negative or non-finite wealth");
        }
        total_wealth += agent.wealth;
    }
    if (total_wealth <= 0.0) {
        throw ValidationError("total market wealth must be positive");
    }
    for (Agent& agent : agents_) {
        agent.wealth /= total_wealth;
    }
}

bool MarketInstance::homogeneous(UtilityFamily family) const {
    for (const Agent& agent : agents_) {
        if (agent.utility.family() != family) return false;
    }
    return true;
}

bool MarketInstance::homogeneous_eta(double& eta_out) const {
    if (agents_.front().utility.is_exponential()) return false;
    const double eta = agents_.front().utility.eta();
    for (const Agent& agent : agents_) {
        if (agent.utility.is_exponential() || agent.utility.eta() != eta) return false;
    }
    eta_out = eta;
    return true;
}

BeliefMatrix::BeliefMatrix(std::size_t num_agents, std::size_t num_instances,
                           std::vector<SimplexVec> rows)
    : num_agents_(num_agents), num_instances_(num_instances), rows_(std::move(rows)) {
    if (num_agents_ == 0 || num_instances_ == 0) {
        throw ValidationError("belief matrix needs at least one agent and one instance");
    }
    if (rows_.size() != num_agents_ * num_instances_) {
        throw ValidationError("belief matrix has " + std::to_string(rows_.size()) +
                              " rows, expected " + std::to_string(num_agents_ * num_instances_));
    }
    const std::size_t goods = rows_.front().size();
    for (const SimplexVec& row : rows_) {
        if (row.size() != goods) {
            throw ValidationError("belief matrix rows differ in length");
        }
    }
}

std::vector<SimplexVec> BeliefMatrix::instance_beliefs(std::size_t instance) const {
    std::vector<SimplexVec> out;
    out.reserve(num_agents_);
    for (std::size_t i = 0; i < num_agents_; ++i) {
        out.push_back(at(i, instance));
    }
    return out;
}

LabeledBeliefSet::LabeledBeliefSet(BeliefMatrix beliefs_in, std::vector<std::size_t> targets_in)
    : beliefs(std::move(beliefs_in)), targets(std::move(targets_in)) {
    if (targets.size() != beliefs.num_instances()) {
        throw ValidationError("target count does not match instance count");
    }
    for (std::size_t t : targets) {
        if (t >= beliefs.num_goods()) {
            throw ValidationError("target index " + std::to_string(t) + " out of range");
        }
    }
}

}  // namespace mlmarket
